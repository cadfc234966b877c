"""Loading, validating and fetching automorphic-form coefficient datasets.

Dataset schema (JSON, self-describing):

    {
      "version": 1,
      "field": "Q" | "Q(sqrt(d))",
      "forms": [
        {
          "nu": [[re, im], ...]            one entry per archimedean place
          "p": [int or null, ...]          complex places only (null at real)
          "eps": [0|1 or null, ...]        optional sign characters
          "weight": [q or [l, q], ...]     per place
          "coeffs": {"<ideal key>": [re, im], ...},
          "convention": "lambda" | "rho",
          "central_char": optional string,
          "source": provenance string
        }, ...
      ]
    }

Ideal keys are the canonical serialization produced by
``FracIdeal.canonical_key()`` ({"basis": [[..]], "den": n}, compact JSON,
sorted keys).  Files declaring the "rho" convention are renormalized on
load: lambda(m) = rho(m) * sqrt(||m||).

The remote fetcher is transport-injectable and caches responses under a
content-addressed name; a cache hit never touches the network.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
import urllib.parse
import urllib.request
from dataclasses import dataclass, field

from .errors import (
    DomainError,
    ParseError,
    RemoteFetchError,
    RemoteNotFoundError,
)
from .numberfield import FieldDescriptor, FracIdeal, make_field
from .specialfun import SpectralParam, WeightSpec
from .spectral import WeightFunctionH, h_eval

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class MaassFormRecord:
    """One ingested form: archimedean data plus normalized coefficients."""

    spectral: tuple[SpectralParam, ...]
    weight: tuple[WeightSpec, ...]
    coeffs: dict  # canonical ideal key -> complex lambda
    central_char: str | None = None
    source: str = ""

    def coefficient(self, ideal: FracIdeal):
        """lambda at an ideal index: zero when nonintegral, None when absent."""
        if not ideal.is_integral():
            return 0.0 + 0.0j
        val = self.coeffs.get(ideal.canonical_key())
        return None if val is None else complex(val)

    def weight_h(self, h: WeightFunctionH) -> float:
        """The product weight h(nu_f, p_f) over all places."""
        total = 1.0
        for place, sp in zip(h.per_place, self.spectral):
            if place.kind != sp.place_kind:
                raise DomainError("record places do not match the weight family")
            total *= h_eval(place, sp.nu, sp.p)
        return total


def _parse_complex_pair(obj, *, path, record, fieldname) -> complex:
    if not (isinstance(obj, (list, tuple)) and len(obj) == 2):
        raise ParseError("expected [re, im] pair", path=path, record=record,
                         field=fieldname)
    return complex(float(obj[0]), float(obj[1]))


def load_dataset_verbose(path, fd: FieldDescriptor):
    """Parse and validate a dataset file.

    Returns (records, rejections); schema-level problems raise ParseError,
    per-record domain violations land in the rejection report instead.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}", path=path) from exc
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", path=path)
    if data.get("version") != SCHEMA_VERSION:
        raise ParseError(f"unrecognized schema version {data.get('version')!r}",
                         path=path, field="version")
    declared = data.get("field")
    if declared != fd.spec_string():
        raise ParseError(f"dataset field {declared!r} does not match "
                         f"{fd.spec_string()!r}", path=path, field="field")
    forms = data.get("forms")
    if not isinstance(forms, list):
        raise ParseError("'forms' must be a list", path=path, field="forms")

    r, s = fd.signature
    kinds = ["real"] * r + ["complex"] * s
    records: list[MaassFormRecord] = []
    rejections: list[dict] = []
    for i, raw in enumerate(forms):
        try:
            records.append(_parse_form(raw, kinds, fd, path=path, record=i))
        except DomainError as exc:
            rejections.append({"record": i, "reason": str(exc)})
    return records, rejections


def _parse_form(raw, kinds, fd, *, path, record) -> MaassFormRecord:
    for key in ("nu", "weight", "coeffs", "convention"):
        if key not in raw:
            raise ParseError(f"missing key '{key}'", path=path, record=record,
                             field=key)
    nus = raw["nu"]
    if not isinstance(nus, list) or len(nus) != len(kinds):
        raise ParseError(f"'nu' must list {len(kinds)} place entries",
                         path=path, record=record, field="nu")
    ps = raw.get("p") or [None] * len(kinds)
    eps = raw.get("eps") or [None] * len(kinds)
    weights = raw["weight"]
    if not isinstance(weights, list) or len(weights) != len(kinds):
        raise ParseError(f"'weight' must list {len(kinds)} place entries",
                         path=path, record=record, field="weight")

    spectral = []
    weight = []
    for j, kind in enumerate(kinds):
        nu = _parse_complex_pair(nus[j], path=path, record=record, fieldname="nu")
        if kind == "real":
            spectral.append(SpectralParam("real", nu,
                                          eps=None if eps[j] is None else int(eps[j])))
            weight.append(WeightSpec("real", int(weights[j])))
        else:
            if ps[j] is None:
                raise ParseError("complex place requires p", path=path,
                                 record=record, field="p")
            spectral.append(SpectralParam("complex", nu, p=int(ps[j])))
            lw = weights[j]
            if not (isinstance(lw, (list, tuple)) and len(lw) == 2):
                raise ParseError("complex weight must be [l, q]", path=path,
                                 record=record, field="weight")
            weight.append(WeightSpec("complex", int(lw[1]), l=int(lw[0])))
            if not weight[-1].compatible_with(spectral[-1]):
                raise DomainError(f"weight l={lw[0]} below |p|={ps[j]}")

    convention = raw["convention"]
    if convention not in ("lambda", "rho"):
        raise ParseError(f"unknown convention {convention!r}", path=path,
                         record=record, field="convention")
    coeffs = {}
    raw_coeffs = raw["coeffs"]
    if not isinstance(raw_coeffs, dict):
        raise ParseError("'coeffs' must be an object", path=path,
                         record=record, field="coeffs")
    for key, pair in raw_coeffs.items():
        try:
            ideal = FracIdeal.from_json(fd, key)
        except Exception as exc:
            raise ParseError(f"bad ideal key {key!r}: {exc}", path=path,
                             record=record, field="coeffs") from exc
        if not ideal.is_integral():
            raise DomainError(f"coefficient at nonintegral ideal {key!r}")
        val = _parse_complex_pair(pair, path=path, record=record,
                                  fieldname="coeffs")
        if convention == "rho":
            val *= math.sqrt(float(ideal.norm()))
        coeffs[ideal.canonical_key()] = val
    return MaassFormRecord(tuple(spectral), tuple(weight), coeffs,
                           raw.get("central_char"), raw.get("source", ""))


def load_dataset(path, fd: FieldDescriptor) -> list[MaassFormRecord]:
    records, _rejections = load_dataset_verbose(path, fd)
    return records


def serialize_dataset(records, fd: FieldDescriptor) -> str:
    """Canonical JSON for a record list (lambda convention, sorted keys)."""
    forms = []
    for rec in records:
        form = {
            "nu": [[complex(sp.nu).real, complex(sp.nu).imag] for sp in rec.spectral],
            "p": [sp.p for sp in rec.spectral],
            "eps": [sp.eps for sp in rec.spectral],
            "weight": [w.q if w.place_kind == "real" else [w.l, w.q]
                       for w in rec.weight],
            "coeffs": {k: [v.real, v.imag]
                       for k, v in sorted(rec.coeffs.items())},
            "convention": "lambda",
            "central_char": rec.central_char,
            "source": rec.source,
        }
        forms.append(form)
    doc = {"version": SCHEMA_VERSION, "field": fd.spec_string(), "forms": forms}
    return json.dumps(doc, sort_keys=True, indent=1)


# --- remote fetch ---------------------------------------------------------------


def default_transport(url: str):
    """Plain HTTP GET returning (status, payload bytes)."""
    try:
        with urllib.request.urlopen(url, timeout=30) as resp:
            return resp.status, resp.read()
    except urllib.error.HTTPError as exc:
        return exc.code, b""
    except Exception as exc:
        raise RemoteFetchError(f"network failure fetching {url}: {exc}") from exc


def fetch_remote(base_url: str, query: dict, cache_dir, transport=None) -> str:
    """Fetch a dataset into the cache, returning the local path.

    The cache key is the content hash of the full request URL; a cache hit
    returns immediately without invoking the transport.  Malformed payloads
    raise ParseError and leave the cache untouched.
    """
    os.makedirs(cache_dir, exist_ok=True)
    url = base_url + "?" + urllib.parse.urlencode(sorted(query.items()))
    digest = hashlib.sha256(url.encode()).hexdigest()[:24]
    path = os.path.join(cache_dir, f"dataset-{digest}.json")
    if os.path.exists(path):
        return path
    transport = transport or default_transport
    try:
        status, payload = transport(url)
    except RemoteFetchError:
        raise
    except Exception as exc:
        raise RemoteFetchError(f"transport failed for {url}: {exc}") from exc
    if status == 404:
        raise RemoteNotFoundError(f"no dataset at {url}")
    if status != 200:
        raise RemoteFetchError(f"HTTP {status} fetching {url}")
    try:
        doc = json.loads(payload.decode("utf-8"))
        if not isinstance(doc, dict) or doc.get("version") != SCHEMA_VERSION:
            raise ValueError("missing or wrong schema version")
    except Exception as exc:
        raise ParseError(f"remote payload malformed: {exc}", path=url) from exc
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".part")
    with os.fdopen(fd, "wb") as fh:
        fh.write(payload)
    os.replace(tmp, path)
    return path
