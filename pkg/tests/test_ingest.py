import json
import os

import pytest

from kuznf.errors import ParseError, RemoteFetchError, RemoteNotFoundError
from kuznf.ingest import (
    MaassFormRecord,
    fetch_remote,
    load_dataset,
    load_dataset_verbose,
    serialize_dataset,
)
from kuznf.numberfield import FracIdeal, make_field
from kuznf.spectral import WeightFunctionH

Q = make_field("Q")


def ideal_key(n):
    return FracIdeal.principal(Q.element(n)).canonical_key()


def valid_doc():
    return {
        "version": 1,
        "field": "Q",
        "forms": [
            {
                "nu": [[0.0, 9.533]],
                "p": [None],
                "eps": [0],
                "weight": [0],
                "coeffs": {ideal_key(1): [1.0, 0.0], ideal_key(2): [0.5, 0.1]},
                "convention": "lambda",
                "source": "unit test",
            }
        ],
    }


def write(tmp_path, doc, name="data.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


class TestLoad:
    def test_empty_file_with_header(self, tmp_path):
        doc = valid_doc()
        doc["forms"] = []
        assert load_dataset(write(tmp_path, doc), Q) == []

    def test_basic_load(self, tmp_path):
        recs = load_dataset(write(tmp_path, valid_doc()), Q)
        assert len(recs) == 1
        rec = recs[0]
        assert rec.coefficient(FracIdeal.principal(Q.element(2))) == 0.5 + 0.1j
        assert rec.coefficient(FracIdeal.principal(Q.element(7))) is None
        half = FracIdeal.from_generators(Q, [Q.element(1) / Q.element(2)])
        assert rec.coefficient(half) == 0  # nonintegral index

    def test_rho_convention_renormalized(self, tmp_path):
        doc = valid_doc()
        doc["forms"][0]["convention"] = "rho"
        doc["forms"][0]["coeffs"] = {ideal_key(4): [1.0, 0.0]}
        rec = load_dataset(write(tmp_path, doc), Q)[0]
        assert rec.coefficient(FracIdeal.principal(Q.element(4))) == pytest.approx(2.0)

    def test_out_of_domain_nu_rejected_with_reason(self, tmp_path):
        doc = valid_doc()
        doc["forms"][0]["nu"] = [[2.3, 0.0]]  # outside every real branch
        recs, rejections = load_dataset_verbose(write(tmp_path, doc), Q)
        assert recs == []
        assert len(rejections) == 1
        assert "nu" in rejections[0]["reason"]

    def test_schema_violations_raise_parse_error(self, tmp_path):
        doc = valid_doc()
        del doc["forms"][0]["convention"]
        with pytest.raises(ParseError) as err:
            load_dataset(write(tmp_path, doc), Q)
        assert "convention" in str(err.value)
        doc = valid_doc()
        doc["version"] = 99
        with pytest.raises(ParseError):
            load_dataset(write(tmp_path, doc), Q)
        doc = valid_doc()
        doc["field"] = "Q(sqrt(5))"
        with pytest.raises(ParseError):
            load_dataset(write(tmp_path, doc), Q)

    def test_round_trip_is_canonical(self, tmp_path):
        recs = load_dataset(write(tmp_path, valid_doc()), Q)
        text1 = serialize_dataset(recs, Q)
        path2 = tmp_path / "canon.json"
        path2.write_text(text1)
        recs2 = load_dataset(str(path2), Q)
        assert serialize_dataset(recs2, Q) == text1

    def test_reloaded_records_satisfy_domain_invariants(self, tmp_path):
        recs = load_dataset(write(tmp_path, valid_doc()), Q)
        for rec in recs:
            for sp in rec.spectral:
                # reconstructing the params re-runs every domain check
                type(sp)(sp.place_kind, sp.nu, p=sp.p, eps=sp.eps)

    def test_weight_h(self, tmp_path):
        rec = load_dataset(write(tmp_path, valid_doc()), Q)[0]
        h = WeightFunctionH.from_field(Q, [2.0])
        import math
        want = math.exp((-(9.533 ** 2) - 0.25) / 2.0)
        assert rec.weight_h(h) == pytest.approx(want)


class RecordingTransport:
    def __init__(self, status=200, payload=None, fail=False):
        self.calls = []
        self.status = status
        self.payload = payload if payload is not None else \
            json.dumps(valid_doc()).encode()
        self.fail = fail

    def __call__(self, url):
        self.calls.append(url)
        if self.fail:
            raise RemoteFetchError("synthetic network failure")
        return self.status, self.payload


class TestFetchRemote:
    def test_fetch_writes_cache(self, tmp_path):
        tr = RecordingTransport()
        path = fetch_remote("http://example.invalid/api", {"level": 1},
                            str(tmp_path), transport=tr)
        assert os.path.exists(path)
        assert len(tr.calls) == 1
        assert load_dataset(path, Q)

    def test_cache_hit_skips_network(self, tmp_path):
        tr = RecordingTransport()
        args = ("http://example.invalid/api", {"level": 1}, str(tmp_path))
        p1 = fetch_remote(*args, transport=tr)
        p2 = fetch_remote(*args, transport=tr)
        assert p1 == p2
        assert len(tr.calls) == 1

    def test_404_typed_error(self, tmp_path):
        tr = RecordingTransport(status=404)
        with pytest.raises(RemoteNotFoundError):
            fetch_remote("http://example.invalid/api", {"level": 2},
                         str(tmp_path), transport=tr)

    def test_truncated_payload_leaves_cache_untouched(self, tmp_path):
        tr = RecordingTransport(payload=b'{"version": 1, "forms": [')
        with pytest.raises(ParseError):
            fetch_remote("http://example.invalid/api", {"level": 3},
                         str(tmp_path), transport=tr)
        assert not [f for f in os.listdir(tmp_path) if f.endswith(".json")]

    def test_network_failure_propagates(self, tmp_path):
        tr = RecordingTransport(fail=True)
        with pytest.raises(RemoteFetchError):
            fetch_remote("http://example.invalid/api", {"level": 4},
                         str(tmp_path), transport=tr)
