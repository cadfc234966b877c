"""The ``kuznf`` command line: evaluation, verification and assembly.

Every subcommand emits structured JSON (or CSV rows with --output csv);
identical configuration and seed produce byte-identical output.  A JSON
config file can prefill any flag of the chosen subcommand.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import __version__, backend
from .errors import KuznfError
from .numberfield import FracIdeal, k_index, make_field
from .specialfun import bessel_i, bessel_j, bessel_k, j_star, kernel_complex, kernel_real

CACHE_ENV = "KUZNF_CACHE_DIR"


def _parse_complex(text: str) -> complex:
    return complex(text.replace(" ", "").replace("i", "j"))


def _parse_element(field, spec) -> "FieldElement":
    """Coordinates as exact rationals: '3/2' or ['3/2', '1']."""
    if isinstance(spec, str):
        spec = [spec]
    coords = [Fraction(s) for s in spec]
    if field.degree == 2 and len(coords) == 1:
        coords.append(Fraction(0))
    return field.element(*coords)


def _emit(args, payload: dict) -> None:
    payload = dict(payload)
    payload["provenance"] = {
        "tool": f"kuznf {__version__}",
        "backend": backend.BACKEND,
        "seed": getattr(args, "seed", None),
        "command": args.command,
    }
    if getattr(args, "output", "json") == "csv":
        rows = payload.get("checks") or payload.get("choices") or [payload]
        buf = io.StringIO()
        flat_rows = [_flatten(r) for r in rows]
        fields = sorted({k for r in flat_rows for k in r})
        writer = csv.DictWriter(buf, fieldnames=fields)
        writer.writeheader()
        for r in flat_rows:
            writer.writerow(r)
        sys.stdout.write(buf.getvalue())
    else:
        sys.stdout.write(json.dumps(payload, sort_keys=True, default=_jsonify,
                                    indent=1) + "\n")


def _flatten(row, prefix=""):
    out = {}
    if not isinstance(row, dict):
        return {prefix or "value": _jsonify(row)}
    for k, v in row.items():
        key = f"{prefix}.{k}" if prefix else str(k)
        if isinstance(v, dict):
            out.update(_flatten(v, key))
        else:
            out[key] = _jsonify(v)
    return out


def _jsonify(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonify(x) for x in v]
    return v


def _load_config_defaults(parser, args, argv):
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            overrides = json.load(fh)
        parser.set_defaults(**overrides)
        args = parser.parse_args(argv)
    return args


# --- subcommand handlers -----------------------------------------------------------


def cmd_field(args):
    fd = make_field(args.spec)
    _emit(args, {
        "spec": fd.spec_string(),
        "degree": fd.degree,
        "disc": fd.disc,
        "signature": list(fd.signature),
        "integral_basis": list(fd.integral_basis),
        "different": fd.different.to_json(),
        "different_norm": _jsonify(fd.different.norm()),
    })
    return 0


def cmd_ideal(args):
    fd = make_field(args.field)
    i = FracIdeal.from_json(fd, json.loads(args.i))
    j = FracIdeal.from_json(fd, json.loads(args.j)) if args.j else None
    from .numberfield import ideal_arith
    result = ideal_arith(args.op, i, j)
    if isinstance(result, FracIdeal):
        payload = {"result": result.to_json(), "norm": _jsonify(result.norm())}
    else:
        payload = {"result": _jsonify(result)}
    _emit(args, payload)
    return 0


def cmd_kloosterman(args):
    from .kloosterman import KloostermanQuery, kloosterman_sum, weil_margin
    fd = make_field(args.field)
    o = FracIdeal.ring_of_integers(fd)
    def ideal_of(text):
        return FracIdeal.from_json(fd, json.loads(text)) if text else o
    query = KloostermanQuery(
        _parse_element(fd, json.loads(args.alpha1)),
        ideal_of(args.a1),
        _parse_element(fd, json.loads(args.alpha2)),
        ideal_of(args.a2),
        _parse_element(fd, json.loads(args.c)),
        ideal_of(args.frak_c),
    )
    res = kloosterman_sum(query, term_cap=args.term_cap)
    margin = weil_margin(query)
    _emit(args, {
        "value_re": res.value.real,
        "value_im": res.value.imag,
        "terms": res.term_count,
        "modulus_norm": _jsonify(res.modulus_norm),
        "weil_cap": margin["weil_cap"],
        "weil_asserted": margin["asserted"],
    })
    return 0


def cmd_specialfun(args):
    fn = args.fn
    z = _parse_complex(args.z)
    nu = _parse_complex(args.nu) if args.nu else None
    est = None
    if fn == "kernel_complex":
        val = kernel_complex(nu, args.p or 0, z)
    elif fn == "kernel_real":
        val = kernel_real(nu, z.real)
    elif fn == "bessel_k":
        val = bessel_k(nu, z.real, tol=args.tolerance or 1e-10)
    elif fn == "bessel_i":
        val = bessel_i(nu, z.real, tol=args.tolerance or 1e-10)
    elif fn == "bessel_j":
        val = bessel_j(nu, z.real, tol=args.tolerance or 1e-10)
    elif fn == "j_star":
        val = j_star(nu, z)
    elif fn == "whittaker_w":
        from .specialfun import whittaker_w
        val = whittaker_w(args.k or 0, nu, z.real)
    elif fn == "whittaker_real_norm":
        from .specialfun import whittaker_real_norm
        val = whittaker_real_norm(args.q if args.q is not None else 0, nu, z.real)
    else:
        raise KuznfError(f"unknown function {fn!r}")
    _emit(args, {"re": val.real, "im": val.imag,
                 "est_err": est if est is not None else 0.0})
    return 0


def cmd_verify(args):
    from .verify import run_verify_suite
    report = run_verify_suite(
        scope=args.scope, tolerance=args.tolerance, seed=args.seed,
        workers=args.workers, full=args.full, c_max=args.c_max)
    _emit(args, report)
    if not report["passed"]:
        first = report["failures"][0]
        sys.stderr.write(f"FAILED: {first['identity']} "
                         f"(deviation {first['deviation']:.3e} > "
                         f"{first['tolerance']:.3e})\n")
        return 1
    return 0


def cmd_transform(args):
    from .spectral import MeasureConfig, PlaceWeight, WeightFunctionH, bessel_transform_h
    kinds = args.places.split(",") if args.places else None
    a_vals = [float(x) for x in args.a.split(",")]
    zs = [_parse_complex(x) for x in args.z.split(",")]
    if kinds is None:
        kinds = ["real" if abs(z.imag) < 1e-15 else "complex" for z in zs]
    kinds = [{"r": "real", "c": "complex"}.get(k, k) for k in kinds]
    h = WeightFunctionH(tuple(PlaceWeight(k, a) for k, a in zip(kinds, a_vals)))
    cfg = MeasureConfig(nodes=args.nodes)
    val, tail = bessel_transform_h(h, zs, cfg)
    _emit(args, {"re": val.real, "im": val.imag, "tail": tail})
    return 0


def _instance_from_config(doc) -> "FormulaInstance":
    from .formula import FormulaInstance
    from .spectral import MeasureConfig, WeightFunctionH
    fd = make_field(doc["field"])
    cfg_doc = doc.get("cfg", {})
    cfg = MeasureConfig(
        t_max=cfg_doc.get("t_max"),
        nodes=cfg_doc.get("nodes", 16),
        p_max=cfg_doc.get("p_max"),
        discrete_cap=cfg_doc.get("discrete_cap", 60.5),
    )
    return FormulaInstance(
        field=fd,
        frak_a=FracIdeal.from_json(fd, doc["frak_a"]),
        frak_a_prime=FracIdeal.from_json(fd, doc["frak_a_prime"]),
        alpha=_parse_element(fd, doc["alpha"]),
        alpha_prime=_parse_element(fd, doc["alpha_prime"]),
        frak_c=FracIdeal.from_json(fd, doc["frak_c"]),
        h=WeightFunctionH.from_field(fd, doc["h_a"]),
        cfg=cfg,
        c_norm_cap=doc.get("c_norm_cap", 50),
        unit_direction_cap=doc.get("unit_direction_cap", 1e4),
        const_delta=doc.get("const_delta", 1.0),
        const_ks=doc.get("const_ks", 1.0),
    )


def cmd_geometric_side(args):
    from .formula import geometric_side
    with open(args.instance, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    inst = _instance_from_config(doc)
    res = geometric_side(inst)
    _emit(args, {
        "delta_term": _jsonify(res.delta_term),
        "ks_term": _jsonify(res.ks_term),
        "tail_bound": res.tail_bound,
        "terms_used": res.terms_used,
        "caps": {"c_norm_cap": inst.c_norm_cap, "nodes": inst.cfg.nodes},
    })
    return 0


def cmd_residual(args):
    from .formula import residual_report
    from .ingest import load_dataset_verbose
    from .spectral import WeightFunctionH
    with open(args.instance, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    inst = _instance_from_config(doc)
    records, rejections = load_dataset_verbose(args.data, inst.field)
    family = [WeightFunctionH.from_field(inst.field, a_list)
              for a_list in doc.get("h_family", [doc["h_a"]])]
    report = residual_report(inst, records, family)
    report["forms_loaded"] = len(records)
    report["forms_rejected"] = rejections
    _emit(args, report)
    return 0


def cmd_fetch(args):
    from .ingest import fetch_remote
    cache = args.cache_dir or os.environ.get(CACHE_ENV) or ".kuznf-cache"
    query = dict(kv.split("=", 1) for kv in (args.query or []))
    path = fetch_remote(args.base_url, query, cache)
    _emit(args, {"path": path, "cache_dir": cache})
    return 0


# --- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kuznf",
        description="Kloosterman sums, Bessel kernels and the geometric side "
                    "of a Kuznetsov-type sum formula over Q and quadratic fields.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", choices=["json", "csv"], default="json")
        p.add_argument("--seed", type=int, default=20260809)
        p.add_argument("--config", help="JSON file prefilling this subcommand's flags")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    p = sub.add_parser("field", help="describe a number field")
    p.add_argument("--spec", required=True)
    common(p)
    p.set_defaults(handler=cmd_field)

    p = sub.add_parser("ideal", help="fractional ideal arithmetic")
    p.add_argument("--field", required=True)
    p.add_argument("--op", required=True,
                   choices=["product", "inverse", "equality-test", "norm"])
    p.add_argument("--i", required=True, help="ideal JSON {den, basis}")
    p.add_argument("--j", help="second ideal JSON")
    common(p)
    p.set_defaults(handler=cmd_ideal)

    p = sub.add_parser("kloosterman", help="evaluate a generalized Kloosterman sum")
    p.add_argument("--field", default="Q")
    p.add_argument("--alpha1", required=True, help='element coords JSON, e.g. \'["1"]\'')
    p.add_argument("--alpha2", required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--a1", help="ideal JSON (default: ring of integers)")
    p.add_argument("--a2", help="ideal JSON")
    p.add_argument("--frak-c", dest="frak_c", help="ideal JSON")
    p.add_argument("--term-cap", dest="term_cap", type=int, default=10**6)
    common(p)
    p.set_defaults(handler=cmd_kloosterman)

    p = sub.add_parser("specialfun", help="evaluate a special function")
    p.add_argument("action", choices=["eval"])
    p.add_argument("--fn", required=True)
    p.add_argument("--nu", help="complex like 0+1i")
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--z", required=True, help="complex like 0.5+0.5i")
    p.add_argument("--tolerance", type=float)
    common(p)
    p.set_defaults(handler=cmd_specialfun)

    p = sub.add_parser("verify", help="run identity/property suites")
    p.add_argument("--scope", default="all",
                   choices=["whittaker", "gw", "kloosterman", "kernels",
                            "measure", "all"])
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--full", action="store_true",
                   help="full parameter grids (acceptance scale)")
    p.add_argument("--c-max", dest="c_max", type=int, default=100)
    common(p)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("transform", help="Bessel transform of the weight family")
    p.add_argument("--a", required=True, help="comma list of weight parameters")
    p.add_argument("--z", required=True, help="comma list of kernel arguments")
    p.add_argument("--places", help="comma list r/c; inferred from z if omitted")
    p.add_argument("--nodes", type=int, default=16)
    common(p)
    p.set_defaults(handler=cmd_transform)

    p = sub.add_parser("geometric-side", help="assemble the geometric side")
    p.add_argument("--config", dest="instance", required=True,
                   help="instance JSON file")
    p.add_argument("--output", choices=["json", "csv"], default="json")
    p.add_argument("--seed", type=int, default=20260809)
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.set_defaults(handler=cmd_geometric_side)

    p = sub.add_parser("residual", help="compare both sides on a dataset")
    p.add_argument("--config", dest="instance", required=True)
    p.add_argument("--data", required=True, help="coefficient dataset JSON")
    p.add_argument("--output", choices=["json", "csv"], default="json")
    p.add_argument("--seed", type=int, default=20260809)
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.set_defaults(handler=cmd_residual)

    p = sub.add_parser("fetch", help="fetch a remote dataset into the cache")
    p.add_argument("--base-url", dest="base_url", required=True)
    p.add_argument("--query", nargs="*", help="key=value pairs")
    p.add_argument("--cache-dir", dest="cache_dir",
                   help=f"cache directory (or ${CACHE_ENV})")
    common(p)
    p.set_defaults(handler=cmd_fetch)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None) and args.command not in (
            "geometric-side", "residual"):
        args = _load_config_defaults(parser, args, argv)
    try:
        return args.handler(args)
    except KuznfError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
