"""Property and identity verification suites.

Each suite returns a list of check rows {identity, params, deviation,
tolerance, passed}; the CLI serializes them and exit-codes on failures.
Functions resolve the checked operations through their modules at call
time, so fault injection by attribute patching is visible to the harness.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import kloosterman as _kl
from .jacquet import (
    IwasawaPoint,
    complex_norm_integral,
    jacquet_a_norm_closed,
    jacquet_a_norm_quadrature,
    verify_gw_identities,
)
from .numberfield import FracIdeal, make_field
from .specialfun import kernels as _kernels
from .specialfun import whittaker_real_norm_integral
from .spectral import (
    MeasureConfig,
    PlaceWeight,
    WeightFunctionH,
    bessel_transform_h,
    h_eval,
    integrate_weight,
    mu_integrate,
)


def _row(identity: str, params, deviation: float, tolerance: float) -> dict:
    return {
        "identity": identity,
        "params": params,
        "deviation": float(deviation),
        "tolerance": float(tolerance),
        "passed": bool(deviation <= tolerance),
    }


# --- whittaker ------------------------------------------------------------------

REAL_NORM_PARAMS = [
    (0, 1j), (2, 1j), (4, 2j),                # principal
    (0, 0.25), (2, 0.3), (0, 0.45),           # complementary
    (4, 1.5), (4, 0.5), (6, 2.5),             # discrete
]

COMPLEX_NORM_QUICK = [(1, 0, 1j, 0), (2, 1, 2j, 1), (1, 0, 0.3, 0)]


def complex_norm_params_full():
    out = []
    for l in range(0, 3):
        for p in range(-l, l + 1):
            for q in range(-l, l + 1):
                for nu in (1j, 2j, 0.3):
                    if nu == 0.3 and p != 0:
                        continue
                    out.append((l, q, nu, p))
    return out


def suite_whittaker(tolerance: float = 1e-6, full: bool = False) -> list[dict]:
    rows = []
    for q, nu in REAL_NORM_PARAMS:
        val = whittaker_real_norm_integral(q, complex(nu))
        rows.append(_row("real Whittaker norm-one", {"q": q, "nu": str(nu)},
                         abs(val - 1.0), tolerance))
    params = complex_norm_params_full() if full else COMPLEX_NORM_QUICK
    for l, q, nu, p in params:
        val = complex_norm_integral(l, q, complex(nu), p)
        rows.append(_row("complex Whittaker norm-one",
                         {"l": l, "q": q, "nu": str(nu), "p": p},
                         abs(val - 1.0), tolerance))
    for l, q, nu, p in params:
        closed = jacquet_a_norm_closed(l, q, complex(nu), p)
        quad = jacquet_a_norm_quadrature(l, q, complex(nu), p)
        rows.append(_row("Jacquet a(y)-norm closed form vs quadrature",
                         {"l": l, "q": q, "nu": str(nu), "p": p},
                         abs(quad - closed) / abs(closed), tolerance))
    return rows


# --- Goodman-Wallach operator identities ------------------------------------------

GW_POINTS = [
    (0.0 + 0.0j, 0.8, (1.0 + 0.0j, 0.0j)),
    (0.2 + 0.1j, 0.9, (complex(0.6, 0.48), complex(0.384, 0.512))),
    (-0.3j, 1.0, (complex(0.8, 0.0), complex(0.0, 0.6))),
]

GW_CASES = [
    # (omega1, omega2, l, q, nu, p)
    (0.0, 1.0, 0, 0, 1.2, 0),
    (0.0, 1.5, 1, 1, 1.4, 0),
    (0.0, 1.0, 1, 0, 1.4, 1),
    (0.5, 0.5, 0, 0, 1.2, 0),
    (0.5, 0.5, 1, 1, 1.2, 0),
    (0.8, 0.5, 1, 0, 1.4, 1),
    (0.5, 0.5, 1, -1, 1.4, 1),
]


def suite_gw(tolerance: float = 1e-4) -> list[dict]:
    pts = [IwasawaPoint(x, y, k) for (x, y, k) in GW_POINTS]
    rows = []
    for omega1, omega2, l, q, nu, p in GW_CASES:
        rep = verify_gw_identities(omega1, omega2, l, q, nu, p, pts,
                                   tol=tolerance)
        rows.append(_row(f"operator identity {rep['identity']}",
                         {"omega1": omega1, "omega2": omega2, "l": l,
                          "q": q, "nu": nu, "p": p},
                         rep["max_rel_dev"], tolerance))
    return rows


# --- Kloosterman -------------------------------------------------------------------


def _ks_batch(args) -> list[dict]:
    c_lo, c_hi, freq_max, tolerance = args
    field = make_field("Q")
    rows = []
    for c in range(c_lo, c_hi):
        worst = 0.0
        for m in range(-freq_max, freq_max + 1):
            for n in range(m, freq_max + 1):
                got = _kl.kloosterman_sum(
                    _kl.trivial_rational_query(field, m, n, c),
                    validate=False).value
                want = _kl.classical_kloosterman(m, n, c)
                worst = max(worst, abs(got - want))
        rows.append(_row("Q-equivalence of the generalized sum",
                         {"c": c, "freq_max": freq_max}, worst, tolerance))
    return rows


def suite_kloosterman(tolerance: float = 1e-9, c_max: int = 100,
                      freq_max: int = 5, workers: int = 1) -> list[dict]:
    rows: list[dict] = []
    batches = [(lo, min(lo + 10, c_max + 1), freq_max, tolerance)
               for lo in range(1, c_max + 1, 10)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_ks_batch, batches):
                rows.extend(part)
    else:
        for batch in batches:
            rows.extend(_ks_batch(batch))
    # Weil bound on nondegenerate enumerated cases
    field = make_field("Q")
    worst_margin = 0.0
    for c in range(1, c_max + 1):
        for (m, n) in [(1, 1), (1, 2), (2, 3), (1, 5)]:
            rep = _kl.weil_margin(_kl.trivial_rational_query(field, m, n, c))
            if rep["asserted"]:
                worst_margin = max(worst_margin, rep["ratio"])
    rows.append(_row("Weil bound |S| <= d(c) gcd^(1/2) c^(1/2)",
                     {"c_max": c_max}, max(0.0, worst_margin - 1.0), 0.0))
    # quadratic-field sanity: representative independence + conjugation
    from fractions import Fraction
    for spec, elems in (("Q(sqrt(-1))", [(2, 1), (3, 0), (1, 2)]),
                        ("Q(sqrt(2))", [(2, 0), (0, 1), (1, 1)])):
        f = make_field(spec)
        o = FracIdeal.ring_of_integers(f)
        dinv = f.different.inverse()
        alpha = dinv.basis_elements()[-1]
        for coords in elems:
            c = f.element(*coords)
            if abs(c.norm()) == 0 or abs(c.norm()) > 40:
                continue
            q = _kl.KloostermanQuery(alpha, o, alpha, o, c, o)
            base = _kl.kloosterman_sum(q).value
            spread = max(abs(_kl.kloosterman_sum(q, shuffle_seed=s).value - base)
                         for s in range(10))
            rows.append(_row("representative independence",
                             {"field": spec, "c": coords}, spread, 1e-10))
            conj = _kl.kloosterman_sum(
                _kl.KloostermanQuery(-alpha, o, -alpha, o, c, o)).value
            rows.append(_row("conjugation symmetry",
                             {"field": spec, "c": coords},
                             abs(base.conjugate() - conj), 1e-10))
    return rows


# --- kernels ----------------------------------------------------------------------


def suite_kernels(tolerance: float = 1e-9, seed: int = 20260809,
                  draws: int = 100) -> list[dict]:
    rng = random.Random(seed)
    rows = []
    worst_sym = worst_real = 0.0
    for _ in range(draws):
        t = rng.uniform(0.05, 3.5)
        z = rng.uniform(0.05, 6.0)
        a = _kernels.kernel_real(1j * t, z)
        b = _kernels.kernel_real(-1j * t, z)
        worst_sym = max(worst_sym, abs(a - b) / max(abs(a), 1e-300))
        worst_real = max(worst_real, abs(a.imag) / max(abs(a), 1e-300))
    rows.append(_row("real kernel symmetry B(-nu) = B(nu)",
                     {"draws": draws, "seed": seed}, worst_sym, tolerance))
    rows.append(_row("real kernel reality on the principal axis",
                     {"draws": draws, "seed": seed}, worst_real, tolerance))
    worst_inv = worst_creal = 0.0
    for _ in range(draws):
        t = rng.uniform(0.05, 2.5)
        p = rng.randint(-3, 3)
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(z) < 0.1:
            continue
        a = _kernels.kernel_complex(1j * t, p, z)
        b = _kernels.kernel_complex(-1j * t, -p, z)
        worst_inv = max(worst_inv, abs(a - b) / max(abs(a), 1e-300))
        zr = rng.uniform(0.1, 4.0)
        c = _kernels.kernel_complex(1j * t, 0, zr)
        worst_creal = max(worst_creal, abs(c.imag) / max(abs(c), 1e-300))
    rows.append(_row("complex kernel invariance B(-nu,-p) = B(nu,p)",
                     {"draws": draws, "seed": seed}, worst_inv, tolerance))
    rows.append(_row("complex kernel reality at p=0, real argument",
                     {"draws": draws, "seed": seed}, worst_creal, tolerance))
    return rows


# --- measure ----------------------------------------------------------------------


def suite_measure(tolerance: float = 1e-9, seed: int = 20260809) -> list[dict]:
    rng = random.Random(seed)
    rows = []
    r2 = PlaceWeight("real", 2.0)
    c3 = PlaceWeight("complex", 3.0)
    worst = 0.0
    for _ in range(60):
        t = rng.uniform(0, 4)
        worst = max(worst, abs(h_eval(r2, 1j * t) - h_eval(r2, -1j * t)))
        p = rng.randint(-3, 3)
        worst = max(worst, abs(h_eval(c3, 1j * t, p) - h_eval(c3, -1j * t, -p)))
        if h_eval(r2, 1j * t) < 0 or h_eval(c3, 1j * t, p) < 0:
            worst = max(worst, 1.0)
    rows.append(_row("weight family symmetry and positivity", {"seed": seed},
                     worst, tolerance))
    def f1(nus):
        return np.array([h_eval(r2, nu) for nu in nus])
    def f2(nus):
        return np.exp(np.asarray(nus) ** 2 / 5.0).real + 0.0
    v1, _ = mu_integrate(r2, f1)
    v2, _ = mu_integrate(r2, lambda nus: np.asarray(f2(nus)))
    v12, _ = mu_integrate(r2, lambda nus: 2 * f1(nus) + 3 * np.asarray(f2(nus)))
    rows.append(_row("measure linearity", {}, abs(v12 - 2 * v1 - 3 * v2)
                     / max(abs(v12), 1e-300), 1e-10))
    val, _ = integrate_weight(r2)
    rows.append(_row("real-place contour integrand is net real", {},
                     abs(val.imag) / max(abs(val), 1e-300), 1e-10))
    h = WeightFunctionH((r2,))
    coarse, _ = bessel_transform_h(h, [0.7], MeasureConfig(nodes=16))
    fine, _ = bessel_transform_h(h, [0.7], MeasureConfig(nodes=32))
    rows.append(_row("transform node-doubling stability", {"z": 0.7},
                     abs(coarse - fine) / max(abs(fine), 1e-300), 1e-7))
    val1, tail1 = integrate_weight(r2, MeasureConfig())
    t1 = MeasureConfig().effective_t_max(2.0)
    val2, _ = integrate_weight(r2, MeasureConfig(t_max=2 * t1))
    rows.append(_row("tail estimate bounds t_max doubling", {},
                     0.0 if abs(val2 - val1) <= tail1 + 1e-15 else
                     abs(val2 - val1) - tail1, 0.0))
    return rows


SCOPES = {
    "whittaker": lambda **kw: suite_whittaker(
        tolerance=kw.get("tolerance") or 1e-6, full=kw.get("full", False)),
    "gw": lambda **kw: suite_gw(tolerance=kw.get("tolerance") or 1e-4),
    "kloosterman": lambda **kw: suite_kloosterman(
        tolerance=kw.get("tolerance") or 1e-9,
        c_max=kw.get("c_max", 100), workers=kw.get("workers", 1)),
    "kernels": lambda **kw: suite_kernels(
        tolerance=kw.get("tolerance") or 1e-9, seed=kw.get("seed", 20260809)),
    "measure": lambda **kw: suite_measure(
        tolerance=kw.get("tolerance") or 1e-9, seed=kw.get("seed", 20260809)),
}


def run_verify_suite(scope: str = "all", **kw) -> dict:
    """Run the named suites; the report carries one row per identity."""
    names = list(SCOPES) if scope == "all" else [scope]
    for name in names:
        if name not in SCOPES:
            raise ValueError(f"unknown verify scope {name!r}; "
                             f"choose from {sorted(SCOPES)} or 'all'")
    rows = []
    for name in names:
        for row in SCOPES[name](**kw):
            row["scope"] = name
            rows.append(row)
    return {
        "schema": 1,
        "scope": scope,
        "checks": rows,
        "failures": [r for r in rows if not r["passed"]],
        "passed": all(r["passed"] for r in rows),
    }
