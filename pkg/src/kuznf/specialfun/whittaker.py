"""The classical Whittaker function W and its unit-norm real normalization.

W_{k,nu}(y) is computed from the integral representation

    W = e^{-y/2} y^k / Gamma(1/2 - k + nu) *
        int_0^inf e^{-y t} t^(nu-k-1/2) (1+t)^(nu+k-1/2) dt,

valid for Re(1/2 - k + nu) > 0, on the substitution t = e^v (trapezoid with
exponentially vanishing tails).  Larger k is reached by the contiguous
recurrence

    W_{k+1,nu}(y) = (y - 2k) W_{k,nu}(y) - (k - 1/2 - nu)(k - 1/2 + nu) W_{k-1,nu}(y),

starting from the always-valid pair k in {-1, 0}.

The normalized weight-q function divides by the square root of
Gamma(1/2 - nu + sgn(y) q/2) Gamma(1/2 + nu + sgn(y) q/2) and carries the
i^(sgn(y) q/2) phase; at poles of the Gamma product it vanishes by the
continuity convention.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import eval_genlaguerre
from scipy.special import gamma as _gamma
from scipy.special import rgamma as _rgamma

from ..errors import DomainError

_POLE_GAP = 1e-8


def _w_base_grid(k: int, nu: complex, ys: np.ndarray) -> np.ndarray:
    """W_{k,nu} on a positive grid via the integral representation.

    Requires Re(1/2 - k + nu) > 0; used with k in {-1, 0} where the
    exponent is at least 1/2 away from the boundary for spectral nu.
    """
    sigma0 = 0.5 - k + nu.real
    if sigma0 <= 1e-3:
        raise DomainError(f"integral representation needs Re(1/2-k+nu) > 0, "
                          f"got {sigma0:.3g}")
    g = complex(_gamma(complex(0.5 - k + nu)))
    if not np.isfinite(g.real) or abs(g) < 1e-290:
        raise DomainError(f"Gamma(1/2-k+nu) pole at k={k}, nu={nu}")
    h = 0.12
    ymin = float(np.min(ys))
    v_lo = -(42.0 + 4.0 * abs(nu)) / min(sigma0, 1.0)
    v_hi = math.log((46.0 + 8.0 * abs(nu)) / ymin) + 2.0
    vs = np.arange(v_lo, v_hi, h)
    ev = np.exp(vs)
    # weights: t^(nu-k-1/2) dt = e^(v (nu-k+1/2)) dv
    base = np.exp(vs * (nu - k + 0.5)) * np.power(1.0 + ev, nu + k - 0.5)
    mat = np.exp(-np.outer(ys, ev))
    integral = mat @ base * h
    return np.exp(-ys / 2.0 + (nu + 0.5) * np.log(ys)) * integral / g


def whittaker_w_grid(k: int | float, nu: complex, ys) -> np.ndarray:
    """W_{k,nu} on an array of positive arguments; integer-ish k only."""
    ys = np.asarray(ys, dtype=float)
    if np.any(ys <= 0):
        raise DomainError("arguments must be positive")
    nu = complex(nu)
    kk = float(k)
    if abs(kk - round(kk)) > 1e-12:
        # non-integer shift: single integral representation if valid
        if 0.5 - kk + nu.real > 1e-3:
            return _w_base_grid(kk, nu, ys)  # type: ignore[arg-type]
        raise DomainError("non-integer k needs Re(1/2-k+nu) > 0")
    kk = int(round(kk))
    # terminating (Laguerre) cases are exact polynomials; catching them here
    # also avoids recurrence cancellation at small argument
    if abs(nu.imag) < 1e-14:
        n = kk - nu.real - 0.5
        if abs(n - round(n)) < 1e-12 and round(n) >= 0:
            n = int(round(n))
            lag = eval_genlaguerre(n, 2.0 * nu.real, ys)
            sign = -1.0 if n % 2 else 1.0
            return (sign * math.factorial(n) * lag
                    * np.exp(-ys / 2.0 + (nu + 0.5) * np.log(ys)))
    if kk <= 0 and 0.5 - kk + nu.real > 1e-3:
        return _w_base_grid(kk, nu, ys)
    # upward recurrence from the always-valid pair (k0-1, k0), k0 = 0
    _check_recurrence_poles(kk, nu)
    w_prev = _w_base_grid(-1, nu, ys)
    w_cur = _w_base_grid(0, nu, ys)
    for j in range(0, kk):
        w_next = (ys - 2.0 * j) * w_cur - ((j - 0.5) ** 2 - nu * nu) * w_prev
        w_prev, w_cur = w_cur, w_next
    return w_cur


def _check_recurrence_poles(k: int, nu: complex) -> None:
    # the recurrence itself is polynomial; only the base integrals can fail,
    # and they cannot for Re nu > -1/2.  Guard anyway for far-out nu.
    if 0.5 + 1 + nu.real <= 1e-3:
        raise DomainError(f"nu too far left for the base representation: {nu}")


def whittaker_w(k: int | float, nu: complex, y: float, tol: float = 1e-10) -> complex:
    """Classical W_{k,nu}(y) for y > 0."""
    return complex(whittaker_w_grid(k, nu, np.array([float(y)]))[0])


def _gamma_pair_product(q: int, nu: complex, sign: int) -> complex:
    a = 0.5 - nu + sign * q / 2.0
    b = 0.5 + nu + sign * q / 2.0
    ra, rb = complex(_rgamma(complex(a))), complex(_rgamma(complex(b)))
    return ra * rb  # reciprocal of the product; zero marks a pole


def whittaker_real_norm(q: int, nu: complex, y: float) -> complex:
    """The unit-norm real-place Whittaker function at nonzero real y."""
    if q % 2 != 0:
        raise DomainError(f"weight must be even, got {q}")
    if y == 0:
        raise DomainError("argument must be nonzero")
    s = 1 if y > 0 else -1
    recip = _gamma_pair_product(q, complex(nu), s)
    if recip == 0:
        return 0.0 + 0.0j  # Gamma-product pole: vanishes by continuity
    prod = 1.0 / recip
    if abs(prod.imag) > 1e-8 * abs(prod):
        raise DomainError(f"Gamma product not real for q={q}, nu={nu}")
    if prod.real < 0:
        raise DomainError(
            f"Gamma product negative for q={q}, nu={nu}, sgn(y)={s}: "
            "parameter outside the unitary range")
    w = whittaker_w(s * q // 2, complex(nu), 4.0 * math.pi * abs(y))
    return (1j ** ((s * q // 2) % 4)) * w / math.sqrt(prod.real)


def _norm_grid(q: int, nu: complex, s: int, us: np.ndarray) -> np.ndarray:
    """|script-W(s * e^u)|^2 on a log grid (vectorized)."""
    recip = _gamma_pair_product(q, nu, s)
    if recip == 0:
        return np.zeros(us.shape)
    prod = 1.0 / recip
    if prod.real < 0 or abs(prod.imag) > 1e-8 * abs(prod):
        raise DomainError(f"Gamma product invalid for q={q}, nu={nu}, sign {s}")
    ws = whittaker_w_grid(s * q // 2, nu, 4.0 * math.pi * np.exp(us))
    return np.abs(ws) ** 2 / prod.real


def whittaker_real_norm_integral(q: int, nu: complex, tol: float = 1e-8) -> float:
    """int over R^x of |script-W_{q,nu}(y)|^2 dy/|y| by adaptive log-grid sums.

    Equals 1 on the unitary range (the identity the acceptance suite pins).
    """
    if q % 2 != 0:
        raise DomainError(f"weight must be even, got {q}")
    nu = complex(nu)
    h = 0.05
    total = 0.0
    for s in (1, -1):
        if _gamma_pair_product(q, nu, s) == 0:
            continue  # that sign contributes 0 identically
        # central block, then march both tails until negligible
        us = np.arange(-14.0, 4.0, h)
        vals = _norm_grid(q, nu, s, us)
        acc = float(vals.sum() * h)
        lo = -14.0
        for _ in range(40):
            us = np.arange(lo - 12.0, lo, h)
            block = float(_norm_grid(q, nu, s, us).sum() * h)
            acc += block
            lo -= 12.0
            if block < 0.25 * tol * max(acc, 1e-6):
                break
        hi = 4.0
        for _ in range(10):
            us = np.arange(hi, hi + 4.0, h)
            block = float(_norm_grid(q, nu, s, us).sum() * h)
            acc += block
            hi += 4.0
            if block < 0.25 * tol * max(acc, 1e-6):
                break
        total += acc
    return total
