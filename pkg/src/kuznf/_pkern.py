"""Pure-Python/numpy backend for the hot kernels.

Functionally identical to the compiled ``_ckern`` extension; selected at
import time by :mod:`kuznf.backend` when the extension is unavailable or
explicitly disabled.  Batch entry points vectorize over the argument (or
order) axis with numpy.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import rgamma as _scipy_rgamma

from .quadrature import (
    GL200_W,
    GL200_X,
    decay_panel_count,
    gl_panels,
    trapezoid_params_k,
)


def rgamma(z: complex) -> complex:
    return complex(_scipy_rgamma(complex(z)))


# --- entire Bessel-type series ------------------------------------------------


def _series_kmax(qmax: float) -> int:
    # terms q^k/(k! (k+mu)!) turn over near k ~ sqrt(q); 4x covers the tail
    return 24 + int(4.0 * math.sqrt(max(qmax, 0.0)))


def _alt_series_q(mu: complex, q, sign: int):
    """sum_k sign^k q^k / (k! Gamma(mu+k+1)) for scalar mu and array q.

    Reciprocal-gamma tables avoid the recurrence poles at negative integer
    orders.  Returns (sum, amplification = largest term / |sum|).
    """
    q = np.asarray(q, dtype=complex)
    kmax = _series_kmax(float(np.max(np.abs(q))))
    ks = np.arange(kmax + 1)
    rgs = _scipy_rgamma(mu + 1.0 + ks).astype(complex)
    pow_term = np.ones(q.shape, dtype=complex)
    total = np.full(q.shape, rgs[0], dtype=complex)
    biggest = np.abs(total)
    for k in range(1, kmax + 1):
        pow_term = pow_term * (sign * q) / k
        term = pow_term * rgs[k]
        total += term
        np.maximum(biggest, np.abs(term), out=biggest)
    amp = biggest / np.maximum(np.abs(total), 1e-300)
    return total, amp


def _alt_series_mus(mus, q: complex, sign: int):
    """Same series with array order and scalar q."""
    mus = np.asarray(mus, dtype=complex)
    kmax = _series_kmax(abs(q))
    ks = np.arange(kmax + 1)
    rgs = _scipy_rgamma(mus[:, None] + 1.0 + ks[None, :]).astype(complex)
    pows = np.empty(kmax + 1, dtype=complex)
    pows[0] = 1.0
    for k in range(1, kmax + 1):
        pows[k] = pows[k - 1] * (sign * q) / k
    terms = rgs * pows[None, :]
    total = terms.sum(axis=1)
    biggest = np.abs(terms).max(axis=1)
    amp = biggest / np.maximum(np.abs(total), 1e-300)
    return total, amp


def j_star(nu: complex, z: complex) -> complex:
    """Even entire function equal to J_nu(z) (z/2)^(-nu) for z > 0."""
    s, _ = _alt_series_q(nu, np.array([z * z / 4.0]), -1)
    return complex(s[0])


def j_star_nus(nus, z: complex):
    s, _ = _alt_series_mus(nus, z * z / 4.0, -1)
    return s


# --- K-Bessel -------------------------------------------------------------------


def bessel_k_xs(mu: complex, xs):
    """K_mu at an array of positive arguments, trapezoid on the even line.

    The error estimate is dominated by summation roundoff against the
    oscillatory cancellation of cosh(mu t), measured by the ratio of the
    absolute integrand mass to the result.
    """
    xs = np.asarray(xs, dtype=float)
    out = np.empty(xs.shape, dtype=complex)
    errs = np.empty(xs.shape, dtype=float)
    a, b = abs(mu.real), abs(mu.imag)
    for i, x in np.ndenumerate(xs):
        h, t_max = trapezoid_params_k(a, b, x)
        ts = np.arange(0.0, t_max + h, h)
        vals = np.exp(-x * np.cosh(ts)) * np.cosh(mu * ts)
        vals[0] *= 0.5
        total = vals.sum() * h
        mass = np.abs(vals).sum() * h
        out[i] = total
        errs[i] = 3e-16 * mass / max(abs(total), 1e-300)
    return out, errs


def bessel_k(mu: complex, x: float):
    v, e = bessel_k_xs(complex(mu), np.array([x]))
    return complex(v[0]), float(e[0])


# --- I and J Bessel ---------------------------------------------------------------


def _series_ij(mu: complex, xs, sign: int):
    xs = np.asarray(xs, dtype=float)
    s, amp = _alt_series_q(mu, xs * xs / 4.0, sign)
    pref = np.exp(mu * np.log(xs / 2.0))
    return pref * s, amp * 3e-16


def _integral_i(mu: complex, x: float):
    """DLMF 10.32.4, valid for x > 0 and any order."""
    th = 0.5 * math.pi * (GL200_X + 1.0)
    w = 0.5 * math.pi * GL200_W
    first = np.sum(w * np.exp(x * np.cos(th)) * np.cos(mu * th)) / math.pi
    a = abs(mu.real)
    width, count = decay_panel_count(x, a, sinh_kernel=False)
    ts, ws = gl_panels(0.0, width * count, width)
    second = np.sum(ws * np.exp(-x * np.cosh(ts) - mu * ts))
    val = first - np.sin(mu * math.pi) * second / math.pi
    amp = math.exp(abs(mu.imag) * math.pi) * (math.exp(x) + abs(second))
    err = 3e-16 * amp / max(abs(val), 1e-300)
    return complex(val), err


def _integral_j(mu: complex, x: float):
    """DLMF 10.9.6, valid for x > 0 and any order."""
    th = 0.5 * math.pi * (GL200_X + 1.0)
    w = 0.5 * math.pi * GL200_W
    first = np.sum(w * np.cos(x * np.sin(th) - mu * th)) / math.pi
    a = abs(mu.real)
    width, count = decay_panel_count(x, a, sinh_kernel=True)
    ts, ws = gl_panels(0.0, width * count, width)
    second = np.sum(ws * np.exp(-x * np.sinh(ts) - mu * ts))
    val = first - np.sin(mu * math.pi) * second / math.pi
    amp = math.exp(abs(mu.imag) * math.pi) * (1.0 + abs(second))
    err = 3e-16 * amp / max(abs(val), 1e-300)
    return complex(val), err


def _branchy_xs(mu: complex, xs, sign: int):
    xs = np.asarray(xs, dtype=float)
    vals, errs = _series_ij(mu, xs, sign)
    vals = np.asarray(vals, dtype=complex)
    errs = np.asarray(errs, dtype=float)
    retry = (xs > 8.0) & (errs > 1e-11)
    for i in np.nonzero(retry)[0]:
        if sign > 0:
            v2, e2 = _integral_i(mu, float(xs[i]))
        else:
            v2, e2 = _integral_j(mu, float(xs[i]))
        if e2 < errs[i]:
            vals[i], errs[i] = v2, e2
    return vals, errs


def bessel_i_xs(mu: complex, xs):
    return _branchy_xs(complex(mu), xs, 1)


def bessel_j_xs(mu: complex, xs):
    return _branchy_xs(complex(mu), xs, -1)


def bessel_i(mu: complex, x: float):
    v, e = bessel_i_xs(complex(mu), np.array([x]))
    return complex(v[0]), float(e[0])


def bessel_j(mu: complex, x: float):
    v, e = bessel_j_xs(complex(mu), np.array([x]))
    return complex(v[0]), float(e[0])


def bessel_j_mus(mus, x: float):
    """J at an array of orders, fixed positive argument."""
    mus = np.asarray(mus, dtype=complex)
    s, amp = _alt_series_mus(mus, x * x / 4.0, -1)
    vals = np.exp(mus * math.log(x / 2.0)) * s
    errs = amp * 3e-16
    if x > 8.0:
        for i in np.nonzero(errs > 1e-11)[0]:
            v2, e2 = _integral_j(complex(mus[i]), x)
            if e2 < errs[i]:
                vals[i], errs[i] = v2, e2
    return vals, errs


# --- classical Kloosterman sums ----------------------------------------------------


def classical_kloosterman(m: int, n: int, c: int) -> complex:
    """S(m,n;c) by direct enumeration of units mod c."""
    if c < 1:
        raise ValueError("modulus must be a positive integer")
    if c == 1:
        return 1.0 + 0.0j
    w = 2.0 * math.pi / c
    total = 0.0 + 0.0j
    m %= c
    n %= c
    for x in range(1, c):
        if math.gcd(x, c) != 1:
            continue
        xi = pow(x, -1, c)
        ang = w * ((m * x + n * xi) % c)
        total += complex(math.cos(ang), math.sin(ang))
    return total
