"""Shared quadrature rules and helpers.

The node tables here are the single source of truth for both the compiled
and the pure backend, so the two agree to rounding error.
"""

from __future__ import annotations

import math

import numpy as np

# Gauss-Legendre rules on [-1, 1]
GL24_X, GL24_W = np.polynomial.legendre.leggauss(24)
GL200_X, GL200_W = np.polynomial.legendre.leggauss(200)


def gl_panel(a: float, b: float, rule=(GL24_X, GL24_W)):
    """Nodes and weights of a Gauss-Legendre rule mapped to [a, b]."""
    x, w = rule
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def gl_panels(a: float, b: float, width: float, rule=(GL24_X, GL24_W)):
    """Composite rule: fixed-width panels covering [a, b]."""
    edges = [a]
    while edges[-1] + width < b - 1e-12:
        edges.append(edges[-1] + width)
    edges.append(b)
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        x, w = gl_panel(lo, hi, rule)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def trapezoid_params_k(a: float, b: float, x: float):
    """Step and truncation for the even-extended cosh-kernel trapezoid.

    For K_mu(x) = int_0^inf exp(-x cosh t) cosh(mu t) dt with a = |Re mu|,
    b = |Im mu|: the contour shift d trades the e^{-2 pi d / h} trapezoid
    error against the e^{x(1-cos d) + b d} growth of the shifted integrand,
    so d shrinks like 1/sqrt(x) for large argument.
    """
    d = min(1.1, 1.3 / math.sqrt(max(x, 1.0)))
    # the 1.6*b term compensates the e^(-pi*b/2) smallness of K_{ib} itself
    h = 2.0 * math.pi * d / (42.0 + 0.5 * x * d * d + b * d + 1.6 * b)
    # truncation: march past the integrand peak until 46 e-folds below it
    tstar = math.asinh(a / x) if a > 0 else 0.0
    g_star = x * math.cosh(tstar) - a * tstar
    t_trunc = tstar
    while x * math.cosh(t_trunc) - a * t_trunc < g_star + 46.0:
        t_trunc += 0.5
        if t_trunc > 500.0:  # pragma: no cover
            break
    return h, t_trunc + 0.5


def decay_panel_count(x: float, a: float, sinh_kernel: bool) -> tuple[float, int]:
    """Panel width and count for int_0^inf exp(-x*(cosh|sinh) t - mu t) dt."""
    width = min(1.0, max(0.1, 8.0 / x))
    t = width
    count = 1
    for _ in range(400):
        decay = x * (math.sinh(t) if sinh_kernel else (math.cosh(t) - 1.0)) - a * t
        if decay > 48.0:
            break
        t += width
        count += 1
    return width, count
