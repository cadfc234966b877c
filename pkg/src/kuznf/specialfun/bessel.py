"""Complex-order Bessel functions K, I, J and the entire function J*.

K uses the even-line trapezoid of the cosh-kernel integral; I and J use
ascending series below the |x| = 8 crossover and the standard integral
representations above it.  Every routine carries a running error estimate;
values that cannot be certified at the requested tolerance raise
:class:`~kuznf.errors.AccuracyError` with the achieved estimate attached.
"""

from __future__ import annotations

import numpy as np

from .. import backend
from ..errors import AccuracyError, DomainError

DEFAULT_TOL = 1e-10
RE_ORDER_CAP = 10.0


def _check_order_arg(mu: complex, x: float) -> None:
    if x <= 0:
        raise DomainError(f"argument must be positive, got {x}")
    if abs(mu.real) > RE_ORDER_CAP:
        raise DomainError(f"|Re order| capped at {RE_ORDER_CAP}, got {mu}")


def _certify(val: complex, est: float, tol: float, name: str) -> complex:
    if est > tol:
        raise AccuracyError(
            f"{name} did not converge to tolerance {tol:g} "
            f"(achieved estimate {est:.2e})", value=val, achieved=est)
    return val


def bessel_k(mu: complex, x: float, tol: float = DEFAULT_TOL) -> complex:
    """Modified Bessel K of complex order at positive real argument."""
    mu = complex(mu)
    _check_order_arg(mu, x)
    v, e = backend.bessel_k_raw(mu, float(x))
    return _certify(v, e, tol, "bessel_k")


def bessel_i(mu: complex, x: float, tol: float = DEFAULT_TOL) -> complex:
    """Modified Bessel I of complex order at positive real argument."""
    mu = complex(mu)
    _check_order_arg(mu, x)
    v, e = backend.bessel_i_raw(mu, float(x))
    return _certify(v, e, tol, "bessel_i")


def bessel_j(mu: complex, x: float, tol: float = DEFAULT_TOL) -> complex:
    """Bessel J of complex order at positive real argument."""
    mu = complex(mu)
    _check_order_arg(mu, x)
    v, e = backend.bessel_j_raw(mu, float(x))
    return _certify(v, e, tol, "bessel_j")


def bessel_k_grid(mu: complex, xs, tol: float = DEFAULT_TOL) -> np.ndarray:
    """K at an array (any shape) of positive arguments (vectorized hot path)."""
    xs = np.asarray(xs, dtype=float)
    if np.any(xs <= 0):
        raise DomainError("arguments must be positive")
    flat = np.ascontiguousarray(xs.reshape(-1))
    vals, errs = backend.bessel_k_xs_raw(complex(mu), flat)
    worst = float(np.max(errs)) if len(errs) else 0.0
    if worst > tol:
        raise AccuracyError(f"bessel_k grid not certified at {tol:g} "
                            f"(worst {worst:.2e})", value=vals, achieved=worst)
    return np.asarray(vals).reshape(xs.shape)


def bessel_i_grid(mu: complex, xs, tol: float = DEFAULT_TOL) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    if np.any(xs <= 0):
        raise DomainError("arguments must be positive")
    flat = np.ascontiguousarray(xs.reshape(-1))
    vals, errs = backend.bessel_i_xs_raw(complex(mu), flat)
    worst = float(np.max(errs)) if len(errs) else 0.0
    if worst > tol:
        raise AccuracyError(f"bessel_i grid not certified at {tol:g}",
                            value=vals, achieved=worst)
    return np.asarray(vals).reshape(xs.shape)


def bessel_j_orders(mus, x: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """J at an array of orders, one positive argument (kernel hot path)."""
    mus = np.ascontiguousarray(mus, dtype=complex)
    vals, errs = backend.bessel_j_mus_raw(mus, float(x))
    worst = float(np.max(errs)) if len(errs) else 0.0
    if worst > tol:
        raise AccuracyError(f"bessel_j orders not certified at {tol:g}",
                            value=vals, achieved=worst)
    return np.asarray(vals)


def j_star(nu: complex, z: complex) -> complex:
    """The even entire function equal to J_nu(z) (z/2)^(-nu) for z > 0."""
    return backend.j_star_raw(complex(nu), complex(z))


def j_star_orders(nus, z: complex) -> np.ndarray:
    return np.asarray(backend.j_star_nus_raw(
        np.ascontiguousarray(nus, dtype=complex), complex(z)))


def cal_j_star(nu: complex, p: int, z: complex) -> complex:
    """The two-factor kernel building block J*_(nu-p)(z) * J*_(nu+p)(conj z)."""
    z = complex(z)
    return j_star(nu - p, z) * j_star(nu + p, z.conjugate())
