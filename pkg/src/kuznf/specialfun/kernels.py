"""The Bessel kernels weighting the Kloosterman term of the sum formula.

Real place:

    B_nu(z) = (2 pi / sin(pi nu)) * (J_{-2 nu}(|z|) - J_{2 nu}(|z|)),

with the removable nu = 0 point evaluated as -4 pi Y_0(|z|) plus a
quadratic correction extrapolated from nearby samples.

Complex place:

    B_{nu,p}(z) = [ |z/2|^(-2nu) (iz/|z|)^(2p)  J*-pair(-nu,-p; z)
                  - |z/2|^(+2nu) (iz/|z|)^(-2p) J*-pair(nu,p; z) ]
                  / sin(pi (nu - p)),

where the J*-pair is J*_{nu-p}(z) J*_{nu+p}(conj z); removable 0/0 points
(nu - p integral) are evaluated by a symmetric imaginary epsilon-offset with
Richardson extrapolation.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.special import y0 as _y0

from ..errors import AccuracyError, DomainError
from .bessel import bessel_j, bessel_j_orders, cal_j_star, j_star_orders

_NEAR_ZERO = 1e-3
_EPS_COMPLEX = 1e-4


def _kernel_real_regular(nu: complex, az: float) -> complex:
    return (2.0 * math.pi / cmath.sin(math.pi * nu)) * \
        (bessel_j(-2.0 * nu, az) - bessel_j(2.0 * nu, az))


def kernel_real(nu: complex, z: float) -> complex:
    """Real-place kernel at nonzero real z; nu off the nonzero integers."""
    if z == 0:
        raise DomainError("kernel argument must be nonzero")
    nu = complex(nu)
    az = abs(z)
    if abs(nu) >= _NEAR_ZERO:
        if abs(nu.imag) < 1e-12 and abs(nu.real - round(nu.real)) < 1e-12 \
                and round(nu.real) != 0:
            raise DomainError(f"kernel pole at nonzero integer nu = {nu}")
        return _kernel_real_regular(nu, az)
    # removable nu = 0: limit -4 pi Y_0 plus a quadratic-in-nu^2 correction
    f0 = -4.0 * math.pi * float(_y0(az))
    s1, s2 = _NEAR_ZERO ** 2, (2.0 * _NEAR_ZERO) ** 2
    f1 = _kernel_real_regular(complex(_NEAR_ZERO), az)
    f2 = _kernel_real_regular(complex(2.0 * _NEAR_ZERO), az)
    c2 = (f2 - f1) / (s2 - s1)
    return f0 + c2 * nu * nu


def kernel_real_nus(nus, z: float) -> np.ndarray:
    """Real-place kernel over an array of spectral parameters (hot path)."""
    if z == 0:
        raise DomainError("kernel argument must be nonzero")
    nus = np.asarray(nus, dtype=complex)
    az = abs(z)
    out = np.empty(nus.shape, dtype=complex)
    small = np.abs(nus) < _NEAR_ZERO
    regular = ~small
    if np.any(regular):
        nr = nus[regular]
        jm = bessel_j_orders(-2.0 * nr, az)
        jp = bessel_j_orders(2.0 * nr, az)
        out[regular] = (2.0 * math.pi / np.sin(math.pi * nr)) * (jm - jp)
    if np.any(small):
        for idx in np.argwhere(small):
            out[tuple(idx)] = kernel_real(complex(nus[tuple(idx)]), az)
    return out


def _kernel_complex_regular(nu: complex, p: int, z: complex) -> complex:
    az = abs(z)
    phase = (1j * z / az) ** (2 * p)
    grow = cmath.exp(-2.0 * nu * math.log(az / 2.0))
    term1 = grow * phase * cal_j_star(-nu, -p, z)
    term2 = phase.conjugate() / grow * cal_j_star(nu, p, z)
    # (iz/|z|)^(-2p) equals the conjugate of the unit phase to the 2p power
    return (term1 - term2) / cmath.sin(math.pi * (nu - p))


def kernel_complex(nu: complex, p: int, z: complex) -> complex:
    """Complex-place kernel at nonzero complex z."""
    if z == 0:
        raise DomainError("kernel argument must be nonzero")
    nu = complex(nu)
    p = int(p)
    gap = nu - p
    dist = abs(gap - round(gap.real)) if abs(gap.imag) < _NEAR_ZERO else 1.0
    if dist >= _NEAR_ZERO:
        return _kernel_complex_regular(nu, p, z)
    # removable point: symmetric imaginary offsets with Richardson step
    def sym(eps: float) -> complex:
        return 0.5 * (_kernel_complex_regular(nu + 1j * eps, p, z)
                      + _kernel_complex_regular(nu - 1j * eps, p, z))
    s1 = sym(_EPS_COMPLEX)
    s2 = sym(2.0 * _EPS_COMPLEX)
    rich = (4.0 * s1 - s2) / 3.0
    if abs(rich - s1) > 1e-6 * max(1.0, abs(rich)):
        raise AccuracyError(
            f"epsilon-extrapolation disagreement at nu={nu}, p={p}",
            value=rich, achieved=abs(rich - s1))
    return rich


def kernel_complex_nus(nus, p: int, z: complex) -> np.ndarray:
    """Complex-place kernel over an array of nu (hot path).

    Entries near the removable set fall back to the scalar epsilon scheme.
    """
    if z == 0:
        raise DomainError("kernel argument must be nonzero")
    nus = np.asarray(nus, dtype=complex)
    p = int(p)
    z = complex(z)
    az = abs(z)
    gap = nus - p
    dist = np.abs(gap - np.round(gap.real))
    singular = dist < _NEAR_ZERO
    out = np.empty(nus.shape, dtype=complex)
    reg = ~singular
    if np.any(reg):
        nr = nus[reg]
        phase = (1j * z / az) ** (2 * p)
        grow = np.exp(-2.0 * nr * math.log(az / 2.0))
        # J*-pair with array order: J*_{nu-p}(z) * J*_{nu+p}(conj z)
        term1 = grow * phase * j_star_orders(-nr + p, z) * j_star_orders(-nr - p, z.conjugate())
        term2 = np.conj(phase) / grow * j_star_orders(nr - p, z) * j_star_orders(nr + p, z.conjugate())
        out[reg] = (term1 - term2) / np.sin(math.pi * (nr - p))
    for idx in np.argwhere(singular):
        out[tuple(idx)] = kernel_complex(complex(nus[tuple(idx)]), p, z)
    return out
