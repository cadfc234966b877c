"""Matrix coefficients of the irreducible SU(2) representations.

Phi^l_{p,q}(k[alpha,beta]) is the coefficient of z^(l-p) in the generating
polynomial (alpha z - conj(beta))^(l-q) (beta z + conj(alpha))^(l+q),
extracted by exact binomial convolution.
"""

from __future__ import annotations

from math import comb

import numpy as np

from ..errors import DomainError


def _check_unit(alpha: complex, beta: complex) -> None:
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-10:
        raise DomainError(f"(alpha, beta) not on the unit sphere: "
                          f"|a|^2+|b|^2 = {abs(alpha)**2 + abs(beta)**2}")


def su2_coeff(l: int, p: int, q: int, alpha: complex, beta: complex) -> complex:
    """Phi^l_{p,q} at k[alpha, beta]."""
    if l < 0 or abs(p) > l or abs(q) > l:
        raise DomainError(f"need |p|, |q| <= l, got l={l}, p={p}, q={q}")
    alpha, beta = complex(alpha), complex(beta)
    _check_unit(alpha, beta)
    ac, bc = alpha.conjugate(), beta.conjugate()
    total = 0.0 + 0.0j
    # i from the first factor, j = (l-p) - i from the second
    for i in range(0, l - q + 1):
        j = l - p - i
        if j < 0 or j > l + q:
            continue
        total += (comb(l - q, i) * alpha ** i * (-bc) ** (l - q - i)
                  * comb(l + q, j) * beta ** j * ac ** (l + q - j))
    return total


def su2_matrix(l: int, alpha: complex, beta: complex) -> np.ndarray:
    """The full (2l+1)x(2l+1) coefficient matrix, rows p, columns q (-l..l)."""
    out = np.empty((2 * l + 1, 2 * l + 1), dtype=complex)
    for ip, p in enumerate(range(-l, l + 1)):
        for iq, q in enumerate(range(-l, l + 1)):
            out[ip, iq] = su2_coeff(l, p, q, alpha, beta)
    return out


def su2_compose(k1: tuple[complex, complex],
                k2: tuple[complex, complex]) -> tuple[complex, complex]:
    """Group law: k[a1,b1] k[a2,b2] = k[a1 a2 - b1 conj(b2), a1 b2 + b1 conj(a2)]."""
    a1, b1 = k1
    a2, b2 = k2
    return (a1 * a2 - b1 * b2.conjugate(), a1 * b2 + b1 * a2.conjugate())
