"""Archimedean spectral parameters and vector weights with domain checks."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DomainError

_TOL = 1e-12


def _is_imaginary(nu: complex) -> bool:
    return abs(nu.real) <= _TOL


def _is_half_integer(nu: complex) -> bool:
    return abs(nu.imag) <= _TOL and abs(nu.real * 2 - round(nu.real * 2)) <= _TOL \
        and round(nu.real * 2) % 2 == 1


def _is_complementary(nu: complex, *, exclude_zero: bool) -> bool:
    if abs(nu.imag) > _TOL:
        return False
    if exclude_zero and abs(nu.real) <= _TOL:
        return False
    return abs(nu.real) < 0.5


@dataclass(frozen=True)
class SpectralParam:
    """Spectral data at one archimedean place.

    Real place: nu in iR (principal), Z+1/2 (discrete) or (-1/2, 1/2)
    (complementary), plus the sign character eps.  Complex place: nu in iR
    with p in Z, or complementary nu with p = 0.
    """

    place_kind: str
    nu: complex
    p: int | None = None
    eps: int | None = None

    def __post_init__(self):
        nu = complex(self.nu)
        if self.place_kind == "real":
            if self.eps is not None and self.eps not in (0, 1):
                raise DomainError(f"eps must be 0 or 1, got {self.eps}")
            if not (_is_imaginary(nu) or _is_half_integer(nu)
                    or _is_complementary(nu, exclude_zero=False)):
                raise DomainError(
                    f"real-place nu must lie in iR, Z+1/2 or (-1/2,1/2); got {nu}")
        elif self.place_kind == "complex":
            if self.p is None or self.p != int(self.p):
                raise DomainError("complex place requires integer p")
            if _is_imaginary(nu):
                return
            if _is_complementary(nu, exclude_zero=True) and int(self.p) == 0:
                return
            raise DomainError(
                f"complex-place (nu, p) = ({nu}, {self.p}) outside the "
                "spectral domain")
        else:
            raise DomainError(f"place_kind must be real or complex, got "
                              f"{self.place_kind!r}")

    @property
    def series(self) -> str:
        nu = complex(self.nu)
        if _is_half_integer(nu):
            return "discrete"
        if _is_imaginary(nu):
            return "principal"
        return "complementary"


@dataclass(frozen=True)
class WeightSpec:
    """Vector weight at one archimedean place: q (real) or (l, q) (complex)."""

    place_kind: str
    q: int
    l: int | None = None

    def __post_init__(self):
        if self.place_kind == "real":
            if self.q % 2 != 0:
                raise DomainError(f"real-place weight must be even, got {self.q}")
        elif self.place_kind == "complex":
            if self.l is None or self.l < 0:
                raise DomainError("complex place requires l >= 0")
            if abs(self.q) > self.l:
                raise DomainError(f"|q| <= l required, got q={self.q}, l={self.l}")
        else:
            raise DomainError(f"place_kind must be real or complex, got "
                              f"{self.place_kind!r}")

    def compatible_with(self, sp: SpectralParam) -> bool:
        if self.place_kind != sp.place_kind:
            return False
        if self.place_kind == "complex":
            return self.l is not None and sp.p is not None and self.l >= abs(sp.p)
        return True
