"""Exact arithmetic for Q and quadratic number fields.

A field is either Q itself or Q(sqrt(d)) for a squarefree integer d != 0, 1.
Elements are stored in exact rational coordinates over the integral basis
{1, omega}, where

    omega = sqrt(d)        if d = 2, 3 (mod 4),
    omega = (1+sqrt(d))/2  if d = 1 (mod 4).

All arithmetic (sums, products, inverses, traces, norms, total positivity)
is exact; archimedean embeddings are produced as floats only at the boundary
to the analytic modules.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..errors import InputError

Rational = Union[int, Fraction]

_FIELD_RE = re.compile(r"^Q(?:\(\s*sqrt\(\s*(-?\d+)\s*\)\s*\))?$")


def _is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


class FieldDescriptor:
    """A number field of degree <= 2 with its basic arithmetic invariants.

    Attributes
    ----------
    degree : 1 for Q, 2 for quadratic fields
    d : the squarefree radicand (None for Q)
    disc : field discriminant D_F
    signature : (r, s) = (real places, complex place pairs)
    integral_basis : symbolic descriptions of the basis elements
    different : the different ideal, with norm |D_F|
    """

    def __init__(self, d: int | None):
        if d is None:
            self.degree = 1
            self.d = None
            self.disc = 1
            self.signature = (1, 0)
            self.integral_basis = ("1",)
        else:
            if d in (0, 1) or not _is_squarefree(d):
                raise InputError(f"radicand must be squarefree and != 0, 1; got {d}")
            self.degree = 2
            self.d = d
            if d % 4 == 1:
                self.disc = d
                self.integral_basis = ("1", f"(1+sqrt({d}))/2")
                self._omega_is_half = True
            else:
                self.disc = 4 * d
                self.integral_basis = ("1", f"sqrt({d})")
                self._omega_is_half = False
            self.signature = (2, 0) if d > 0 else (0, 1)
        self.places = self.signature[0] + self.signature[1]
        self._different = None

    # basis data -----------------------------------------------------------

    @property
    def omega_trace(self) -> int:
        """Tr(omega): 1 when omega=(1+sqrt d)/2, else 0."""
        if self.degree == 1:
            return 0
        return 1 if self._omega_is_half else 0

    @property
    def omega_norm(self) -> Fraction:
        """N(omega) = omega * omega'."""
        if self.degree == 1:
            return Fraction(0)
        if self._omega_is_half:
            return Fraction(1 - self.d, 4)
        return Fraction(-self.d)

    def omega_embeddings(self) -> tuple[complex, ...]:
        """Float images of omega at each archimedean place (one per pair)."""
        if self.degree == 1:
            return ()
        root = cmath.sqrt(self.d)
        if self.d > 0:
            root = math.sqrt(self.d)
            vals = (root, -root)
        else:
            vals = (root,)  # one representative of the conjugate pair
        if self._omega_is_half:
            return tuple((1 + v) / 2 for v in vals)
        return vals

    # constructors ---------------------------------------------------------

    def element(self, a: Rational, b: Rational = 0) -> "FieldElement":
        return FieldElement(self, Fraction(a), Fraction(b))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def omega(self) -> "FieldElement":
        if self.degree == 1:
            raise InputError("Q has no second basis element")
        return self.element(0, 1)

    def sqrt_d(self) -> "FieldElement":
        """The element sqrt(d) expressed over the integral basis."""
        if self.degree == 1:
            raise InputError("Q has no sqrt(d)")
        if self._omega_is_half:
            return self.element(-1, 2)  # 2*omega - 1
        return self.element(0, 1)

    @property
    def different(self):
        """The different ideal; ||different|| = |disc|."""
        if self._different is None:
            from .ideals import FracIdeal
            if self.degree == 1:
                self._different = FracIdeal.principal(self.one())
            elif self._omega_is_half:
                self._different = FracIdeal.principal(self.sqrt_d())
            else:
                self._different = FracIdeal.principal(self.element(2) * self.sqrt_d())
        return self._different

    # misc -----------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldDescriptor) and self.d == other.d

    def __hash__(self):
        return hash(("FieldDescriptor", self.d))

    def __repr__(self):
        if self.degree == 1:
            return "FieldDescriptor(Q)"
        return f"FieldDescriptor(Q(sqrt({self.d})))"

    def spec_string(self) -> str:
        return "Q" if self.degree == 1 else f"Q(sqrt({self.d}))"


def make_field(spec: str | int | None = "Q") -> FieldDescriptor:
    """Build a field from a spec string: "Q" or "Q(sqrt(d))", d squarefree.

    An integer argument is shorthand for the radicand; None means Q.
    """
    if spec is None:
        return FieldDescriptor(None)
    if isinstance(spec, int):
        return FieldDescriptor(spec)
    m = _FIELD_RE.match(spec.replace(" ", ""))
    if not m:
        raise InputError(f"unrecognized field spec {spec!r}; expected 'Q' or 'Q(sqrt(d))'")
    if m.group(1) is None:
        return FieldDescriptor(None)
    return FieldDescriptor(int(m.group(1)))


@dataclass(frozen=True)
class FieldElement:
    """An algebraic number a + b*omega with exact rational coordinates."""

    field: FieldDescriptor
    a: Fraction
    b: Fraction

    # ring operations --------------------------------------------------

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise InputError("elements from different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, Fraction(other), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, -self.a, -self.b)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        f = self.field
        if f.degree == 1:
            return FieldElement(f, self.a * other.a, Fraction(0))
        # omega^2 = t*omega - n with t = Tr(omega), n = N(omega)
        t, n = f.omega_trace, f.omega_norm
        a = self.a * other.a - n * self.b * other.b
        b = self.a * other.b + self.b * other.a + t * self.b * other.b
        return FieldElement(f, a, b)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        n = self.norm()
        if n == 0:
            raise InputError("inverse of zero")
        if self.field.degree == 1:
            return FieldElement(self.field, 1 / self.a, Fraction(0))
        return FieldElement(self.field, self.conjugate().a / n, self.conjugate().b / n)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    # field-theoretic data ----------------------------------------------

    def conjugate(self) -> "FieldElement":
        """The nontrivial Galois conjugate (identity on Q)."""
        f = self.field
        if f.degree == 1:
            return self
        # omega' = Tr(omega) - omega
        return FieldElement(f, self.a + f.omega_trace * self.b, -self.b)

    def trace(self) -> Fraction:
        if self.field.degree == 1:
            return self.a
        return 2 * self.a + self.field.omega_trace * self.b

    def norm(self) -> Fraction:
        f = self.field
        if f.degree == 1:
            return self.a
        return self.a * self.a + f.omega_trace * self.a * self.b \
            + f.omega_norm * self.b * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.field.degree == 1 or self.b == 0

    # archimedean data ---------------------------------------------------

    def embeddings(self) -> tuple[complex, ...]:
        """One value per archimedean place (complex pairs: one representative)."""
        if self.field.degree == 1:
            return (float(self.a),)
        return tuple(float(self.a) + complex(self.b) * w
                     for w in self.field.omega_embeddings())

    def real_embedding_signs(self) -> tuple[int, ...]:
        """Exact signs at the real places (empty for imaginary quadratic)."""
        f = self.field
        if f.degree == 1:
            return (_sign(self.a),)
        if f.signature[0] == 0:
            return ()
        # a + b*sqrt(d) presentation with rational a, b
        if f._omega_is_half:
            x, y = self.a + self.b / 2, self.b / 2
        else:
            x, y = self.a, self.b
        return (_sign_quadratic(x, y, f.d), _sign_quadratic(x, -y, f.d))

    def is_totally_positive(self) -> bool:
        """Positive at every real embedding (exact test); vacuous if none."""
        if self.is_zero():
            return False
        return all(s > 0 for s in self.real_embedding_signs())

    # misc ---------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        return (isinstance(other, FieldElement) and self.field == other.field
                and self.a == other.a and self.b == other.b)

    def __hash__(self):
        return hash((self.field, self.a, self.b))

    def __repr__(self):
        if self.field.degree == 1 or self.b == 0:
            return f"{self.a}"
        return f"{self.a} + {self.b}*w"

    def coords(self) -> tuple[Fraction, ...]:
        if self.field.degree == 1:
            return (self.a,)
        return (self.a, self.b)


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def _sign_quadratic(x: Fraction, y: Fraction, d: int) -> int:
    """Exact sign of x + y*sqrt(d) for d > 0."""
    if y == 0:
        return _sign(x)
    if x == 0:
        return _sign(y)
    if x > 0 and y > 0:
        return 1
    if x < 0 and y < 0:
        return -1
    # opposite signs: compare x^2 against d*y^2
    if x * x > d * y * y:
        return _sign(x)
    if x * x < d * y * y:
        return _sign(y)
    return 0


def psi_inf(x, field: FieldDescriptor | None = None) -> complex:
    """The archimedean additive character.

    For a field element the value is exp(2*pi*i*Tr(x)) with the trace
    computed exactly, so the result is a root of unity up to float rounding.
    Alternatively ``x`` may be a sequence of embedding values (one entry per
    place, complex places contributing z + conj(z)); then the sum is taken
    in floating point.
    """
    if isinstance(x, FieldElement):
        t = x.trace()
        t -= math.floor(t)  # reduce mod the kernel lattice of psi on d^-1
        return cmath.exp(2j * cmath.pi * float(t))
    if isinstance(x, (int, Fraction)):
        t = Fraction(x)
        t -= math.floor(t)
        return cmath.exp(2j * cmath.pi * float(t))
    total = 0.0
    seq = list(x)
    if field is not None:
        r = field.signature[0]
    else:
        # treat strictly real entries as real places, others as complex
        r = sum(1 for v in seq if complex(v).imag == 0.0)
        seq = sorted(seq, key=lambda v: complex(v).imag != 0.0)
    for j, v in enumerate(seq):
        v = complex(v)
        total += v.real if j < r else 2.0 * v.real
    return cmath.exp(2j * cmath.pi * total)
