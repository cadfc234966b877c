"""Fractional ideals in canonical Hermite-normal-form coordinates.

An ideal is stored as (1/den) * L where den is a positive integer and L is
the integer lattice spanned by {a, b + c*omega} (degree 2) or {a} (degree 1),
with a, c > 0 and 0 <= b < a.  After dividing out gcd(den, a, b, c) this
presentation is unique, so ideal equality is data equality.
"""

from __future__ import annotations

import json
import math
import random
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import InputError
from .field import FieldDescriptor, FieldElement


# --- small integer linear algebra ------------------------------------------


def _hnf_columns(cols: list[tuple[int, int]]) -> tuple[int, int, int]:
    """Column HNF of a 2xN integer matrix; returns (a, b, c).

    The lattice spanned by the input columns equals Z*(a,0) + Z*(b,c)
    with a, c > 0 and 0 <= b < a.  Raises if the lattice has rank < 2.
    """
    cols = [list(v) for v in cols if v != (0, 0)]
    if not cols:
        raise InputError("zero lattice has no HNF basis")
    # Euclidean elimination on the second row
    while True:
        nz = [v for v in cols if v[1] != 0]
        if len(nz) <= 1:
            break
        nz.sort(key=lambda v: abs(v[1]))
        pivot = nz[0]
        for v in nz[1:]:
            q = v[1] // pivot[1]
            v[0] -= q * pivot[0]
            v[1] -= q * pivot[1]
        cols = [v for v in cols if v != [0, 0]]
    pivots = [v for v in cols if v[1] != 0]
    rest = [v[0] for v in cols if v[1] == 0]
    if not pivots or not rest:
        raise InputError("lattice does not have full rank 2")
    b, c = pivots[0]
    if c < 0:
        b, c = -b, -c
    a = math.gcd(*rest) if len(rest) > 1 else abs(rest[0])
    b %= a
    return a, b, c


def elementary_divisors(t: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Elementary divisors of a 1x1 or 2x2 integer matrix (d1 | d2)."""
    if len(t) == 1:
        return (abs(t[0][0]),)
    det = abs(t[0][0] * t[1][1] - t[0][1] * t[1][0])
    d1 = math.gcd(t[0][0], t[0][1], t[1][0], t[1][1])
    if d1 == 0:
        return (0, 0)
    return (d1, det // d1)


def solve_integer_system(cols: list[tuple[int, int]], target: tuple[int, int]):
    """Solve sum_i z_i * cols_i = target over the integers.

    Returns a coefficient list or None when no integer solution exists.
    Column-style Euclidean reduction on 2xN, tracking the transform.
    """
    n = len(cols)
    work = [list(c) for c in cols]
    tr = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def addmul(i, j, q):
        work[i][0] += q * work[j][0]
        work[i][1] += q * work[j][1]
        for k in range(n):
            tr[i][k] += q * tr[j][k]

    # reduce second coordinates to a single pivot
    while True:
        nz = [i for i in range(n) if work[i][1] != 0]
        if len(nz) <= 1:
            break
        nz.sort(key=lambda i: abs(work[i][1]))
        p = nz[0]
        for i in nz[1:]:
            addmul(i, p, -(work[i][1] // work[p][1]))
    pivot2 = next((i for i in range(n) if work[i][1] != 0), None)
    rest = [i for i in range(n) if i != pivot2]
    # reduce first coordinates among the rest
    while True:
        nz = [i for i in rest if work[i][0] != 0]
        if len(nz) <= 1:
            break
        nz.sort(key=lambda i: abs(work[i][0]))
        p = nz[0]
        for i in nz[1:]:
            addmul(i, p, -(work[i][0] // work[p][0]))
    pivot1 = next((i for i in rest if work[i][0] != 0), None)

    x, y = target
    coeff = [0] * n
    if pivot2 is not None:
        if y % work[pivot2][1] != 0:
            return None
        q = y // work[pivot2][1]
        coeff[pivot2] = q
        x -= q * work[pivot2][0]
    elif y != 0:
        return None
    if pivot1 is not None:
        if x % work[pivot1][0] != 0:
            return None
        coeff[pivot1] = x // work[pivot1][0]
    elif x != 0:
        return None
    # map back through the transform
    out = [0] * n
    for i in range(n):
        if coeff[i]:
            for k in range(n):
                out[k] += coeff[i] * tr[i][k]
    return out


# --- fractional ideals -------------------------------------------------------


class FracIdeal:
    """A nonzero fractional ideal of Q or a quadratic field."""

    __slots__ = ("field", "den", "mat")

    def __init__(self, field: FieldDescriptor, den: int, mat: tuple[int, ...]):
        # mat = (a,) for degree 1, (a, b, c) for degree 2; assumed HNF already
        g = math.gcd(den, *mat)
        if g > 1:
            den //= g
            mat = tuple(v // g for v in mat)
        self.field = field
        self.den = den
        self.mat = mat

    # constructors -------------------------------------------------------

    @classmethod
    def _from_z_generators(cls, field: FieldDescriptor,
                           gens: Iterable[FieldElement]) -> "FracIdeal":
        """Lattice spanned over Z by the given elements (must be a module)."""
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            raise InputError("zero ideal is not representable")
        den = 1
        for g in gens:
            den = den * g.a.denominator // math.gcd(den, g.a.denominator)
            if field.degree == 2:
                den = den * g.b.denominator // math.gcd(den, g.b.denominator)
        if field.degree == 1:
            ints = [int(g.a * den) for g in gens]
            a = math.gcd(*ints) if len(ints) > 1 else abs(ints[0])
            return cls(field, den, (a,))
        cols = [(int(g.a * den), int(g.b * den)) for g in gens]
        return cls(field, den, _hnf_columns(cols))

    @classmethod
    def from_generators(cls, field: FieldDescriptor,
                        gens: Iterable[FieldElement]) -> "FracIdeal":
        """The fractional ideal (o-module) generated by the given elements."""
        gens = list(gens)
        if field.degree == 2:
            w = field.omega()
            gens = gens + [g * w for g in gens]
        return cls._from_z_generators(field, gens)

    @classmethod
    def principal(cls, x: FieldElement) -> "FracIdeal":
        return cls.from_generators(x.field, [x])

    @classmethod
    def ring_of_integers(cls, field: FieldDescriptor) -> "FracIdeal":
        return cls.principal(field.one())

    @classmethod
    def from_json(cls, field: FieldDescriptor, obj) -> "FracIdeal":
        if isinstance(obj, str):
            obj = json.loads(obj)
        den = int(obj["den"])
        basis = obj["basis"]
        if field.degree == 1:
            mat = (abs(int(basis[0][0])),)
        else:
            mat = _hnf_columns([(int(basis[0][0]), int(basis[0][1])),
                                (int(basis[1][0]), int(basis[1][1]))])
        if den <= 0:
            raise InputError("denominator must be positive")
        return cls(field, den, mat)

    # canonical data -------------------------------------------------------

    def basis_elements(self) -> tuple[FieldElement, ...]:
        f = self.field
        if f.degree == 1:
            return (f.element(Fraction(self.mat[0], self.den)),)
        a, b, c = self.mat
        return (f.element(Fraction(a, self.den)),
                f.element(Fraction(b, self.den), Fraction(c, self.den)))

    def to_json(self) -> dict:
        if self.field.degree == 1:
            basis = [[self.mat[0]]]
        else:
            a, b, c = self.mat
            basis = [[a, 0], [b, c]]
        return {"den": self.den, "basis": basis}

    def canonical_key(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def norm(self) -> Fraction:
        if self.field.degree == 1:
            return Fraction(self.mat[0], self.den)
        a, b, c = self.mat
        return Fraction(a * c, self.den * self.den)

    def is_integral(self) -> bool:
        return self.den == 1

    # arithmetic -----------------------------------------------------------

    def __mul__(self, other: "FracIdeal") -> "FracIdeal":
        if not isinstance(other, FracIdeal):
            return NotImplemented
        if other.field != self.field:
            raise InputError("ideals from different fields")
        prods = [x * y for x in self.basis_elements() for y in other.basis_elements()]
        return FracIdeal._from_z_generators(self.field, prods)

    def __add__(self, other: "FracIdeal") -> "FracIdeal":
        if not isinstance(other, FracIdeal):
            return NotImplemented
        return FracIdeal._from_z_generators(
            self.field, list(self.basis_elements()) + list(other.basis_elements()))

    def __pow__(self, k: int) -> "FracIdeal":
        if k == 0:
            return FracIdeal.ring_of_integers(self.field)
        base = self if k > 0 else self.inverse()
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    def inverse(self) -> "FracIdeal":
        """I^-1 via I * conj(I) = (N(I)) in quadratic fields."""
        n = self.norm()
        if n == 0:
            raise InputError("inverse of zero ideal")
        if self.field.degree == 1:
            return FracIdeal.principal(self.field.element(1 / n))
        conj_gens = [g.conjugate() * self.field.element(1 / n)
                     for g in self.basis_elements()]
        return FracIdeal._from_z_generators(self.field, conj_gens)

    def conjugate(self) -> "FracIdeal":
        return FracIdeal._from_z_generators(
            self.field, [g.conjugate() for g in self.basis_elements()])

    def scale(self, r) -> "FracIdeal":
        """Multiply by a nonzero rational or field element."""
        if isinstance(r, FieldElement):
            return FracIdeal._from_z_generators(
                self.field, [g * r for g in self.basis_elements()])
        r = Fraction(r)
        if r == 0:
            raise InputError("scaling ideal by zero")
        return FracIdeal._from_z_generators(
            self.field, [g * self.field.element(r) for g in self.basis_elements()])

    # predicates ------------------------------------------------------------

    def contains(self, x: FieldElement) -> bool:
        if x.is_zero():
            return True
        f = self.field
        if f.degree == 1:
            v = x.a * self.den / self.mat[0]
            return v.denominator == 1
        a, b, c = self.mat
        n = x.b * self.den / c
        if n.denominator != 1:
            return False
        m = (x.a * self.den - int(n) * b) / a
        return m.denominator == 1

    def element_coords(self, x: FieldElement) -> tuple[int, ...] | None:
        """Integer coordinates of x over this ideal's basis, or None."""
        f = self.field
        if f.degree == 1:
            v = x.a * self.den / self.mat[0]
            return (int(v),) if v.denominator == 1 else None
        a, b, c = self.mat
        n = x.b * self.den / c
        if n.denominator != 1:
            return None
        m = (x.a * self.den - int(n) * b) / a
        if m.denominator != 1:
            return None
        return (int(m), int(n))

    def is_subset(self, other: "FracIdeal") -> bool:
        return all(other.contains(g) for g in self.basis_elements())

    def __eq__(self, other):
        return (isinstance(other, FracIdeal) and self.field == other.field
                and self.den == other.den and self.mat == other.mat)

    def __hash__(self):
        return hash((self.field, self.den, self.mat))

    def __repr__(self):
        if self.field.degree == 1:
            return f"FracIdeal({self.mat[0]}/{self.den})"
        a, b, c = self.mat
        return f"FracIdeal([{a}, {b}+{c}w]/{self.den})"


def ideal_arith(op: str, i: FracIdeal, j: FracIdeal | None = None):
    """Dispatch ideal arithmetic: product, inverse, equality-test, norm."""
    if op == "product":
        if j is None:
            raise InputError("product needs two ideals")
        return i * j
    if op == "inverse":
        return i.inverse()
    if op == "equality-test":
        if j is None:
            raise InputError("equality-test needs two ideals")
        return i == j
    if op == "norm":
        return i.norm()
    raise InputError(f"unknown ideal operation {op!r}")


# --- quotient modules --------------------------------------------------------


class QuotientModule:
    """The finite o-module I/J for nested fractional ideals J <= I.

    Residue representatives are enumerated from a basis of I adapted to the
    elementary-divisor decomposition; ``generators()`` lists those residues x
    with x*o + J = I.
    """

    def __init__(self, ambient: FracIdeal, sub: FracIdeal):
        if ambient.field != sub.field:
            raise InputError("quotient of ideals over different fields")
        if not sub.is_subset(ambient):
            raise InputError("J must be contained in I")
        self.ambient = ambient
        self.sub = sub
        self.field = ambient.field
        deg = self.field.degree
        t_cols = [ambient.element_coords(g) for g in sub.basis_elements()]
        if any(c is None for c in t_cols):  # pragma: no cover
            raise InputError("J is not contained in I")
        if deg == 1:
            t = ((t_cols[0][0],),)
            self._box = (abs(t_cols[0][0]),)
        else:
            # columns of T = coordinates of J's basis in I's basis; a column
            # HNF of T gives box bounds (a, c): residues x*w1 + y*w2 with
            # 0 <= x < a, 0 <= y < c hit every coset exactly once
            t = ((t_cols[0][0], t_cols[1][0]), (t_cols[0][1], t_cols[1][1]))
            a, _, c = _hnf_columns([tuple(t_cols[0]), tuple(t_cols[1])])
            self._box = (a, c)
        self.structure = elementary_divisors(t)
        if any(d == 0 for d in self.structure):
            raise InputError("infinite index quotient")

    @property
    def cardinality(self) -> int:
        n = 1
        for d in self.structure:
            n *= d
        return n

    def representatives(self, shuffle_seed: int | None = None) -> list[FieldElement]:
        """All residue representatives; a seed adds random J-offsets."""
        rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
        sub_basis = self.sub.basis_elements()
        basis = self.ambient.basis_elements()
        reps = []
        if self.field.degree == 1:
            coords = [(x,) for x in range(self._box[0])]
        else:
            coords = [(x, y) for y in range(self._box[1])
                      for x in range(self._box[0])]
        for idx in coords:
            x = self.field.zero()
            for vec, k in zip(basis, idx):
                if k:
                    x = x + vec * k
            if rng is not None:
                for s in sub_basis:
                    x = x + s * rng.randint(-3, 3)
            reps.append(x)
        return reps

    def is_generator(self, x: FieldElement) -> bool:
        """Whether x generates I/J as an o-module: x*o + J = I."""
        if x.is_zero():
            return self.cardinality == 1
        if self.field.degree == 1:
            m = self.ambient.element_coords(x)
            return m is not None and math.gcd(m[0], self._box[0]) == 1
        xo = FracIdeal.from_generators(self.field, [x])
        return (xo + self.sub) == self.ambient

    def generators(self, shuffle_seed: int | None = None) -> list[FieldElement]:
        return [x for x in self.representatives(shuffle_seed) if self.is_generator(x)]


def quotient_module(ambient: FracIdeal, sub: FracIdeal) -> QuotientModule:
    return QuotientModule(ambient, sub)


def elements_in_embedding_box(ideal: FracIdeal,
                              bounds: Sequence[float]) -> list[FieldElement]:
    """All nonzero x in the ideal with |sigma_j(x)| <= bounds[j] at every place.

    The coordinate rectangle is derived from the float embeddings of the
    basis with a safety margin; candidates are then filtered with exact
    membership of the bound conditions left to the caller (the embedding
    comparison here uses floats with a tiny relative slack, callers doing
    exact cutoffs must re-check).
    """
    f = ideal.field
    out = []
    if f.degree == 1:
        g = ideal.basis_elements()[0]
        step = abs(float(g.a))
        kmax = int(bounds[0] / step + 1e-9)
        for k in range(1, kmax + 1):
            out.append(g * k)
            out.append(g * (-k))
        return out
    e1, e2 = ideal.basis_elements()
    emb1, emb2 = e1.embeddings(), e2.embeddings()
    if f.signature[0] == 2:
        # invert [[emb1_1, emb2_1], [emb1_2, emb2_2]] to bound (m, n)
        det = emb1[0].real * emb2[1].real - emb2[0].real * emb1[1].real
        b1, b2 = bounds[0], bounds[1]
        mb = (abs(emb2[1].real * b1) + abs(emb2[0].real * b2)) / abs(det)
        nb = (abs(emb1[1].real * b1) + abs(emb1[0].real * b2)) / abs(det)
    else:
        # one complex place: |m*e1 + n*e2| <= B; use the real/imag split
        b = bounds[0]
        det = (emb1[0].real * emb2[0].imag - emb2[0].real * emb1[0].imag)
        mb = (abs(emb2[0].imag) + abs(emb2[0].real)) * b / abs(det)
        nb = (abs(emb1[0].imag) + abs(emb1[0].real)) * b / abs(det)
    mb, nb = int(mb + 2), int(nb + 2)
    slack = 1 + 1e-12
    for n in range(-nb, nb + 1):
        for m in range(-mb, mb + 1):
            if m == 0 and n == 0:
                continue
            x = e1 * m + e2 * n
            embs = x.embeddings()
            ok = True
            for j, v in enumerate(embs):
                if abs(v) > bounds[j] * slack:
                    ok = False
                    break
            if ok:
                out.append(x)
    return out
