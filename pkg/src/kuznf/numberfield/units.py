"""Units, narrow ideal classes and congruence-subgroup indices.

The fundamental unit of a real quadratic field is found from the continued
fraction of omega; the narrow class group is built by Minkowski-bound ideal
enumeration with an exact totally-positive-principality test.  Everything
here is deterministic: representatives are chosen with minimal norm, ties
broken lexicographically on the canonical ideal data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import InputError, InternalConsistencyError
from .field import FieldDescriptor, FieldElement
from .ideals import FracIdeal


# --- continued fractions and the fundamental unit ---------------------------


def _exact_floor_quadratic(p: int, d: int, q: int) -> int:
    """floor((p + sqrt(d)) / q) for d > 0 non-square, exact."""
    n = math.floor((p + math.sqrt(d)) / q)
    # verify n <= (p+sqrt d)/q < n+1 with integer comparisons, adjust if the
    # float seed was off by one
    def le(k):  # k*q - p <= sqrt(d) ?
        m = k * q - p
        return m <= 0 or m * m <= d
    while not le(n):
        n -= 1
    while le(n + 1):
        n += 1
    return n


def fundamental_unit(field: FieldDescriptor) -> FieldElement:
    """The fundamental unit > 1 of a real quadratic field.

    Convergents p/q of the continued fraction of omega are scanned for
    |N(p - q*conj(omega))| = 1; a small direct scan guards the minimality
    of the first hit.
    """
    if field.degree != 2 or field.d is None or field.d < 0:
        raise InputError("fundamental unit only defined for real quadratic fields")
    d = field.d
    t = field.omega_trace

    def unit_from(p: int, q: int) -> FieldElement | None:
        u = field.element(p - q * t, q)  # p - q*conj(omega)
        if abs(u.norm()) == 1:
            return u
        return None

    candidates = []
    # direct scan over tiny coordinates
    for q in range(0, 4):
        for p in range(-4 * (q + 1) - int(math.isqrt(d)) * q, 4 * (q + 1) + int(math.isqrt(d)) * q + 1):
            if p == 0 and q == 0:
                continue
            u = unit_from(p, q)
            if u is not None and _gt_one(u):
                candidates.append(u)
    # continued fraction of omega = (P0 + sqrt(d)) / Q0
    p0, q0 = (1, 2) if field._omega_is_half else (0, 1)
    pp, qq = p0, q0
    h_prev, h = 1, _exact_floor_quadratic(pp, d, qq)
    k_prev, k = 0, 1
    a = h
    for _ in range(100000):
        u = unit_from(h, k)
        if u is not None and _gt_one(u):
            candidates.append(u)
            break
        pp = a * qq - pp
        qq = (d - pp * pp) // qq
        if qq == 0:  # pragma: no cover
            raise InternalConsistencyError("continued fraction degenerated")
        a = _exact_floor_quadratic(pp, d, qq)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    if not candidates:  # pragma: no cover
        raise InternalConsistencyError(f"no fundamental unit found for d={d}")
    best = min(candidates, key=lambda u: float(u.embeddings()[0].real))
    return best


def _gt_one(x: FieldElement) -> bool:
    return (x - 1).real_embedding_signs()[0] > 0


@dataclass(frozen=True)
class UnitData:
    """Roots of unity, the fundamental unit, and o_+^x / o^2x representatives."""

    roots_of_unity: tuple[FieldElement, ...]
    fundamental_unit: FieldElement | None
    tp_mod_squares: tuple[FieldElement, ...]


def tp_units_mod_squares(field: FieldDescriptor) -> UnitData:
    """Representatives of totally positive units modulo unit squares.

    Totally positive means positive at every real embedding, so at real
    quadratic fields the answer depends on the norm of the fundamental
    unit, while for imaginary quadratic fields the condition is vacuous
    and the full (finite) unit group is taken modulo its squares.
    """
    one = field.one()
    if field.degree == 1:
        return UnitData((one, -one), None, (one,))
    if field.d > 0:
        eps = fundamental_unit(field)
        if eps.norm() == -1:
            reps = (one,)
        else:
            # eps > 1 with conjugate 1/eps > 0: totally positive, not a square
            reps = (one, eps)
        return UnitData((one, -one), eps, reps)
    # imaginary quadratic: cyclic unit group of order w, quotient by squares
    if field.d == -1:
        i = field.omega()  # omega = sqrt(-1)
        return UnitData((one, i, -one, -i), None, (one, i))
    if field.d == -3:
        z = field.omega()  # primitive 6th root of unity (1+sqrt(-3))/2
        roots = tuple_powers(z, 6)
        return UnitData(roots, None, (one, z))
    return UnitData((one, -one), None, (one, -one))


def tuple_powers(z: FieldElement, order: int) -> tuple[FieldElement, ...]:
    out = [z.field.one()]
    for _ in range(order - 1):
        out.append(out[-1] * z)
    return tuple(out)


def totally_positive_unit_generator(field: FieldDescriptor) -> FieldElement | None:
    """Generator of o_+^x modulo torsion (real quadratic only)."""
    if field.degree != 2 or field.d < 0:
        return None
    eps = fundamental_unit(field)
    return eps * eps if eps.norm() == -1 else eps


# --- integral ideal enumeration ---------------------------------------------


def integral_ideals_of_norm(field: FieldDescriptor, n: int) -> list[FracIdeal]:
    """All integral ideals of norm n, in lexicographic HNF order."""
    if n <= 0:
        return []
    if field.degree == 1:
        return [FracIdeal(field, 1, (n,))]
    t, nw = field.omega_trace, field.omega_norm
    out = []
    for c in range(1, int(math.isqrt(n)) + 1):
        if n % (c * c) != 0:
            continue
        a = n // c
        for b in range(0, a, c):
            val = Fraction(b * b + t * b * c) + nw * c * c
            if val % (a * c) == 0:
                out.append(FracIdeal(field, 1, (a, b, c)))
    out.sort(key=lambda ideal: ideal.mat)
    return out


def minkowski_bound(field: FieldDescriptor) -> float:
    if field.degree == 1:
        return 1.0
    if field.d > 0:
        return 0.5 * math.sqrt(field.disc)
    return (2.0 / math.pi) * math.sqrt(abs(field.disc))


# --- totally positive principality ------------------------------------------


def principal_generator(ideal: FracIdeal) -> FieldElement | None:
    """A generator of the fractional ideal, or None if not principal.

    Searches the bounded coordinate box that must contain a generator
    after balancing by units; completeness of the box makes the negative
    answer a proof of non-principality.
    """
    field = ideal.field
    if field.degree == 1:
        return field.element(Fraction(ideal.mat[0], ideal.den))
    # reduce to an integral ideal: (1/den)*L with L integral
    lat = FracIdeal(field, 1, ideal.mat)
    n = lat.norm()
    assert n.denominator == 1
    n = int(n)
    if field.d > 0:
        eps0 = float(fundamental_unit(field).embeddings()[0].real)
        bound = math.sqrt(n * eps0) * (1 + 1e-9) + 1e-9
        bounds = (bound, bound)
    else:
        bound = math.sqrt(n) * (1 + 1e-9) + 1e-9
        bounds = (bound,)
    from .ideals import elements_in_embedding_box
    for x in elements_in_embedding_box(lat, bounds):
        if abs(x.norm()) == n and lat.contains(x):
            g = x * field.element(Fraction(1, ideal.den))
            if FracIdeal.principal(g) == ideal:
                return g
    return None


def narrowly_principal_generator(ideal: FracIdeal) -> FieldElement | None:
    """A totally positive generator, or None if no unit multiple has one."""
    field = ideal.field
    g = principal_generator(ideal)
    if g is None:
        return None
    if field.degree == 1:
        return g if g.a > 0 else -g
    if field.d < 0:
        return g  # no real places: vacuously totally positive
    eps = fundamental_unit(field)
    for u in (field.one(), -field.one(), eps, -eps):
        cand = g * u
        if cand.is_totally_positive():
            return cand
    return None


def canonical_tp_generator(ideal: FracIdeal) -> FieldElement | None:
    """Deterministic totally positive generator (None if not narrowly principal).

    Real quadratic: the unique associate with embedding ratio in
    [1, eps_+^2) for the totally positive fundamental unit eps_+.
    Imaginary quadratic: the associate with lexicographically smallest
    coordinates.  Rational: the positive generator.
    """
    field = ideal.field
    g = narrowly_principal_generator(ideal)
    if g is None:
        return None
    if field.degree == 1:
        return g
    if field.d < 0:
        units = tp_units_mod_squares(field).roots_of_unity
        return min((g * u for u in units), key=lambda x: (x.a, x.b))
    eps_plus = totally_positive_unit_generator(field)
    # normalize so that sigma1(g) / sigma2(g) in [1, eps_plus^2)
    def ratio_ge(x, y):  # sigma1(x) >= y * sigma2(x), all exact
        diff = x - y * x.conjugate()
        if diff.is_zero():
            return True
        return diff.real_embedding_signs()[0] >= 0
    eps2 = eps_plus * eps_plus
    for _ in range(10000):
        if not ratio_ge(g, field.one()):
            g = g * eps_plus
        elif ratio_ge(g, eps2):
            g = g * eps_plus.inverse()
        else:
            return g
    raise InternalConsistencyError("generator normalization did not converge")


# --- narrow class group -------------------------------------------------------


def narrow_class_reps_all(field: FieldDescriptor) -> list[FracIdeal]:
    """Canonical representatives of every narrow ideal class."""
    if field.degree == 1:
        return [FracIdeal.ring_of_integers(field)]
    bound = max(1, int(minkowski_bound(field)))
    reps: list[FracIdeal] = []
    for n in range(1, bound + 1):
        for ideal in integral_ideals_of_norm(field, n):
            if not any(_narrow_equivalent(ideal, r) for r in reps):
                reps.append(ideal)
    if field.d > 0 and fundamental_unit(field).norm() == 1:
        # each ordinary class splits in two narrow ones; twisting by the
        # mixed-sign sqrt(d) reaches the partner class if not yet present
        for rep in list(reps):
            target = rep * FracIdeal.principal(field.sqrt_d())
            if not any(_narrow_equivalent(target, r) for r in reps):
                reps.append(_canonical_class_rep(target))
        reps = sorted(reps, key=lambda i: (i.norm(), i.mat))
    return reps


def _narrow_equivalent(i: FracIdeal, j: FracIdeal) -> bool:
    return narrowly_principal_generator(i * j.inverse()) is not None


def _canonical_class_rep(ideal: FracIdeal) -> FracIdeal:
    """Minimal-norm integral representative of the narrow class of ``ideal``."""
    for n in range(1, 100000):
        for cand in integral_ideals_of_norm(ideal.field, n):
            if _narrow_equivalent(cand, ideal):
                return cand
    raise InternalConsistencyError("no small representative found")  # pragma: no cover


def narrow_class_reps(field: FieldDescriptor, frak_a: FracIdeal,
                      frak_a_prime: FracIdeal) -> list[tuple[FracIdeal, FieldElement]]:
    """Pairs (m, gamma_m) with m^2 * a * a'^-1 = (gamma_m), gamma_m totally positive.

    One pair per admissible narrow class; the list is empty when no class
    squares to the class of a'^-1 * a ... rather a * a'^-1 admits it.
    Deterministic: class representatives have minimal norm, gamma is the
    canonical totally positive generator.
    """
    if frak_a.norm() == 0 or frak_a_prime.norm() == 0:
        raise InputError("a and a' must be nonzero")
    out = []
    ratio = frak_a * frak_a_prime.inverse()
    for rep in narrow_class_reps_all(field):
        gamma = canonical_tp_generator(rep * rep * ratio)
        if gamma is not None:
            out.append((rep, gamma))
    return out


# --- congruence subgroup index -------------------------------------------------


def _prime_ideals_above(field: FieldDescriptor, p: int) -> list[FracIdeal]:
    """Prime ideals above the rational prime p."""
    if field.degree == 1:
        return [FracIdeal(field, 1, (p,))]
    t, nw = field.omega_trace, field.omega_norm
    roots = [r for r in range(p) if (Fraction(r * r - t * r) + nw) % p == 0]
    if not roots:
        return [FracIdeal(field, 1, (p, 0, p))]  # inert: (p), norm p^2
    # split or ramified: (p, omega - r) has norm p
    out = []
    for r in roots:
        out.append(FracIdeal.from_generators(
            field, [field.element(p), field.omega() - field.element(r)]))
    seen = []
    for i in out:
        if i not in seen:
            seen.append(i)
    return seen


def ideal_valuation(ideal: FracIdeal, prime: FracIdeal, max_k: int = 64) -> int:
    """v_p(ideal) for an integral ideal and a prime ideal."""
    pinv = prime.inverse()
    v = 0
    cur = ideal
    for _ in range(max_k):
        nxt = cur * pinv
        if not nxt.is_integral():
            return v
        cur = nxt
        v += 1
    raise InternalConsistencyError("valuation exceeded bound")  # pragma: no cover


def k_index(field: FieldDescriptor, frak_c: FracIdeal) -> int:
    """Index of the level-c compact subgroup in the level-1 one.

    Multiplicative over prime powers: each p^k || c contributes
    ||p||^(k-1) * (||p|| + 1).
    """
    if not frak_c.is_integral():
        raise InputError("level must be an integral ideal")
    n = frak_c.norm()
    if n == 0:
        raise InputError("zero ideal has no index")
    n = int(n)
    if n == 1:
        return 1
    index = 1
    for p in _rational_prime_factors(n):
        for prime in _prime_ideals_above(field, p):
            k = ideal_valuation(frak_c, prime)
            if k >= 1:
                np = int(prime.norm())
                index *= np ** (k - 1) * (np + 1)
    return index


def _rational_prime_factors(n: int) -> list[int]:
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out
