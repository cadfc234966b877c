"""Generalized Kloosterman sums over Q and quadratic fields.

The sum runs over the residues x that generate the finite module
a1*c^-1 / a1*(c) over the ring of integers,

    KS(a1_, a1; a2_, a2; c, c_) = sum_x psi_inf((alpha1*x + alpha2*x^-1)/c),

where x^-1 is the unique residue of a1^-1*c_ / a1^-1*(c)*c_^2 with
x*x^-1 = 1 modulo the ideal (c)*c_.  Each term's character argument is
reduced exactly (rational trace modulo 1) before exponentiation, so every
term is a root of unity evaluated once.

The completely independent classical oracle S(m,n;c) and the Weil-bound
margin report live here as well.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from . import backend
from .errors import InputError, InternalConsistencyError, PreconditionError
from .numberfield import FieldElement, FracIdeal, quotient_module, solve_integer_system
from .numberfield.units import _prime_ideals_above, _rational_prime_factors, ideal_valuation

DEFAULT_TERM_CAP = 10**6


@dataclass(frozen=True)
class KloostermanQuery:
    """One Kloosterman-sum evaluation request.

    Memberships required (checked exactly by :meth:`validate`):
    alpha1 in a1^-1 d^-1, alpha2 in a1 d^-1 c_^-2, c in c_^-1, and
    c_^2 in the ideal class of a1*a2.
    """

    alpha1: FieldElement
    frak_a1: FracIdeal
    alpha2: FieldElement
    frak_a2: FracIdeal
    c: FieldElement
    frak_c: FracIdeal

    def validate(self, check_class: bool = True) -> None:
        field = self.alpha1.field
        d = field.different
        a1inv = self.frak_a1.inverse()
        if not (a1inv * d.inverse()).contains(self.alpha1):
            raise PreconditionError("alpha1 is not in a1^-1 * d^-1")
        if not (self.frak_a1 * d.inverse() * (self.frak_c ** -2)).contains(self.alpha2):
            raise PreconditionError("alpha2 is not in a1 * d^-1 * c^-2")
        if self.c.is_zero():
            raise PreconditionError("c must be nonzero")
        if not self.frak_c.inverse().contains(self.c):
            raise PreconditionError("c is not in frak_c^-1")
        if check_class:
            from .numberfield.units import principal_generator
            ratio = (self.frak_c * self.frak_c) * (self.frak_a1 * self.frak_a2).inverse()
            if principal_generator(ratio) is None:
                raise PreconditionError("frak_c^2 and a1*a2 are not in the same ideal class")


@dataclass(frozen=True)
class KloostermanResult:
    value: complex
    term_count: int
    modulus_norm: Fraction


def kloosterman_sum(query: KloostermanQuery, *, shuffle_seed: int | None = None,
                    term_cap: int = DEFAULT_TERM_CAP,
                    validate: bool = True) -> KloostermanResult:
    """Evaluate the generalized Kloosterman sum of the query.

    ``shuffle_seed`` re-randomizes the residue representatives (the value is
    representative-independent; tests exercise this).  ``term_cap`` guards
    the enumeration cost.
    """
    if validate:
        query.validate()
    field = query.alpha1.field
    c_ideal = FracIdeal.principal(query.c)
    mod_ideal = c_ideal * query.frak_c          # (c) * c_, the congruence ideal
    index = mod_ideal.norm()
    if index.denominator != 1:
        raise InternalConsistencyError("congruence ideal is not integral")
    if int(index) > term_cap:
        raise InputError(f"enumeration would need {index} terms (cap {term_cap})")

    ambient = query.frak_a1 * query.frak_c.inverse()
    sub = query.frak_a1 * c_ideal
    qm = quotient_module(ambient, sub)

    inv_ambient = query.frak_a1.inverse() * query.frak_c
    inv_sub = query.frak_a1.inverse() * c_ideal * query.frak_c * query.frak_c
    inv_basis = inv_ambient.basis_elements()
    mod_basis = mod_ideal.basis_elements()

    def pad(coords):
        return (int(coords[0]), int(coords[1]) if len(coords) > 1 else 0)

    mod_cols = [pad(e.coords()) for e in mod_basis]
    one_target = pad(field.one().coords())

    total = 0.0 + 0.0j
    count = 0
    for x in qm.representatives(shuffle_seed):
        if not qm.is_generator(x):
            continue
        xw = [x * w for w in inv_basis]
        cols = [pad(e.coords()) for e in xw] + mod_cols
        sol = solve_integer_system(cols, one_target)
        if sol is None:
            raise InternalConsistencyError(
                "no inverse residue found for a generator; query is inconsistent")
        x_inv = inv_basis[0] * sol[0]
        if len(inv_basis) > 1:
            x_inv = x_inv + inv_basis[1] * sol[1]
        arg = (query.alpha1 * x + query.alpha2 * x_inv) / query.c
        t = arg.trace()
        t -= math.floor(t)
        total += cmath.exp(2j * cmath.pi * float(t))
        count += 1
    return KloostermanResult(total, count, index)


def classical_kloosterman(m: int, n: int, c: int) -> complex:
    """S(m,n;c) by direct enumeration; the independent oracle for F = Q."""
    return backend.classical_kloosterman_raw(int(m), int(n), int(c))


def _divisor_count(n: int) -> int:
    count = 1
    for p in _rational_prime_factors(n):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        count *= e + 1
    return count


def _ideal_divisor_count(ideal: FracIdeal) -> int:
    """Number of integral ideals dividing an integral ideal."""
    n = int(ideal.norm())
    if n == 1:
        return 1
    count = 1
    for p in _rational_prime_factors(n):
        for prime in _prime_ideals_above(ideal.field, p):
            v = ideal_valuation(ideal, prime)
            count *= v + 1
    return count


def weil_margin(query: KloostermanQuery) -> dict:
    """Weil-bound report for a query.

    Over Q with integer data the cap d(c) * gcd(m,n,c)^(1/2) * c^(1/2) is
    asserted for nondegenerate frequencies; over quadratic fields the norm
    analogue tau(M) * ||M||^(1/2) is reported for monitoring only, the
    implied constant in the bound being unspecified.
    """
    field = query.alpha1.field
    result = kloosterman_sum(query)
    mod_ideal = FracIdeal.principal(query.c) * query.frak_c
    value_abs = abs(result.value)
    if field.degree == 1:
        c_int = int(mod_ideal.norm())
        m_int, n_int = query.alpha1.a, query.alpha2.a
        degenerate = (m_int.denominator != 1 or n_int.denominator != 1
                      or (int(m_int) % c_int == 0 and int(n_int) % c_int == 0))
        gcd_f = math.gcd(int(m_int) if m_int.denominator == 1 else 0,
                         int(n_int) if n_int.denominator == 1 else 0, c_int)
        cap = _divisor_count(c_int) * math.sqrt(gcd_f) * math.sqrt(c_int)
        asserted = not degenerate
    else:
        cap = _ideal_divisor_count(mod_ideal) * math.sqrt(float(mod_ideal.norm()))
        asserted = False
    return {
        "value_abs": value_abs,
        "weil_cap": cap,
        "ratio": value_abs / cap if cap > 0 else float("inf"),
        "asserted": asserted,
        "holds": value_abs <= cap * (1 + 1e-9),
        "terms": result.term_count,
    }


def trivial_rational_query(field, m: int, n: int, c: int) -> KloostermanQuery:
    """The F = Q specialization with all ideals trivial."""
    if field.degree != 1:
        raise InputError("trivial_rational_query requires the rational field")
    z = FracIdeal.ring_of_integers(field)
    return KloostermanQuery(field.element(m), z, field.element(n), z,
                            field.element(c), z)
