import math
import random
from fractions import Fraction

import pytest

from kuznf.errors import InputError
from kuznf.numberfield import (
    FracIdeal,
    fundamental_unit,
    ideal_arith,
    integral_ideals_of_norm,
    k_index,
    make_field,
    narrow_class_reps,
    narrow_class_reps_all,
    psi_inf,
    quotient_module,
    tp_units_mod_squares,
)

Q = make_field("Q")
QI = make_field("Q(sqrt(-1))")
Q5 = make_field("Q(sqrt(5))")


def random_ideal(field, rng):
    while True:
        a = field.element(Fraction(rng.randint(-9, 9), rng.randint(1, 4)),
                          Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                          if field.degree == 2 else 0)
        if not a.is_zero():
            break
    gens = [a]
    if rng.random() < 0.5:
        b = field.element(rng.randint(-9, 9), rng.randint(-9, 9) if field.degree == 2 else 0)
        if not b.is_zero():
            gens.append(b)
    return FracIdeal.from_generators(field, gens)


class TestMakeField:
    def test_rationals(self):
        assert Q.degree == 1
        assert Q.disc == 1
        assert Q.different.norm() == 1

    def test_gaussian(self):
        assert QI.disc == -4
        assert QI.signature == (0, 1)
        # ||different|| = |disc|
        assert QI.different.norm() == 4
        two = FracIdeal.principal(QI.element(2))
        assert QI.different == two

    def test_sqrt5(self):
        assert Q5.disc == 5
        assert Q5.signature == (2, 0)
        assert Q5.different == FracIdeal.principal(Q5.sqrt_d())
        assert Q5.different.norm() == 5

    @pytest.mark.parametrize("bad", ["Q(sqrt(4))", "Q(sqrt(12))", "Q(sqrt(0))", "Q(sqrt(1))"])
    def test_rejects_nonsquarefree(self, bad):
        with pytest.raises(InputError):
            make_field(bad)


class TestPsi:
    def test_half_is_minus_one(self):
        assert psi_inf(Q.element(Fraction(1, 2))) == pytest.approx(-1)

    @pytest.mark.parametrize("n", [-3, 0, 1, 7])
    def test_integers_trivial(self, n):
        assert psi_inf(Q.element(n)) == pytest.approx(1)

    def test_gaussian_half_i(self):
        x = QI.element(0, Fraction(1, 2))  # i/2, trace 0
        assert psi_inf(x) == pytest.approx(1)

    def test_homomorphism(self):
        rng = random.Random(7)
        for field in (Q, QI, Q5):
            for _ in range(40):
                x = field.element(Fraction(rng.randint(-20, 20), rng.randint(1, 9)),
                                  Fraction(rng.randint(-20, 20), rng.randint(1, 9))
                                  if field.degree == 2 else 0)
                y = field.element(Fraction(rng.randint(-20, 20), rng.randint(1, 9)),
                                  Fraction(rng.randint(-20, 20), rng.randint(1, 9))
                                  if field.degree == 2 else 0)
                lhs = psi_inf(x + y)
                rhs = psi_inf(x) * psi_inf(y)
                assert abs(lhs - rhs) < 1e-12

    def test_trivial_on_inverse_different(self):
        # elements of d^-1 have integral trace, so psi = 1 there
        for field in (Q, QI, Q5):
            dinv = field.different.inverse()
            for g in dinv.basis_elements():
                assert g.trace().denominator == 1
                assert abs(psi_inf(g) - 1) < 1e-12


class TestElements:
    def test_norm_is_product_of_embeddings(self):
        rng = random.Random(3)
        for field in (Q, QI, Q5, make_field(-7), make_field(3)):
            for _ in range(25):
                x = field.element(Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
                                  Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                                  if field.degree == 2 else 0)
                embs = x.embeddings()
                prod = 1.0 + 0j
                for j, v in enumerate(embs):
                    if j < field.signature[0]:
                        prod *= v
                    else:
                        prod *= v * v.conjugate()
                assert abs(prod - complex(float(x.norm()))) < 1e-8 * (1 + abs(prod))

    def test_total_positivity_matches_floats(self):
        rng = random.Random(11)
        for field in (Q, Q5, make_field(3), make_field(2)):
            for _ in range(60):
                x = field.element(rng.randint(-9, 9),
                                  rng.randint(-9, 9) if field.degree == 2 else 0)
                if x.is_zero():
                    continue
                want = all(v.real > 0 for v in x.embeddings())
                assert x.is_totally_positive() == want

    def test_imaginary_vacuous(self):
        assert QI.element(-3, 5).is_totally_positive()


class TestIdealArithmetic:
    def test_rational_product_norm(self):
        two = FracIdeal.principal(Q.element(2))
        three = FracIdeal.principal(Q.element(3))
        six = ideal_arith("product", two, three)
        assert six == FracIdeal.principal(Q.element(6))
        assert ideal_arith("norm", six) == 6

    def test_gaussian_one_plus_i_squared(self):
        p = FracIdeal.principal(QI.element(1, 1))  # (1+i)
        assert p * p == FracIdeal.principal(QI.element(2))

    @pytest.mark.parametrize("field", [Q, QI, Q5, make_field(3)], ids=str)
    def test_inverse_roundtrip(self, field):
        rng = random.Random(5)
        one = FracIdeal.ring_of_integers(field)
        for _ in range(50):
            ideal = random_ideal(field, rng)
            assert ideal * ideal.inverse() == one
            assert ideal.inverse().norm() == 1 / ideal.norm()

    @pytest.mark.parametrize("field", [Q, QI, Q5, make_field(-7)], ids=str)
    def test_norm_multiplicative(self, field):
        rng = random.Random(17)
        for _ in range(50):
            i, j = random_ideal(field, rng), random_ideal(field, rng)
            assert (i * j).norm() == i.norm() * j.norm()

    def test_json_roundtrip(self):
        rng = random.Random(23)
        for field in (Q, QI, Q5):
            for _ in range(10):
                ideal = random_ideal(field, rng)
                assert FracIdeal.from_json(field, ideal.to_json()) == ideal


class TestQuotientModule:
    def test_z_mod_5(self):
        i = FracIdeal.ring_of_integers(Q)
        j = FracIdeal.principal(Q.element(5))
        qm = quotient_module(i, j)
        assert qm.cardinality == 5
        gens = sorted(int(x.a) for x in qm.generators())
        assert gens == [1, 2, 3, 4]

    def test_gaussian_mod_one_plus_i(self):
        i = FracIdeal.ring_of_integers(QI)
        j = FracIdeal.principal(QI.element(1, 1))
        qm = quotient_module(i, j)
        assert qm.cardinality == 2
        gens = qm.generators()
        assert len(gens) == 1 and not gens[0].is_zero()

    def test_trivial_quotient(self):
        i = FracIdeal.ring_of_integers(Q)
        qm = quotient_module(i, i)
        assert qm.cardinality == 1
        assert qm.structure == (1,)
        assert len(qm.generators()) == 1  # the zero residue generates I/I

    @pytest.mark.parametrize("field", [Q, QI, Q5], ids=str)
    def test_cardinality_is_norm_of_ratio(self, field):
        rng = random.Random(29)
        for _ in range(20):
            i = random_ideal(field, rng)
            c = field.element(rng.randint(1, 6), rng.randint(0, 2) if field.degree == 2 else 0)
            if c.is_zero() or c.norm() == 0:
                continue
            j = i.scale(c)
            qm = quotient_module(i, j)
            assert qm.cardinality == (j * i.inverse()).norm()


class TestUnits:
    def test_rationals(self):
        data = tp_units_mod_squares(Q)
        assert [u.a for u in data.tp_mod_squares] == [1]

    def test_sqrt2(self):
        f = make_field(2)
        data = tp_units_mod_squares(f)
        assert data.fundamental_unit == f.element(1, 1)  # 1 + sqrt(2)
        assert data.fundamental_unit.norm() == -1
        assert len(data.tp_mod_squares) == 1

    def test_sqrt3(self):
        f = make_field(3)
        data = tp_units_mod_squares(f)
        assert data.fundamental_unit == f.element(2, 1)  # 2 + sqrt(3)
        assert data.fundamental_unit.norm() == 1
        assert len(data.tp_mod_squares) == 2
        assert data.tp_mod_squares[1] == f.element(2, 1)

    def test_golden_ratio(self):
        data = tp_units_mod_squares(Q5)
        assert data.fundamental_unit == Q5.element(0, 1)  # omega = (1+sqrt 5)/2
        assert len(data.tp_mod_squares) == 1

    def test_gaussian_units(self):
        data = tp_units_mod_squares(QI)
        assert len(data.roots_of_unity) == 4
        assert len(data.tp_mod_squares) == 2

    @pytest.mark.parametrize("d", [2, 3, 5, 6, 7, 10, 11, 13, 19])
    def test_reps_totally_positive_and_inequivalent(self, d):
        f = make_field(d)
        data = tp_units_mod_squares(f)
        units = [f.one(), -f.one(), data.fundamental_unit, -data.fundamental_unit]
        for rep in data.tp_mod_squares:
            assert rep.is_totally_positive()
            assert abs(rep.norm()) == 1
        # pairwise inequivalent modulo unit squares: e1/e2 = u^2 has no solution
        squares = [u * u for u in units]
        reps = data.tp_mod_squares
        for a in range(len(reps)):
            for b in range(a + 1, len(reps)):
                ratio = reps[a] * reps[b].inverse()
                assert not any(ratio == s for s in squares)


class TestNarrowClasses:
    def test_rational_trivial(self):
        z = FracIdeal.ring_of_integers(Q)
        reps = narrow_class_reps(Q, z, z)
        assert len(reps) == 1
        m, gamma = reps[0]
        assert m == z
        assert gamma.a > 0

    def test_gaussian_class_number_one(self):
        o = FracIdeal.ring_of_integers(QI)
        assert len(narrow_class_reps_all(QI)) == 1
        reps = narrow_class_reps(QI, o, o)
        assert len(reps) == 1

    def test_sqrt3_narrow_class_number_two(self):
        f = make_field(3)
        assert len(narrow_class_reps_all(f)) == 2
        o = FracIdeal.ring_of_integers(f)
        reps = narrow_class_reps(f, o, o)
        # both classes square to the principal narrow class (group C2)
        assert len(reps) == 2
        for m, gamma in reps:
            assert gamma.is_totally_positive()
            assert m * m == FracIdeal.principal(gamma)

    def test_sqrt2_narrow_trivial(self):
        f = make_field(2)
        assert len(narrow_class_reps_all(f)) == 1

    @pytest.mark.parametrize("d", [5, 13, -7, -2])
    def test_class_number_one_fields(self, d):
        assert len(narrow_class_reps_all(make_field(d))) == 1

    def test_gamma_determinism(self):
        f = make_field(3)
        o = FracIdeal.ring_of_integers(f)
        r1 = narrow_class_reps(f, o, o)
        r2 = narrow_class_reps(f, o, o)
        assert [(m.canonical_key(), g.coords()) for m, g in r1] == \
               [(m.canonical_key(), g.coords()) for m, g in r2]


def brute_force_index(n: int) -> int:
    """|SL2(Z/n)| / #upper-triangular, by counting solutions of ad-bc=1."""
    cnt = [0] * n
    for b in range(n):
        for c in range(n):
            cnt[(b * c) % n] += 1
    total = 0
    for a in range(n):
        for d in range(n):
            total += cnt[(a * d - 1) % n]
    phi = sum(1 for a in range(n) if math.gcd(a, n) == 1)
    return total // (n * phi)


class TestKIndex:
    def test_level_one(self):
        assert k_index(Q, FracIdeal.ring_of_integers(Q)) == 1

    def test_level_seven(self):
        assert k_index(Q, FracIdeal.principal(Q.element(7))) == 8

    def test_level_twelve(self):
        assert k_index(Q, FracIdeal.principal(Q.element(12))) == 24

    @pytest.mark.parametrize("n", range(2, 51))
    def test_brute_force_oracle(self, n):
        got = k_index(Q, FracIdeal.principal(Q.element(n)))
        assert got == brute_force_index(n)

    def test_multiplicative_over_coprime(self):
        for m, n in [(4, 9), (5, 8), (7, 25), (3, 49)]:
            a = k_index(Q, FracIdeal.principal(Q.element(m)))
            b = k_index(Q, FracIdeal.principal(Q.element(n)))
            c = k_index(Q, FracIdeal.principal(Q.element(m * n)))
            assert c == a * b

    def test_gaussian_split_prime(self):
        # (5) = p * pbar in Q(i); each factor has norm 5
        p5 = FracIdeal.principal(QI.element(5))
        assert k_index(QI, p5) == 6 * 6

    def test_gaussian_inert_prime(self):
        # (3) stays prime with norm 9
        p3 = FracIdeal.principal(QI.element(3))
        assert k_index(QI, p3) == 10

    def test_gaussian_ramified(self):
        # (2) = (1+i)^2: contribution ||p||^(2-1) * (||p||+1) = 2*3
        p2 = FracIdeal.principal(QI.element(2))
        assert k_index(QI, p2) == 6


class TestIntegralIdealEnumeration:
    @pytest.mark.parametrize("field,n,count", [
        (QI, 2, 1), (QI, 5, 2), (QI, 3, 0), (QI, 9, 1),
        (Q5, 4, 1), (Q5, 5, 1), (Q5, 11, 2),
    ])
    def test_counts(self, field, n, count):
        assert len(integral_ideals_of_norm(field, n)) == count

    def test_norms_correct(self):
        for n in range(1, 30):
            for ideal in integral_ideals_of_norm(QI, n):
                assert ideal.norm() == n
                assert ideal.is_integral()
