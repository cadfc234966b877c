import cmath
import math
import random

import numpy as np
import pytest
from scipy.special import jv, rgamma, y0

from kuznf.errors import AccuracyError, DomainError
from kuznf.specialfun import (
    SpectralParam,
    WeightSpec,
    bessel_i,
    bessel_j,
    bessel_k,
    bessel_k_grid,
    j_star,
    j_star_orders,
    kernel_complex,
    kernel_real,
    kernel_real_nus,
    su2_coeff,
    su2_compose,
    su2_matrix,
    whittaker_real_norm,
    whittaker_real_norm_integral,
    whittaker_w,
)


class TestBesselK:
    def test_half_order_closed_form(self):
        # K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}
        got = bessel_k(0.5, 1.0)
        assert got == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1), rel=1e-10)

    def test_order_symmetry(self):
        rng = random.Random(1)
        for _ in range(25):
            mu = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            x = rng.uniform(0.05, 15.0)
            assert bessel_k(mu, x) == pytest.approx(bessel_k(-mu, x), rel=1e-10)

    def test_imaginary_order_real_valued(self):
        for t in [0.3, 1.0, 4.0]:
            for x in [0.2, 1.0, 7.0]:
                v = bessel_k(1j * t, x)
                assert abs(v.imag) < 1e-12 * max(1.0, abs(v))

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            bessel_k(1.0, -2.0)
        with pytest.raises(DomainError):
            bessel_k(11.0, 1.0)

    def test_uncertifiable_raises_accuracy(self):
        # deep-cancellation regime: huge imaginary order at tiny argument
        with pytest.raises(AccuracyError) as info:
            bessel_k(0.5 + 17j, 1e-3, tol=1e-10)
        assert info.value.achieved > 1e-10

    def test_connection_with_i(self):
        # K_mu = pi/2 (I_{-mu} - I_mu) / sin(pi mu) for non-integer mu;
        # the difference cancels like e^(2x), so the identity is asserted at
        # 1e-8 only where that loss leaves enough digits
        for mu in [0.3, 1.4, 0.25 + 0.5j, 2.2]:
            for x in [0.3, 1.0, 2.5, 5.0]:
                lhs = bessel_k(mu, x)
                rhs = (math.pi / 2.0) * (bessel_i(-mu, x) - bessel_i(mu, x)) \
                    / cmath.sin(math.pi * mu)
                assert lhs == pytest.approx(rhs, rel=1e-8), (mu, x)
        # larger arguments: agreement within the cancellation budget
        for x in [8.0, 12.0]:
            lhs = bessel_k(0.3, x)
            rhs = (math.pi / 2.0) * (bessel_i(-0.3, x) - bessel_i(0.3, x)) \
                / math.sin(math.pi * 0.3)
            assert abs(lhs - rhs) < 1e-13 * math.exp(x)

    def test_grid_matches_scalar(self):
        xs = np.linspace(0.1, 12.0, 40)
        grid = bessel_k_grid(1.1 - 0.4j, xs)
        for x, v in zip(xs, grid):
            assert v == pytest.approx(bessel_k(1.1 - 0.4j, float(x)), rel=1e-12)


class TestBesselJI:
    def test_j_matches_scipy_real_orders(self):
        for mu in [0.0, 0.5, 2.0, -2.5, 3.0]:
            for x in [0.2, 1.0, 6.0, 15.0, 30.0]:
                assert bessel_j(mu, x) == pytest.approx(jv(mu, x), rel=1e-8, abs=1e-12)

    def test_branch_overlap_consistency(self):
        # series and integral branch agree on the crossover neighborhood
        from kuznf._pkern import _integral_j, _series_ij
        for mu in [0.7, 1j, 1.5 - 0.5j]:
            for x in [6.0, 8.0, 10.0]:
                s, _ = _series_ij(complex(mu), np.array([x]), -1)
                v, _ = _integral_j(complex(mu), x)
                assert complex(s[0]) == pytest.approx(v, rel=1e-9)

    def test_i_exponential_growth(self):
        assert bessel_i(2.0, 20.0).real / bessel_i(2.0, 10.0).real > math.exp(8)


class TestJStar:
    @pytest.mark.parametrize("nu", [0.0, 0.5, 2.0, 1.3j, -0.7 + 0.2j])
    def test_value_at_zero(self, nu):
        assert j_star(nu, 0.0) == pytest.approx(complex(rgamma(complex(nu) + 1)), rel=1e-12)

    @pytest.mark.parametrize("nu", [0.0, 0.5, 2.0])
    def test_matches_bessel_j(self, nu):
        for z in [0.5, 2.0, 5.0, 9.9]:
            want = jv(nu, z) * (z / 2.0) ** (-nu)
            assert j_star(nu, z) == pytest.approx(want, rel=1e-9)

    def test_even(self):
        rng = random.Random(2)
        for _ in range(20):
            nu = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            z = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
            assert j_star(nu, z) == pytest.approx(j_star(nu, -z), rel=1e-12)

    def test_orders_batch(self):
        nus = np.array([0.3, 1j, -2.0 + 0j])
        batch = j_star_orders(nus, 1.7 + 0.3j)
        for nu, v in zip(nus, batch):
            assert v == pytest.approx(j_star(complex(nu), 1.7 + 0.3j), rel=1e-12)


class TestWhittakerW:
    def test_k0_reduces_to_bessel_k(self):
        # W_{0,mu}(2x) = sqrt(2x/pi) K_mu(x)
        for mu in [0.25, 1j, 0.45, 1.5j]:
            for x in [0.3, 1.0, 3.0]:
                lhs = whittaker_w(0, mu, 2 * x)
                rhs = math.sqrt(2 * x / math.pi) * bessel_k(mu, x)
                assert lhs == pytest.approx(rhs, rel=1e-9), (mu, x)

    def test_nu_symmetry(self):
        for k in [-1, 0, 1, 2]:
            for nu in [0.3, 0.25j, 1.2j]:
                for y in [0.5, 2.0]:
                    a = whittaker_w(k, nu, y)
                    b = whittaker_w(k, -complex(nu), y)
                    assert a == pytest.approx(b, rel=1e-9)

    def test_exponential_decay_band(self):
        ratio = whittaker_w(1, 0.25, 20.0) / whittaker_w(1, 0.25, 10.0)
        assert abs(ratio) < math.exp(-4)

    def test_discrete_series_closed_form(self):
        for y in [0.4, 1.0, 5.0]:
            assert whittaker_w(2, 1.5, y) == pytest.approx(math.exp(-y / 2) * y * y,
                                                           rel=1e-10)


class TestWhittakerRealNorm:
    def test_pole_gives_zero(self):
        # discrete series (q=4, nu=3/2) at negative y: Gamma pole -> 0
        assert whittaker_real_norm(4, 1.5, -1.0) == 0

    def test_reality_principal(self):
        for t in [0.5, 1.0, 2.0]:
            for y in [0.3, 1.5]:
                v = whittaker_real_norm(0, 1j * t, y)
                assert abs(v.imag) < 1e-12 * max(1.0, abs(v))

    def test_odd_weight_rejected(self):
        with pytest.raises(DomainError):
            whittaker_real_norm(3, 0.1, 1.0)

    @pytest.mark.parametrize("q,nu", [(0, 0.25), (2, 1j), (4, 1.5)])
    def test_norm_one(self, q, nu):
        assert whittaker_real_norm_integral(q, complex(nu)) == pytest.approx(1.0, abs=1e-6)


class TestSU2:
    def test_identity_element(self):
        for l in range(4):
            for p in range(-l, l + 1):
                for q in range(-l, l + 1):
                    want = 1.0 if p == q else 0.0
                    assert su2_coeff(l, p, q, 1.0, 0.0) == pytest.approx(want)

    def test_weyl_element(self):
        for l in range(4):
            for p in range(-l, l + 1):
                for q in range(-l, l + 1):
                    got = su2_coeff(l, p, q, 0.0, 1.0)
                    want = (-1.0) ** (l - q) if p == -q else 0.0
                    assert got == pytest.approx(want), (l, p, q)

    @pytest.mark.parametrize("l", [0, 1, 2, 3, 4])
    def test_homomorphism(self, l):
        rng = random.Random(l + 10)
        for _ in range(6):
            def unit():
                v = np.array([rng.gauss(0, 1) for _ in range(4)])
                v /= np.linalg.norm(v)
                return complex(v[0], v[1]), complex(v[2], v[3])
            k1, k2 = unit(), unit()
            m12 = su2_matrix(l, *su2_compose(k1, k2))
            m1m2 = su2_matrix(l, *k1) @ su2_matrix(l, *k2)
            assert np.max(np.abs(m12 - m1m2)) < 1e-10

    def test_non_unit_rejected(self):
        with pytest.raises(DomainError):
            su2_coeff(1, 0, 0, 0.9, 0.9)


class TestKernelReal:
    def test_real_on_principal_series(self):
        for t in [0.4, 1.3, 3.2]:
            for z in [0.4, 2.0, 7.0]:
                v = kernel_real(1j * t, z)
                assert abs(v.imag) < 1e-10 * max(1.0, abs(v))

    def test_even_in_nu(self):
        rng = random.Random(3)
        for _ in range(20):
            nu = complex(0, rng.uniform(0.1, 4.0))
            z = rng.uniform(0.1, 6.0)
            assert kernel_real(nu, z) == pytest.approx(kernel_real(-nu, z), rel=1e-12)

    def test_discrete_point_value(self):
        # nu = 3/2: sin(pi nu) = -1 and J_{-3} - J_3 = -2 J_3
        for z in [0.5, 2.0, 6.0]:
            got = kernel_real(1.5, z)
            assert got == pytest.approx(4.0 * math.pi * jv(3, z), rel=1e-8)

    def test_near_zero_limit(self):
        from kuznf.specialfun.kernels import _kernel_real_regular
        for z in [0.5, 2.0]:
            got = kernel_real(0.0, z)
            assert got == pytest.approx(-4.0 * math.pi * float(y0(z)), rel=1e-7)
            # the corrected limit model agrees with the direct formula at the
            # same nu just inside the switch radius
            nu = 0.9e-3 * 1j
            model = kernel_real(nu, z)
            direct = _kernel_real_regular(nu, abs(z))
            assert abs(model - direct) < 1e-8 * max(1.0, abs(direct))

    def test_integer_pole_rejected(self):
        with pytest.raises(DomainError):
            kernel_real(2.0, 1.0)

    def test_batch_matches_scalar(self):
        nus = 1j * np.linspace(0.05, 4.0, 37)
        z = 1.3
        batch = kernel_real_nus(nus, z)
        for nu, v in zip(nus, batch):
            assert v == pytest.approx(kernel_real(complex(nu), z), rel=1e-10)


class TestKernelComplex:
    def test_invariance_under_negation(self):
        rng = random.Random(4)
        for _ in range(20):
            nu = complex(0, rng.uniform(0.1, 2.5))
            p = rng.randint(-3, 3)
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            if abs(z) < 0.1:
                continue
            a = kernel_complex(nu, p, z)
            b = kernel_complex(-nu, -p, z)
            assert a == pytest.approx(b, rel=1e-9), (nu, p, z)

    def test_real_for_principal_p0_real_z(self):
        for t in [0.4, 1.1, 2.7]:
            for z in [0.3, 1.0, 4.0]:
                v = kernel_complex(1j * t, 0, z)
                assert abs(v.imag) < 1e-9 * max(1.0, abs(v))

    def test_small_z_leading_order(self):
        # B ~ |z/2|^(-2 nu) (iz/|z|)^(2p) / (Gamma(1-nu+p) Gamma(1-nu-p) sin(pi(nu-p)))
        z = 1e-3
        for (nu, p) in [(0.3, 0), (0.2, 1)]:
            got = kernel_complex(nu, p, z)
            want = (z / 2.0) ** (-2 * nu) * (1j) ** (2 * p) \
                * complex(rgamma(1 - nu + p)) * complex(rgamma(1 - nu - p)) \
                / cmath.sin(math.pi * (nu - p))
            assert got == pytest.approx(want, rel=2.0)
            assert abs(got / want - 1.0) < 0.01, (nu, p)

    def test_removable_point_scheme_matches_direct(self):
        # inside the switch radius the direct formula is still computable
        # (0/0 cancellation costs ~1e-16/|nu| relative); the epsilon scheme
        # must agree with it at the same point
        from kuznf.specialfun.kernels import _kernel_complex_regular
        for p in [0, 1, -2]:
            for z in [0.7 + 0.2j, 1.5]:
                nu = 5e-4 * 1j
                scheme = kernel_complex(nu, p, z)
                direct = _kernel_complex_regular(nu, p, complex(z))
                assert abs(scheme - direct) < 1e-7 * max(1.0, abs(direct)), (p, z)


class TestParamTypes:
    def test_real_domain(self):
        SpectralParam("real", 1j * 2.0, eps=0)
        SpectralParam("real", 1.5)
        SpectralParam("real", 0.49)
        with pytest.raises(DomainError):
            SpectralParam("real", 2.3)
        with pytest.raises(DomainError):
            SpectralParam("real", 0.3 + 0.4j)

    def test_complex_domain(self):
        SpectralParam("complex", 1.7j, p=3)
        SpectralParam("complex", 0.3, p=0)
        with pytest.raises(DomainError):
            SpectralParam("complex", 0.3, p=1)
        with pytest.raises(DomainError):
            SpectralParam("complex", 0.0 + 0.0j, p=None)

    def test_weights(self):
        WeightSpec("real", 4)
        with pytest.raises(DomainError):
            WeightSpec("real", 3)
        WeightSpec("complex", 1, l=2)
        with pytest.raises(DomainError):
            WeightSpec("complex", 3, l=2)

    def test_series_classification(self):
        assert SpectralParam("real", 2.5).series == "discrete"
        assert SpectralParam("real", 1j).series == "principal"
        assert SpectralParam("real", 0.2).series == "complementary"
