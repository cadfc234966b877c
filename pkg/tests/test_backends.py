"""Compiled extension vs pure-Python backend agreement."""

import numpy as np
import pytest

from kuznf import backend

pure = backend.get_backend("pure")
try:
    compiled = backend.get_backend("compiled")
except ImportError:
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None,
                                    reason="compiled backend not built")

ORDERS = [0.0, 0.5, 2.0, -1.7, -3.0, 1j, 3j, 0.3 + 2j, 2.5 - 4j, 4.5 + 1.2j]
ARGS = [1e-3, 0.3, 1.0, 4.0, 8.0, 15.0, 40.0]


@needs_compiled
class TestParity:
    def test_bessel_k(self):
        for mu in ORDERS:
            for x in ARGS:
                vc, _ = compiled.bessel_k(complex(mu), x)
                vp, _ = pure.bessel_k(complex(mu), x)
                assert vc == pytest.approx(vp, rel=1e-11, abs=1e-280), (mu, x)

    @pytest.mark.parametrize("name", ["bessel_i", "bessel_j"])
    def test_bessel_ij(self, name):
        for mu in ORDERS:
            for x in ARGS:
                vc, _ = getattr(compiled, name)(complex(mu), x)
                vp, _ = getattr(pure, name)(complex(mu), x)
                assert vc == pytest.approx(vp, rel=1e-9, abs=1e-280), (name, mu, x)

    def test_j_star(self):
        for nu in [0.5, -3.0 + 0j, 1.2j, 2.0 - 0.5j]:
            for z in [0.5 + 0.2j, 3.0 + 0j, 7.0 - 2.0j]:
                vc = compiled.j_star(complex(nu), complex(z))
                vp = pure.j_star(complex(nu), complex(z))
                assert vc == pytest.approx(vp, rel=1e-11, abs=1e-300)

    def test_batch_entry_points(self):
        xs = np.linspace(0.1, 20.0, 37)
        vc, _ = compiled.bessel_k_xs(1.1 - 0.4j, xs)
        vp, _ = pure.bessel_k_xs(1.1 - 0.4j, xs)
        assert np.max(np.abs(np.asarray(vc) - np.asarray(vp))
                      / np.maximum(np.abs(vp), 1e-300)) < 1e-11
        mus = np.array([0.3, -2.0 + 0j, 1.7j])
        jc, _ = compiled.bessel_j_mus(mus, 2.5)
        jp, _ = pure.bessel_j_mus(mus, 2.5)
        assert np.max(np.abs(np.asarray(jc) - np.asarray(jp))) < 1e-11

    def test_classical_kloosterman(self):
        for (m, n, c) in [(1, 1, 2), (1, 0, 5), (3, -4, 35), (0, 0, 12), (2, 7, 97)]:
            assert compiled.classical_kloosterman(m, n, c) == pytest.approx(
                pure.classical_kloosterman(m, n, c), abs=1e-10)

    def test_rgamma_agrees_with_scipy(self):
        from scipy.special import rgamma
        for z in [0.5, 3.0, -2.0 + 0j, -0.5 + 2j, 4.0 - 3j, 1e-8 + 0j]:
            got = compiled.rgamma(complex(z))
            want = complex(rgamma(complex(z)))
            assert got == pytest.approx(want, rel=1e-11, abs=1e-13), z


class TestSelection:
    def test_available_listed(self):
        names = backend.available_backends()
        assert "pure" in names

    def test_active_is_importable(self):
        assert backend.BACKEND in backend.available_backends()

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            backend.get_backend("fortran")
