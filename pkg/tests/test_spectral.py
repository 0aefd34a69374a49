import math

import numpy as np
import pytest
from scipy.optimize import brentq

from qgs.catalog import fig1_tree
from qgs.coupling import FREE, GpiCouplingA
from qgs.errors import NonMaximalDomain, ZeroDetA
from qgs.reduction import DirichletBoth, HalflineProblem
from qgs.spectral import (DIRICHLET, NEUMANN, PointAtInfinity, SpectralParameter,
                          asymptotic_coefficients, asymptotic_excess, b_matrix, decaying_data,
                          interval_transfer, match_eigenvalues, mfunction_asymptotic,
                          mfunction_excess, mfunction_minus, mfunction_plus, mfunction_series,
                          tree_vs_decomposition, truncated_eigenvalues, weyl_disc)

SEED = 9001
TOL = 1e-12
KAPPAS = np.geomspace(10.0, 40.0, 12)


def random_points(n: int, rng: np.random.Generator) -> list:
    times = np.cumsum(rng.uniform(0.3, 1.5, n))
    out = []
    for t in times:
        while True:
            c = GpiCouplingA(*rng.uniform(-3, 3, 2), complex(*rng.uniform(-3, 3, 2)))
            if abs(c.det_a) > 0.1 and abs(complex(4 - c.det_a, -4 * c.gamma.imag)) > 0.1:
                break
        out.append((float(t), c))
    return out


def log_slope(errs) -> float:
    return float(np.polyfit(np.log(KAPPAS), np.log(errs), 1)[0])


class TestSpectralParameter:
    def test_branch(self):
        for z in (-4, 3 + 1e-9j, 2 + 3j, -1 - 1j):
            k = SpectralParameter(z).k
            assert k.imag >= 0 and abs(k * k - z) < 1e-12

    def test_kappa(self):
        assert abs(SpectralParameter.from_kappa(3.0).kappa - 3.0) < TOL


class TestIntervalTransfer:
    def test_zero_length(self):
        assert np.allclose(interval_transfer(0.0, 2 + 1j), np.eye(2))

    def test_zero_energy(self):
        assert np.allclose(interval_transfer(2.0, 0.0), [[1, 2], [0, 1]])

    def test_negative_energy(self):
        T = interval_transfer(1.0, -1.0)
        ch, sh = math.cosh(1), math.sinh(1)
        assert np.allclose(T, [[ch, sh], [sh, ch]], atol=TOL)
        assert abs(np.linalg.det(T) - 1) < TOL


class TestMFunction:
    def test_free_negative(self):
        for kappa in (0.5, 2.0, 30.0):
            m = mfunction_plus([], SpectralParameter.from_kappa(kappa), 1.3)
            assert abs(m + kappa) < 1e-12 * kappa

    def test_free_real_axis(self):
        m = mfunction_plus([], SpectralParameter(4.0), 0.0)
        assert abs(m - 2j) < TOL

    def test_single_real_gamma_closed_form(self):
        rho = 0.5
        c = GpiCouplingA(0, 0, 2 / 3)
        for kappa in (0.3, 1.0, 4.0):
            th = math.tanh(kappa)
            exact = -kappa * (rho ** 2 + th) / (1 + rho ** 2 * th)
            m = mfunction_plus([(1.0, c)], SpectralParameter.from_kappa(kappa), 0.0)
            assert abs(m - exact) < 1e-12 * kappa

    def test_series_single_point(self):
        pts = [(1.0, GpiCouplingA(0, 1, 1))]
        sp = SpectralParameter(-4.0)
        assert abs(mfunction_series(pts, sp) - mfunction_plus(pts, sp, 0.0)) < 1e-10

    def test_series_sparse_points(self):
        rng = np.random.default_rng(SEED)
        for _ in range(20):
            pts = [(t, c) for t, (_, c) in zip((1.0, 3.0, 9.0), random_points(3, rng))]
            sp = SpectralParameter(-9.0)
            assert abs(mfunction_series(pts, sp) - mfunction_plus(pts, sp, 0.0)) < 1e-8

    def test_series_empty(self):
        sp = SpectralParameter(2 + 3j)
        assert abs(mfunction_series([], sp) - 1j * sp.k) < TOL

    def test_zero_det(self):
        with pytest.raises(ZeroDetA):
            b_matrix([FREE])

    def test_on_point(self):
        with pytest.raises(NonMaximalDomain):
            decaying_data([(1.0, GpiCouplingA(1, 0, 0))], SpectralParameter(-1.0), 1.0)

    def test_herglotz(self):
        rng = np.random.default_rng(SEED + 1)
        for _ in range(50):
            pts = random_points(4, rng)
            z = complex(rng.uniform(-5, 5), rng.uniform(0.1, 3))
            m = mfunction_plus(pts, SpectralParameter(z), 0.0)
            assert m is not PointAtInfinity and m.imag > 0

    def test_minus_free(self):
        sp = SpectralParameter(2 + 3j)
        assert abs(mfunction_minus([], sp, 0.0) - 1j * sp.k) < TOL

    def test_minus_reflection(self):
        # a symmetric pair seen from its centre gives m_- = m_+
        c = GpiCouplingA(0.7, -0.3, 0.4 + 0.2j)
        cr = GpiCouplingA(0.7, -0.3, -(0.4 + 0.2j))
        sp = SpectralParameter(1 + 2j)
        mp = mfunction_plus([(1.0, c)], sp, 0.0)
        mm = mfunction_minus([(-1.0, cr)], sp, 0.0)
        assert abs(mp - mm) < 1e-12

    def test_dirichlet_point_splits(self):
        pts = [(1.0, DirichletBoth()), (2.0, GpiCouplingA(1, 0, 0))]
        kappa = 2.0
        m = mfunction_plus(pts, SpectralParameter.from_kappa(kappa), 0.0)
        # Dirichlet at t = 1 seen from 0: f = sinh(kappa (1 - t))
        assert abs(m + kappa / math.tanh(kappa)) < 1e-12

    def test_excess_matches_plus(self):
        rng = np.random.default_rng(SEED + 2)
        pts = random_points(3, rng)
        kappa = 3.0
        m = mfunction_plus(pts, SpectralParameter.from_kappa(kappa), 0.0)
        assert abs(mfunction_excess(pts, kappa) - (m + kappa)) < 1e-10


class TestAsymptotics:
    def test_example_value(self):
        c = GpiCouplingA(0, 0, 2 / 3)
        assert abs(asymptotic_coefficients(c)[1][0] - 0.6) < TOL
        kappa = 20.0
        approx = asymptotic_excess(c, 1.0, kappa)
        exact = mfunction_excess([(1.0, c)], kappa)
        assert abs(approx - 40 * math.exp(-40) * 0.6) < 1e-12 * abs(approx)
        assert abs(exact - approx) < abs(approx) / kappa

    def test_free_expansion_vanishes(self):
        assert mfunction_asymptotic(FREE, 1.0, 15.0) == -15.0

    def test_delta_prime_magnitude(self):
        kappa = 30.0
        exact = abs(mfunction_excess([(1.0, GpiCouplingA(0, 1, 0))], kappa))
        ref = 2 * kappa * math.exp(-2 * kappa) * abs(1 - 2 / kappa)
        assert ref / (1 + 5 / kappa) <= exact <= ref * (1 + 5 / kappa)

    @pytest.mark.parametrize("gamma", [2 / 3, -1.0, 0.3 + 0.4j])
    def test_corrected_slope(self, gamma):
        c = GpiCouplingA(1.0, 0.0, gamma)
        errs = [abs(mfunction_excess([(1.0, c)], k) - asymptotic_excess(c, 1.0, k))
                / abs(mfunction_excess([(1.0, c)], k)) for k in KAPPAS]
        assert abs(log_slope(errs) + 3) < 0.3

    @pytest.mark.parametrize("gamma", [2 / 3, -1.0, 0.3 + 0.4j])
    def test_printed_slope_is_second_order(self, gamma):
        c = GpiCouplingA(1.0, 0.0, gamma)
        errs = [abs(mfunction_excess([(1.0, c)], k)
                    - asymptotic_excess(c, 1.0, k, "printed"))
                / abs(mfunction_excess([(1.0, c)], k)) for k in KAPPAS]
        assert abs(log_slope(errs) + 2) < 0.3

    def test_unknown_convention(self):
        with pytest.raises(ValueError):
            asymptotic_coefficients(FREE, "other")


class TestWeylDisc:
    def test_free_radius_shrinks(self):
        p = HalflineProblem(0.0, DIRICHLET, ())
        radii = [weyl_disc(p, SpectralParameter(1j), b).radius for b in (1, 2, 4, 8, 16)]
        assert all(b < a for a, b in zip(radii, radii[1:]))

    def test_nesting_and_membership(self):
        rng = np.random.default_rng(SEED + 3)
        sp = SpectralParameter(1 + 1j)
        for _ in range(20):
            pts = tuple((t / 2, c) for t, c in random_points(3, rng))
            p = HalflineProblem(0.0, DIRICHLET, pts)
            d2, d4 = weyl_disc(p, sp, 2.0), weyl_disc(p, sp, 4.0)
            assert abs(d4.center - d2.center) + d4.radius <= d2.radius + 1e-10
            assert d4.contains(mfunction_plus(p, sp, 0.0))


class TestTruncatedEigenvalues:
    def test_dirichlet_dirichlet(self):
        p = HalflineProblem(0.0, DIRICHLET, ())
        ev = truncated_eigenvalues(p, math.pi, DIRICHLET, (0.0, 20.0), 2000)
        assert np.allclose(ev, [1, 4, 9, 16], atol=1e-10)

    def test_dirichlet_neumann(self):
        p = HalflineProblem(0.0, DIRICHLET, ())
        ev = truncated_eigenvalues(p, math.pi, NEUMANN, (0.0, 10.0), 2000)
        assert np.allclose(ev, [0.25, 2.25, 6.25], atol=1e-10)

    def test_delta_in_middle(self):
        p = HalflineProblem(0.0, DIRICHLET, ((math.pi / 2, GpiCouplingA(1, 0, 0)),))
        ev = truncated_eigenvalues(p, math.pi, DIRICHLET, (0.0, 20.0), 4000)

        def sym(k):
            return k * math.cos(k * math.pi / 2) + 0.5 * math.sin(k * math.pi / 2)

        ks = np.linspace(1e-6, math.sqrt(20), 4000)
        vals = [sym(k) for k in ks]
        roots = [brentq(sym, a, b, xtol=1e-15) ** 2
                 for a, b, fa, fb in zip(ks, ks[1:], vals, vals[1:]) if fa * fb < 0]
        expected = sorted(roots + [4.0, 16.0])
        assert len(ev) == len(expected)
        assert np.allclose(ev, expected, atol=1e-9)

    def test_fig1_tree_agrees(self):
        res = tree_vs_decomposition(fig1_tree(), 3.0, (0.0, 30.0), 1500)
        assert res["counts_equal"] and res["max_mismatch"] < 1e-8
        assert len(res["direct"]) > 5


class TestMatchEigenvalues:
    def test_counts(self):
        same, worst, unmatched = match_eigenvalues([1.0, 2.0], [1.0, 2.0 + 1e-10])
        assert same and worst < 1e-9 and not unmatched
        same, _, unmatched = match_eigenvalues([1.0], [1.0, 3.0])
        assert not same and unmatched == [3.0]
