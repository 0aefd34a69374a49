import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgs.coupling import (FREE, CouplingClass, GpiCouplingA, GpiCouplingB, a_to_b, a_to_unitary,
                          b_to_a, classify, jump_matrix, unitary_residual)
from qgs.errors import DegenerateParametrization, SeparatingCoupling

SEED = 20240611
TOL = 1e-12
N_RANDOM = 200

finite = st.floats(-3.0, 3.0, allow_nan=False)
nonzero_beta = st.tuples(st.sampled_from([-1.0, 1.0]), st.floats(0.1, 3.0)).map(
    lambda p: p[0] * p[1])


def jump_from_conditions(c: GpiCouplingA) -> np.ndarray:
    """Solve the boundary conditions for ``(y+, y+')`` column by column."""
    A, B = c.condition_matrices()
    lhs = np.column_stack([A[:, 0], B[:, 0]])
    out = np.zeros((2, 2), dtype=complex)
    for j, (ym, ydm) in enumerate([(1.0, 0.0), (0.0, 1.0)]):
        rhs = -A[:, 1] * ym + B[:, 1] * ydm
        out[:, j] = np.linalg.solve(lhs, rhs)
    return out


class TestBForm:
    def test_known_values(self):
        B = a_to_b(GpiCouplingA(0, 2, 0))
        assert (B.a, B.d, B.c) == pytest.approx((0.5, 0.5, -0.5), abs=TOL)
        B = a_to_b(GpiCouplingA(0, 1, 0))
        assert (B.a, B.d, B.c) == pytest.approx((1.0, 1.0, -1.0), abs=TOL)

    def test_delta_has_no_b_form(self):
        with pytest.raises(DegenerateParametrization):
            a_to_b(GpiCouplingA(1, 0, 0))

    def test_inverse_known_value(self):
        A = b_to_a(GpiCouplingB(0.5, 0.5, -0.5))
        assert (A.alpha, A.beta, A.gamma) == pytest.approx((0.0, 2.0, 0.0), abs=TOL)

    def test_inverse_degenerate(self):
        with pytest.raises(DegenerateParametrization):
            b_to_a(GpiCouplingB(1, 1, 1))

    @settings(max_examples=200, deadline=None)
    @given(finite, nonzero_beta, finite, finite)
    def test_round_trip_a(self, alpha, beta, gr, gi):
        c = GpiCouplingA(alpha, beta, complex(gr, gi))
        back = b_to_a(a_to_b(c))
        scale = max(1.0, abs(alpha), abs(beta), abs(c.gamma))
        assert abs(back.alpha - alpha) < TOL * scale ** 3
        assert abs(back.beta - beta) < TOL * scale ** 3
        assert abs(back.gamma - c.gamma) < TOL * scale ** 3

    def test_round_trip_b(self):
        rng = np.random.default_rng(SEED)
        done = 0
        while done < N_RANDOM:
            a, d = rng.uniform(-2, 2, 2)
            cb = complex(*rng.uniform(-2, 2, 2))
            if abs(a + d - 2 * cb.real) < 0.1:
                continue
            B = a_to_b(b_to_a(GpiCouplingB(a, d, cb)))
            assert np.allclose([B.a, B.d, B.c], [a, d, cb], atol=1e-11, rtol=0)
            done += 1


class TestUnitaryForm:
    def test_free_coupling(self):
        U = a_to_unitary(FREE)
        assert unitary_residual(U.matrix(), FREE) < 1e-12

    def test_delta_coupling(self):
        c = GpiCouplingA(2, 0, 0)
        U = a_to_unitary(c)
        assert unitary_residual(U.matrix(), c) < 1e-12

    @settings(max_examples=200, deadline=None)
    @given(finite, finite, finite, finite)
    def test_normalized_and_consistent(self, alpha, beta, gr, gi):
        c = GpiCouplingA(alpha, beta, complex(gr, gi))
        U = a_to_unitary(c)
        assert abs(abs(U.u1) ** 2 + abs(U.u2) ** 2 - 1) < 1e-12
        assert 0 <= U.xi < math.pi
        M = U.matrix()
        assert np.allclose(M @ M.conj().T, np.eye(2), atol=1e-12)
        assert unitary_residual(M, c) < 1e-9


class TestClassify:
    @pytest.mark.parametrize("c, expected", [
        (GpiCouplingA(3, 0, 0), CouplingClass.Delta),
        (GpiCouplingA(0, 2, 0), CouplingClass.DeltaPrime),
        (GpiCouplingA(0, 0, 2), CouplingClass.Separating),
        (GpiCouplingA(1, 1, 1j), CouplingClass.Generic),
        (FREE, CouplingClass.Delta),
    ])
    def test_examples(self, c, expected):
        assert classify(c) is expected


class TestJumpMatrix:
    def test_free_is_identity(self):
        assert np.allclose(jump_matrix(FREE), np.eye(2), atol=TOL)

    def test_delta_prime(self):
        assert np.allclose(jump_matrix(GpiCouplingA(0, 1.7, 0)), [[1, 1.7], [0, 1]], atol=TOL)

    def test_real_gamma(self):
        assert np.allclose(jump_matrix(GpiCouplingA(0, 0, 2 / 3)), np.diag([0.5, 2.0]), atol=TOL)

    def test_separating_raises(self):
        with pytest.raises(SeparatingCoupling):
            jump_matrix(GpiCouplingA(0, 0, 2))

    def test_matches_boundary_conditions(self):
        rng = np.random.default_rng(SEED + 1)
        for _ in range(N_RANDOM):
            c = GpiCouplingA(*rng.uniform(-3, 3, 2), complex(*rng.uniform(-3, 3, 2)))
            assert np.allclose(jump_matrix(c), jump_from_conditions(c), atol=1e-10)

    @settings(max_examples=200, deadline=None)
    @given(finite, finite, finite, finite)
    def test_unimodular_up_to_phase(self, alpha, beta, gr, gi):
        c = GpiCouplingA(alpha, beta, complex(gr, gi))
        if abs(4 - c.det_a) < 1e-3 and abs(gi) < 1e-3:
            return
        d = np.linalg.det(jump_matrix(c))
        assert abs(abs(d) - 1) < 1e-9
        D = complex(4 - c.det_a, -4 * gi)
        assert abs(d - cmath.exp(-2j * cmath.phase(D))) < 1e-9


class TestJson:
    def test_round_trip(self):
        c = GpiCouplingA(0.3, -1.2, 0.4 - 0.7j)
        assert GpiCouplingA.from_json(c.to_json()) == c
