import numpy as np
import pytest

from qtangle.linkinv import detects_linking
from qtangle.yangbaxter import (BraidWord, PhaseMatrix, braid_operator, build_R,
                                closed_form_residuals, r_entangles_uniform, r_phi,
                                r_unentangled_closed_form, ratio_condition, unentangling_matrix,
                                uniform_state, verify_ybe, ybe_deviation)

SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
SYM_I = PhaseMatrix.with_lambda(1, 1, {(0, 1): 1j, (1, 0): 1j})
ANTI_I = PhaseMatrix.with_lambda(1, 1, {(0, 1): 1j, (1, 0): -1j})


def ket(d, a, b):
    v = np.zeros(d * d, dtype=complex)
    v[a * d + b] = 1
    return v


class TestPhaseMatrix:
    def test_unit_circle_enforced(self):
        with pytest.raises(ValueError):
            PhaseMatrix(1, [[1, 2], [1, 1]])

    def test_constant_diagonal_enforced(self):
        with pytest.raises(ValueError):
            PhaseMatrix(1, [[1, 1], [1, -1]], diagonal_lambda=1)

    def test_shape(self):
        with pytest.raises(ValueError):
            PhaseMatrix(2, np.ones((2, 2)))

    def test_random_symmetric(self):
        M = PhaseMatrix.random(2, np.random.default_rng(0), symmetric=True)
        assert M.is_symmetric and M.diagonal_lambda is not None


class TestBuildR:
    def test_all_ones_is_swap(self):
        assert np.array_equal(build_R(PhaseMatrix.ones(1)), SWAP)

    def test_definition_on_basis(self):
        R = build_R(PhaseMatrix.with_lambda(1, 1, {(0, 1): 1j}))
        assert np.allclose(R @ ket(2, 0, 1), 1j * ket(2, 1, 0))

    @pytest.mark.parametrize("n", [1, 2])
    def test_against_basis_action(self, n):
        M = PhaseMatrix.random(n, np.random.default_rng(n), constant_diagonal=False)
        R, d = build_R(M), M.dim
        for a in range(d):
            for b in range(d):
                assert np.array_equal(R @ ket(d, a, b), M.entries[a, b] * ket(d, b, a))

    @pytest.mark.parametrize("n", [1, 2])
    def test_unitary(self, n):
        rng = np.random.default_rng(7)
        for _ in range(20):
            R = build_R(PhaseMatrix.random(n, rng, constant_diagonal=False))
            assert np.max(np.abs(R.conj().T @ R - np.eye(R.shape[0]))) <= 1e-12
            assert all(np.count_nonzero(row) == 1 for row in R)


class TestYbe:
    def test_swap(self):
        assert verify_ybe(PhaseMatrix.ones(1)).deviation == 0

    @pytest.mark.parametrize("n", [1, 2])
    def test_random_phase_matrices(self, n):
        rng = np.random.default_rng(100 + n)
        for _ in range(25):
            res = verify_ybe(PhaseMatrix.random(n, rng, constant_diagonal=False))
            assert res and res.deviation <= 1e-12

    def test_negative_control(self):
        # not a phased swap: row 0 mixes |00> and |11>
        R = build_R(PhaseMatrix.ones(1)).astype(complex)
        R[0, 0], R[0, 3] = 0.6, 0.8
        assert ybe_deviation(R, 2) > 1e-3

    def test_non_phase_entries_rejected_before_ybe(self):
        with pytest.raises(ValueError):
            PhaseMatrix(1, [[1, 0.5], [1, 1]])


class TestBraids:
    def test_empty_word(self):
        M = PhaseMatrix.random(1, np.random.default_rng(0))
        assert np.array_equal(braid_operator(BraidWord(3), M), np.eye(8))

    def test_inverse_pair(self):
        M = PhaseMatrix.random(1, np.random.default_rng(1))
        U = braid_operator(BraidWord.parse(2, "1 -1"), M)
        assert np.max(np.abs(U - np.eye(4))) <= 1e-12

    def test_word_and_inverse(self):
        M = PhaseMatrix.random(1, np.random.default_rng(5))
        w = BraidWord.parse(4, "1 -2 3 2 2 -1")
        U = braid_operator(w, M) @ braid_operator(w.inverse(), M)
        assert np.max(np.abs(U - np.eye(16))) <= 1e-12

    def test_leftmost_letter_acts_first(self):
        M = PhaseMatrix.random(1, np.random.default_rng(2), constant_diagonal=False)
        s1 = braid_operator(BraidWord.parse(3, "1"), M)
        s2 = braid_operator(BraidWord.parse(3, "2"), M)
        assert np.allclose(braid_operator(BraidWord.parse(3, "1 2"), M), s2 @ s1)

    def test_braid_relations(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            M = PhaseMatrix.random(1, rng, constant_diagonal=False)
            for k in (3, 4):
                for i in range(1, k - 1):
                    lhs = braid_operator(BraidWord(k, ((i, 1), (i + 1, 1), (i, 1))), M)
                    rhs = braid_operator(BraidWord(k, ((i + 1, 1), (i, 1), (i + 1, 1))), M)
                    assert np.max(np.abs(lhs - rhs)) <= 1e-12
            far = braid_operator(BraidWord.parse(4, "1 3"), M)
            assert np.max(np.abs(far - braid_operator(BraidWord.parse(4, "3 1"), M))) <= 1e-12

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            braid_operator(BraidWord(7, ()), PhaseMatrix.ones(2))

    @pytest.mark.parametrize("text", ["0", "3"])
    def test_bad_letters(self, text):
        with pytest.raises(ValueError):
            BraidWord.parse(3, text)


class TestUniformState:
    def test_uniform(self):
        assert uniform_state(1).n == 2 and np.array_equal(uniform_state(1).amplitudes, np.ones(4))

    def test_r_phi_coefficients(self):
        # R phi = sum M[b, a] |a, b>
        M = PhaseMatrix.random(2, np.random.default_rng(4))
        amps = r_phi(M).amplitudes.reshape(4, 4)
        assert np.allclose(amps, M.entries.T)

    def test_swap_does_not_entangle(self):
        assert not r_entangles_uniform(PhaseMatrix.ones(1))
        assert r_unentangled_closed_form(PhaseMatrix.ones(2))

    def test_symmetric_i_entangles(self):
        # lam M[1,1] - M[1,0] M[0,1] = 1 - (i)(i) = 2
        assert r_entangles_uniform(SYM_I)
        assert not r_unentangled_closed_form(SYM_I)
        assert closed_form_residuals(SYM_I)[1, 1] == pytest.approx(2)

    def test_antisymmetric_i_does_not(self):
        assert not r_entangles_uniform(ANTI_I)
        assert r_unentangled_closed_form(ANTI_I)

    def test_closed_form_needs_lambda(self):
        M = PhaseMatrix.random(1, np.random.default_rng(0), constant_diagonal=False)
        with pytest.raises(ValueError):
            r_unentangled_closed_form(M)
        with pytest.raises(ValueError):
            r_entangles_uniform(M)


class TestRatioCondition:
    def test_all_ones(self):
        M = PhaseMatrix.ones(2)
        assert all(ratio_condition(M, a, b) == 0 for a in range(4) for b in range(4))

    def test_symmetric_i_entry(self):
        # M[1,0]^2 / 1 - (m_10/m_01)(m_00/m_00) = -1 - (i/i)(1) = -2
        assert ratio_condition(SYM_I, "1", "0") == pytest.approx(-2)

    def test_bit_string_and_index_agree(self):
        M = PhaseMatrix.random(2, np.random.default_rng(8))
        assert ratio_condition(M, "10", "01") == ratio_condition(M, 2, 1)

    @pytest.mark.parametrize("n", [1, 2])
    def test_implied_by_closed_form(self, n):
        rng = np.random.default_rng(30 + n)
        for _ in range(50):
            M = unentangling_matrix(n, rng)
            assert r_unentangled_closed_form(M)
            for a in range(M.dim):
                for b in range(M.dim):
                    assert abs(ratio_condition(M, a, b)) <= 1e-12

    @pytest.mark.parametrize("n", [1, 2])
    def test_symmetric_unentangled_means_no_detection(self, n):
        rng = np.random.default_rng(40 + n)
        for _ in range(50):
            M = unentangling_matrix(n, rng, symmetric=True)
            assert M.is_symmetric and r_unentangled_closed_form(M)
            off = ~np.eye(M.dim, dtype=bool)
            assert np.allclose(M.entries[off] ** 2, M.lam**2, atol=1e-12)
            assert not detects_linking(M)


@pytest.mark.parametrize("n", [1, 2])
def test_closed_form_agrees_with_brute_force(n):
    rng = np.random.default_rng(50 + n)
    for t in range(200):
        if t % 3 == 0:
            M = PhaseMatrix.random(n, rng)
        else:
            M = unentangling_matrix(n, rng, symmetric=t % 3 == 2)
        assert r_unentangled_closed_form(M) == (not r_entangles_uniform(M))


def test_unentangling_matrix_shape():
    M = unentangling_matrix(2, np.random.default_rng(0))
    assert M.dim == 4 and np.allclose(np.diag(M.entries), M.lam)


def test_symmetric_sign_matrix_entangles_without_detecting():
    # n=2, lam=1, M[01,10] = M[10,01] = -1: every M^2 equals lam^2, yet
    # lam M[01,10] = -1 != M[01,00] M[00,10] = 1, so R phi is entangled
    M = PhaseMatrix.with_lambda(2, 1, {(1, 2): -1, (2, 1): -1})
    assert M.is_symmetric
    assert r_entangles_uniform(M)
    assert not detects_linking(M)
