import itertools

import numpy as np
import pytest

from qtangle.linkinv import (HOPF, UNLINK, Crossing, LinkDiagram, LinkStats, detects_linking,
                             enumerate_diagrams, state_sum_bruteforce, state_sum_closed, stats,
                             total_writhe, z_invariant, z_invariant_direct)
from qtangle.yangbaxter import PhaseMatrix, unentangling_matrix

SYM_I = PhaseMatrix.with_lambda(1, 1, {(0, 1): 1j, (1, 0): 1j})


def naive_state_sum(d, M):
    """Coloring-by-coloring loop, kept deliberately literal."""
    total = 0j
    for a, b in itertools.product(range(M.dim), repeat=2):
        color = {1: a, 2: b}
        w = 1 + 0j
        for c in d.crossings:
            if c.shared:
                entry = M.entries[a, b]
            else:
                entry = M.entries[color[c.comp_a], color[c.comp_a]]
            w *= entry if c.sign > 0 else 1 / entry
        total += w
    return total


class TestDiagram:
    def test_odd_shared_sum_rejected(self):
        with pytest.raises(ValueError):
            LinkDiagram.of((1, 2, 1))

    def test_bad_component(self):
        with pytest.raises(ValueError):
            Crossing(1, 3, 1)

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            Crossing(1, 2, 0)


class TestStats:
    def test_hopf(self):
        st = stats(HOPF)
        assert (st.w1, st.w2, st.lk, st.w) == (0, 0, 1, 2)

    def test_unlink(self):
        st = stats(UNLINK)
        assert (st.w1, st.w2, st.lk, st.w) == (0, 0, 0, 0)

    def test_mixed(self):
        st = stats(LinkDiagram.of((1, 1, 1), (2, 2, -1), (1, 2, -1), (1, 2, -1)))
        assert (st.w1, st.w2, st.lk, st.w) == (1, -1, -1, -2)

    def test_writhe_identity(self):
        for d in enumerate_diagrams(6):
            st = stats(d)
            assert st.w == total_writhe(d) == st.w1 + st.w2 + 2 * st.lk


class TestStateSum:
    def test_empty_diagram(self):
        assert state_sum_bruteforce(UNLINK, PhaseMatrix.random(1, np.random.default_rng(0))) == 4

    def test_hopf_hand_enumeration(self):
        # colorings (0,0), (0,1), (1,0), (1,1): 1 + i^2 + i^2 + 1
        assert state_sum_bruteforce(HOPF, SYM_I) == 0

    def test_all_ones(self):
        for n in (1, 2):
            for d in list(enumerate_diagrams(3))[::7]:
                assert state_sum_bruteforce(d, PhaseMatrix.ones(n)) == 4**n

    def test_closed_form_hopf(self):
        assert state_sum_closed(stats(HOPF), SYM_I) == 0

    def test_unlinked_closed_form(self):
        M = PhaseMatrix.random(2, np.random.default_rng(1))
        for w1, w2 in [(0, 0), (2, -1), (-3, 3)]:
            expected = M.lam ** (w1 + w2) * 16 if w1 + w2 >= 0 else np.conj(M.lam) ** -(w1 + w2) * 16
            assert state_sum_closed(LinkStats(w1, w2, 0), M) == pytest.approx(expected, abs=1e-12)

    def test_bruteforce_matches_literal_loop(self):
        rng = np.random.default_rng(2)
        M = PhaseMatrix.random(2, rng, constant_diagonal=False)
        for d in list(enumerate_diagrams(4))[::5]:
            assert state_sum_bruteforce(d, M) == pytest.approx(naive_state_sum(d, M), abs=1e-12)

    def test_closed_needs_lambda(self):
        M = PhaseMatrix.random(1, np.random.default_rng(0), constant_diagonal=False)
        with pytest.raises(ValueError):
            state_sum_closed(stats(HOPF), M)

    @pytest.mark.parametrize("n", [1, 2])
    def test_closed_matches_bruteforce(self, n):
        rng = np.random.default_rng(10 + n)
        diagrams = list(enumerate_diagrams(5))
        for _ in range(5):
            M = PhaseMatrix.random(n, rng)
            for d in diagrams:
                brute = state_sum_bruteforce(d, M)
                assert abs(state_sum_closed(stats(d), M) - brute) <= 1e-9 * abs(brute) + 1e-12


class TestZ:
    def test_unlink(self):
        assert z_invariant(stats(UNLINK), SYM_I) == 4

    def test_hopf_distinguished(self):
        assert z_invariant(stats(HOPF), SYM_I) == 0
        assert z_invariant_direct(1, SYM_I) == 0

    def test_direct_form(self):
        rng = np.random.default_rng(5)
        for n in (1, 2):
            M = PhaseMatrix.random(n, rng)
            for lk in range(-3, 4):
                assert z_invariant(LinkStats(1, -2, lk), M) == pytest.approx(
                    z_invariant_direct(lk, M), abs=1e-12)

    def test_writhe_independence(self):
        M = PhaseMatrix.random(2, np.random.default_rng(6))
        for lk in (-2, 0, 1, 3):
            ref = z_invariant(LinkStats(0, 0, lk), M)
            for w1 in range(-3, 4):
                for w2 in (-1, 0, 2):
                    assert abs(z_invariant(LinkStats(w1, w2, lk), M) - ref) <= 1e-12


class TestDetection:
    def test_all_ones(self):
        assert not detects_linking(PhaseMatrix.ones(2))

    def test_i_phase(self):
        det = detects_linking(PhaseMatrix.with_lambda(1, 1, {(0, 1): 1j}))
        assert det and det.witness == (0, 1)

    def test_minus_lambda(self):
        lam = np.exp(0.3j)
        off = {(a, b): -lam for a in range(4) for b in range(4) if a != b}
        assert not detects_linking(PhaseMatrix.with_lambda(2, lam, off))

    def test_no_detection_means_constant_z(self):
        rng = np.random.default_rng(7)
        for n in (1, 2):
            for _ in range(10):
                M = unentangling_matrix(n, rng, symmetric=True)
                assert not detects_linking(M)
                for lk in range(-3, 4):
                    assert z_invariant_direct(lk, M) == pytest.approx(4**n, abs=1e-12)


def test_enumeration_covers_patterns():
    diagrams = list(enumerate_diagrams(2))
    assert LinkDiagram() in diagrams
    assert HOPF in diagrams
    assert all(len(d.crossings) <= 2 for d in diagrams)
    # shared-sign parity filters out single shared crossings
    assert all(sum(c.sign for c in d.crossings if c.shared) % 2 == 0 for d in diagrams)
