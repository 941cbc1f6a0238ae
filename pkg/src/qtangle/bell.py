"""CHSH combination for two qubits: fixed observables, closed form, LHV bound, search."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .qstate import PureState

SQRT2 = math.sqrt(2.0)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
NORM_TOL = 1e-9
# the closed form refuses states further than this from unit norm
CLOSED_FORM_NORM_TOL = 1e-6
# (sqrt(2) - 1) / 2
VIOLATION_THRESHOLD = (SQRT2 - 1) / 2


def _check_observable(name: str, m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (2, 2):
        raise ValueError(f"{name} must be 2x2")
    if not np.allclose(m, m.conj().T, rtol=0, atol=1e-12):
        raise ValueError(f"{name} is not Hermitian")
    if not np.allclose(m @ m, np.eye(2), rtol=0, atol=1e-12):
        raise ValueError(f"{name} does not square to the identity")
    return m


@dataclass(frozen=True, eq=False)
class ChshObservables:
    """Q, R act on qubit 1; S, T act on qubit 2."""

    Q: np.ndarray
    R: np.ndarray
    S: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        for name in "QRST":
            object.__setattr__(self, name, _check_observable(name, getattr(self, name)))

    def bell_operator(self) -> np.ndarray:
        """QS + RS + RT - QT on the two-qubit space."""
        k = np.kron
        return k(self.Q, self.S) + k(self.R, self.S) + k(self.R, self.T) - k(self.Q, self.T)


def standard_observables() -> ChshObservables:
    return ChshObservables(
        Q=np.array([[1, 0], [0, -1]]),
        R=np.array([[0, 1], [1, 0]]),
        S=np.array([[-1, -1], [-1, 1]]) / SQRT2,
        T=np.array([[1, -1], [-1, -1]]) / SQRT2,
    )


def plane_observable(theta: float) -> np.ndarray:
    """``cos(theta) Z + sin(theta) X``, eigenvalues +-1."""
    return math.cos(theta) * PAULI_Z + math.sin(theta) * PAULI_X


def observables_from_angles(angles) -> ChshObservables:
    return ChshObservables(*(plane_observable(t) for t in angles))


def _expect(psi: np.ndarray, a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.vdot(psi, np.kron(a, b) @ psi))


def delta(state: PureState, obs: ChshObservables | None = None) -> float:
    """<QS> + <RS> + <RT> - <QT> by direct matrix action."""
    if state.n != 2:
        raise ValueError("CHSH needs a two-qubit state")
    if abs(state.norm() - 1) > NORM_TOL:
        raise ValueError(f"state is not normalized (norm {state.norm():.17g})")
    obs = obs or standard_observables()
    psi = state.amplitudes
    total = (_expect(psi, obs.Q, obs.S) + _expect(psi, obs.R, obs.S)
             + _expect(psi, obs.R, obs.T) - _expect(psi, obs.Q, obs.T))
    if abs(total.imag) > NORM_TOL:
        raise ValueError(f"expectation has imaginary part {total.imag:g}")
    return total.real


@dataclass(frozen=True)
class RealTwoQubitState:
    """a|00> + b|01> + c|10> + d|11> with real, normalized coefficients."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        err = abs(self.a**2 + self.b**2 + self.c**2 + self.d**2 - 1)
        if err > CLOSED_FORM_NORM_TOL:
            raise ValueError(f"coefficients are not normalized (|norm^2 - 1| = {err:g})")

    @classmethod
    def from_state(cls, state: PureState) -> RealTwoQubitState:
        if state.n != 2 or np.max(np.abs(state.amplitudes.imag)) > 0:
            raise ValueError("need a two-qubit state with real amplitudes")
        return cls(*(float(x) for x in state.amplitudes.real))

    @classmethod
    def random(cls, rng: np.random.Generator) -> RealTwoQubitState:
        v = rng.normal(size=4)
        return cls(*(v / np.linalg.norm(v)))

    def to_state(self) -> PureState:
        return PureState(2, [self.a, self.b, self.c, self.d])

    @property
    def determinant(self) -> float:
        return self.a * self.d - self.b * self.c


def delta_closed_form(s: RealTwoQubitState) -> float:
    """(2 - 4(a+d)^2 + 4(ad - bc)) / sqrt(2)."""
    return (2 - 4 * (s.a + s.d) ** 2 + 4 * s.determinant) / SQRT2


def violation_margin(s: RealTwoQubitState) -> float:
    """(ad - bc) - (a+d)^2 - (sqrt(2)-1)/2; positive exactly when Delta > 2."""
    return s.determinant - (s.a + s.d) ** 2 - VIOLATION_THRESHOLD


def violates(s: RealTwoQubitState) -> bool:
    return violation_margin(s) > 0


@dataclass(frozen=True)
class ClassicalCertificate:
    bound: int
    # (Q, R, S, T, QS + RS + RT - QT)
    rows: tuple[tuple[int, int, int, int, int], ...]

    def format_table(self) -> str:
        lines = [f"{'Q':>3} {'R':>3} {'S':>3} {'T':>3} {'QS+RS+RT-QT':>12}"]
        for row in self.rows:
            lines.append(" ".join(f"{v:>3}" for v in row[:4]) + f" {row[4]:>12}")
        lines.append(f"max={self.bound}")
        return "\n".join(lines)


def classical_bound() -> ClassicalCertificate:
    rows = []
    for q, r, s, t in itertools.product((1, -1), repeat=4):
        value = q * s + r * s + r * t - q * t
        if value not in (2, -2):
            raise AssertionError(f"assignment {(q, r, s, t)} gives {value}")
        rows.append((q, r, s, t, value))
    return ClassicalCertificate(max(r[4] for r in rows), tuple(rows))


# -- operator search --------------------------------------------------------

def correlation_matrix(state: PureState) -> np.ndarray:
    """T[i, j] = <P_i (x) P_j> for P in (Z, X)."""
    psi = state.amplitudes
    paulis = (PAULI_Z, PAULI_X)
    return np.array([[_expect(psi, p, q).real for q in paulis] for p in paulis])


def _delta_at(corr: np.ndarray, q, r, s, t) -> float:
    def e(x, y):
        u = (math.cos(x), math.sin(x))
        v = (math.cos(y), math.sin(y))
        return (u[0] * (corr[0, 0] * v[0] + corr[0, 1] * v[1])
                + u[1] * (corr[1, 0] * v[0] + corr[1, 1] * v[1]))
    return e(q, s) + e(r, s) + e(r, t) - e(q, t)


def _grid_search(corr: np.ndarray, steps: int) -> tuple[float, tuple[float, ...]]:
    """Exact maximum over the angle grid, ties broken to the lowest (q, r, s, t).

    For fixed (q, r) the value splits as <(Q+R) S> + <(R-Q) T>, so S and T
    are maximized independently.
    """
    th = np.arange(steps) * (2 * np.pi / steps)
    u = np.stack([np.cos(th), np.sin(th)])          # (2, steps)
    proj = u.T @ corr                                # row i: u(theta_i)^T corr
    e = proj @ u                                     # e[i, j] = E(theta_i, theta_j)
    plus = e[:, None, :] + e[None, :, :]             # [q, r, s] -> E(q,s)+E(r,s)
    minus = e[None, :, :] - e[:, None, :]            # [q, r, t] -> E(r,t)-E(q,t)
    best_s = plus.argmax(axis=2)
    best_t = minus.argmax(axis=2)
    value = plus.max(axis=2) + minus.max(axis=2)
    qi, ri = np.unravel_index(int(value.argmax()), value.shape)
    angles = (th[qi], th[ri], th[best_s[qi, ri]], th[best_t[qi, ri]])
    return float(value[qi, ri]), tuple(float(a) for a in angles)


def _golden_section(f, lo: float, hi: float, iters: int = 60) -> float:
    inv = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - inv * (b - a), a + inv * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    return c if fc >= fd else d


@dataclass(frozen=True)
class ChshMaximum:
    delta_max: float
    angles: tuple[float, float, float, float]
    # best value after the grid and after each refinement sweep
    history: tuple[float, ...]

    def observables(self) -> ChshObservables:
        return observables_from_angles(self.angles)


def maximize_chsh(state: PureState, grid_steps: int = 128, sweeps: int = 3) -> ChshMaximum:
    """Maximize Delta over observables cos(t) Z + sin(t) X, one angle per slot.

    Grid search with step ``2*pi/grid_steps`` followed by golden-section
    refinement of each angle in turn within one grid step; a move is kept
    only if it improves the value.
    """
    if state.n != 2:
        raise ValueError("CHSH needs a two-qubit state")
    if abs(state.norm() - 1) > NORM_TOL:
        raise ValueError("state is not normalized")
    corr = correlation_matrix(state)
    best, angles = _grid_search(corr, grid_steps)
    best = _delta_at(corr, *angles)
    history = [best]
    step = 2 * np.pi / grid_steps
    angles = list(angles)
    for _ in range(sweeps):
        for i in range(4):
            def f(x, i=i):
                trial = angles.copy()
                trial[i] = x
                return _delta_at(corr, *trial)
            x = _golden_section(f, angles[i] - step, angles[i] + step)
            val = f(x)
            if val > best:
                best, angles[i] = val, x
        history.append(best)
    angles = [float(a % (2 * np.pi)) for a in angles]
    return ChshMaximum(delta(state, observables_from_angles(angles)), tuple(angles), tuple(history))


@dataclass(frozen=True)
class ViolationCensus:
    trials: int
    violations: int
    entangled: int
    max_delta: float


def violation_census(trials: int, seed: int) -> ViolationCensus:
    """Random normalized real states against the fixed observables."""
    rng = np.random.default_rng(seed)
    violations = entangled = 0
    max_delta = -math.inf
    for _ in range(trials):
        s = RealTwoQubitState.random(rng)
        violations += violates(s)
        entangled += abs(s.determinant) > 1e-12
        max_delta = max(max_delta, delta_closed_form(s))
    return ViolationCensus(trials, violations, entangled, max_delta)
