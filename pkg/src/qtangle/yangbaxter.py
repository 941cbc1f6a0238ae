"""Phased-swap solutions of the Yang-Baxter equation and their braid operators.

A phase matrix ``M`` (entries on the unit circle, rows and columns indexed
by binary strings of length n) defines ``R|a, b> = M[a, b] |b, a>`` on
``W (x) W`` with ``W`` of dimension ``2**n``.  ``|a, b>`` has index
``a * 2**n + b``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .qstate import DEFAULT_TOL, PureState, is_product

UNIT_TOL = 1e-12
MAX_BRAID_DIM = 2**12


@dataclass(frozen=True, eq=False)
class PhaseMatrix:
    n: int
    entries: np.ndarray = field(repr=False)
    diagonal_lambda: complex | None = None

    def __post_init__(self):
        d = 2**self.n
        m = np.array(self.entries, dtype=np.complex128)
        if m.shape != (d, d):
            raise ValueError(f"phase matrix for n={self.n} must be {d}x{d}, got {m.shape}")
        if np.max(np.abs(np.abs(m) - 1)) > UNIT_TOL:
            raise ValueError("phase matrix entries must lie on the unit circle")
        if self.diagonal_lambda is not None:
            lam = complex(self.diagonal_lambda)
            if np.max(np.abs(np.diag(m) - lam)) > UNIT_TOL:
                raise ValueError("diagonal entries differ from lambda")
            object.__setattr__(self, "diagonal_lambda", lam)
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return 2**self.n

    @property
    def lam(self) -> complex:
        if self.diagonal_lambda is None:
            raise ValueError("phase matrix has no constant diagonal lambda")
        return self.diagonal_lambda

    def __getitem__(self, key) -> complex:
        a, b = key
        if isinstance(a, str):
            a, b = int(a, 2), int(b, 2)
        return complex(self.entries[a, b])

    @property
    def is_symmetric(self) -> bool:
        return bool(np.allclose(self.entries, self.entries.T, rtol=0, atol=UNIT_TOL))

    @classmethod
    def ones(cls, n: int) -> PhaseMatrix:
        return cls(n, np.ones((2**n, 2**n)), 1 + 0j)

    @classmethod
    def from_angles(cls, n: int, angles: np.ndarray, lam: complex | None = None) -> PhaseMatrix:
        m = np.exp(1j * np.asarray(angles, dtype=float))
        if lam is not None:
            np.fill_diagonal(m, lam)
        return cls(n, m, lam)

    @classmethod
    def with_lambda(cls, n: int, lam: complex, off: dict[tuple[int, int], complex]) -> PhaseMatrix:
        """Constant diagonal ``lam``; listed off-diagonal entries, the rest 1."""
        m = np.ones((2**n, 2**n), dtype=np.complex128)
        np.fill_diagonal(m, lam)
        for (a, b), v in off.items():
            if a == b:
                raise ValueError("diagonal is fixed by lambda")
            m[a, b] = v
        return cls(n, m, lam)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, constant_diagonal: bool = True,
               symmetric: bool = False) -> PhaseMatrix:
        d = 2**n
        angles = rng.uniform(0, 2 * np.pi, size=(d, d))
        if symmetric:
            angles = np.triu(angles) + np.triu(angles, 1).T
        lam = np.exp(1j * rng.uniform(0, 2 * np.pi)) if constant_diagonal else None
        return cls.from_angles(n, angles, lam)


def m_row(M: PhaseMatrix, a: int) -> complex:
    """``m_{a,0}``: product of ``M[e_i, 0]`` over the ones of ``a``."""
    return _unit_product(M, a, column=True)


def m_col(M: PhaseMatrix, b: int) -> complex:
    """``m_{0,b}``: product of ``M[0, e_j]`` over the ones of ``b``."""
    return _unit_product(M, b, column=False)


def _unit_product(M: PhaseMatrix, x: int, column: bool) -> complex:
    out = 1 + 0j
    for i in range(M.n):
        e = 1 << i
        if x & e:
            out *= M.entries[e, 0] if column else M.entries[0, e]
    return complex(out)


def build_R(M: PhaseMatrix) -> np.ndarray:
    d = M.dim
    a, b = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    R = np.zeros((d * d, d * d), dtype=np.complex128)
    R[(b * d + a).ravel(), (a * d + b).ravel()] = M.entries.ravel()
    return R


def ybe_deviation(R: np.ndarray, d: int) -> float:
    """max |(R x I)(I x R)(R x I) - (I x R)(R x I)(I x R)| for R on C^d (x) C^d."""
    eye = np.eye(d)
    r1 = np.kron(R, eye)
    r2 = np.kron(eye, R)
    return float(np.max(np.abs(r1 @ r2 @ r1 - r2 @ r1 @ r2)))


@dataclass(frozen=True)
class YbeResult:
    ok: bool
    deviation: float

    def __bool__(self):
        return self.ok


def verify_ybe(M: PhaseMatrix, tol: float = UNIT_TOL) -> YbeResult:
    dev = ybe_deviation(build_R(M), M.dim)
    return YbeResult(dev <= tol, dev)


@dataclass(frozen=True)
class BraidWord:
    """Letters ``(i, sign)`` for the generator sigma_i (sign -1: its inverse)."""

    strands: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.strands < 2:
            raise ValueError("a braid needs at least two strands")
        letters = tuple((int(i), int(s)) for i, s in self.letters)
        for i, s in letters:
            if not 1 <= i < self.strands:
                raise ValueError(f"generator {i} out of range for {self.strands} strands")
            if s not in (1, -1):
                raise ValueError(f"sign must be +1 or -1, got {s}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, strands: int, text: str) -> BraidWord:
        """``"1 -2 1"`` is sigma_1 sigma_2^-1 sigma_1."""
        letters = []
        for tok in text.replace(",", " ").split():
            g = int(tok)
            if g == 0:
                raise ValueError("generator 0 does not exist")
            letters.append((abs(g), 1 if g > 0 else -1))
        return cls(strands, tuple(letters))

    def inverse(self) -> BraidWord:
        return BraidWord(self.strands, tuple((i, -s) for i, s in reversed(self.letters)))

    def __str__(self):
        return " ".join(str(i * s) for i, s in self.letters)


def braid_operator(word: BraidWord, M: PhaseMatrix) -> np.ndarray:
    """Unitary on ``W^(x)k``; the leftmost letter acts first."""
    d, k = M.dim, word.strands
    total = d**k
    if total > MAX_BRAID_DIM:
        raise ValueError(f"braid operator dimension {total} exceeds {MAX_BRAID_DIM}")
    R = build_R(M)
    Rinv = R.conj().T
    out = np.eye(total, dtype=np.complex128)
    for i, s in word.letters:
        gate = reduce(np.kron, [np.eye(d ** (i - 1)), R if s > 0 else Rinv, np.eye(d ** (k - i - 1))])
        out = gate @ out
    return out


def uniform_state(n: int) -> PureState:
    """Unnormalized sum of all ``|a, b>``, as a state on 2n qubits."""
    return PureState(2 * n, np.ones(4**n))


def r_phi(M: PhaseMatrix) -> PureState:
    """``R`` applied to the uniform state by explicit matrix action."""
    return PureState(2 * M.n, build_R(M) @ uniform_state(M.n).amplitudes)


def r_entangles_uniform(M: PhaseMatrix, tol: float = DEFAULT_TOL) -> bool:
    """Brute force: run the product criterion on ``R phi``."""
    if M.diagonal_lambda is None:
        raise ValueError("the uniform-state analysis needs a constant diagonal")
    return not is_product(r_phi(M), tol)


def closed_form_residuals(M: PhaseMatrix) -> np.ndarray:
    """``lam^(|a|+|b|-1) M[a,b] - m_{a,0} m_{0,b}`` for all pairs (a, b)."""
    lam, d = M.lam, M.dim
    out = np.empty((d, d), dtype=np.complex128)
    rows = [m_row(M, a) for a in range(d)]
    cols = [m_col(M, b) for b in range(d)]
    for a in range(d):
        for b in range(d):
            p = a.bit_count() + b.bit_count() - 1
            lhs = (lam**p if p >= 0 else lam.conjugate() ** (-p)) * M.entries[a, b]
            out[a, b] = lhs - rows[a] * cols[b]
    return out


def r_unentangled_closed_form(M: PhaseMatrix, tol: float = DEFAULT_TOL) -> bool:
    return bool(np.max(np.abs(closed_form_residuals(M))) <= tol)


def ratio_condition(M: PhaseMatrix, a: int | str, b: int | str) -> complex:
    """``M[a,b]^2/lam^2 - (m_{a,0}/m_{0,a}) (m_{0,b}/m_{b,0})``."""
    if isinstance(a, str):
        a, b = int(a, 2), int(b, 2)
    lam = M.lam
    return complex(M.entries[a, b] ** 2 / lam**2
                   - (m_row(M, a) / m_col(M, a)) * (m_col(M, b) / m_row(M, b)))


def unentangling_matrix(n: int, rng: np.random.Generator, symmetric: bool = False) -> PhaseMatrix:
    """A random constant-diagonal M for which ``R phi`` is a product state.

    Chooses ``M[e_i,0]`` freely, forces ``M[0,e_i] M[e_i,0] = lam^2`` and
    fills the rest from the closed-form equations.  With ``symmetric`` the
    unit-string entries are ``+-lam``.
    """
    lam = complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))
    d = 2**n
    if symmetric:
        row = lam * rng.choice([-1.0, 1.0], size=n)
        col = row.copy()
    else:
        row = np.exp(1j * rng.uniform(0, 2 * np.pi, size=n))
        col = lam**2 / row
    m = np.empty((d, d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            ra = np.prod([row[n - 1 - i] for i in range(n) if a >> i & 1])
            cb = np.prod([col[n - 1 - i] for i in range(n) if b >> i & 1])
            p = a.bit_count() + b.bit_count() - 1
            m[a, b] = ra * cb * (lam.conjugate() ** p if p >= 0 else lam)
    np.fill_diagonal(m, lam)
    return PhaseMatrix(n, m, lam)

