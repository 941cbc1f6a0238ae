"""Dense n-qubit pure states and the algebraic product-state criterion.

Basis strings are read left to right: the first character is qubit 1 and
the most significant bit of the integer index, so ``"10"`` is index 2.
Qubit positions are 1-based throughout the package.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

DEFAULT_TOL = 1e-9
# guards the relative comparison when every product in an equation is zero
SCALE_FLOOR = 1e-300


class EntangledStateError(ValueError):
    """Raised when a factorization is requested for an entangled state."""


# -- binary strings ---------------------------------------------------------

def bits_to_index(bits: str) -> int:
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a binary string: {bits!r}")
    return int(bits, 2)


def index_to_bits(index: int, n: int) -> str:
    if not 0 <= index < 2**n:
        raise ValueError(f"index {index} out of range for {n} qubits")
    return format(index, f"0{n}b")


def weight(bits: str) -> int:
    """Number of ones in a binary string."""
    if set(bits) - {"0", "1"}:
        raise ValueError(f"not a binary string: {bits!r}")
    return bits.count("1")


def unit_string(i: int, n: int) -> str:
    """The string ``e_i``: all zeros except a one at (1-based) position i."""
    if not 1 <= i <= n:
        raise ValueError(f"position {i} out of range for {n} qubits")
    return "0" * (i - 1) + "1" + "0" * (n - i)


def ones_positions(bits: str) -> list[int]:
    """1-based positions holding a one, ascending."""
    return [i + 1 for i, ch in enumerate(bits) if ch == "1"]


# -- states -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PureState:
    """Amplitude vector of an n-qubit pure state; normalization is optional."""

    n: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a state needs at least one qubit")
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape != (2**self.n,):
            raise ValueError(
                f"expected {2**self.n} amplitudes for {self.n} qubits, got {amps.size}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> PureState:
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n = int(round(np.log2(amps.size))) if amps.size else 0
        if amps.size == 0 or 2**n != amps.size:
            raise ValueError(f"length {amps.size} is not a power of two")
        return cls(n, amps)

    @classmethod
    def from_dict(cls, n: int, amps: dict[str, complex]) -> PureState:
        vec = np.zeros(2**n, dtype=np.complex128)
        for bits, value in amps.items():
            if len(bits) != n:
                raise ValueError(f"string {bits!r} does not have length {n}")
            vec[bits_to_index(bits)] = value
        return cls(n, vec)

    @classmethod
    def basis(cls, bits: str) -> PureState:
        return cls.from_dict(len(bits), {bits: 1.0})

    def __getitem__(self, bits: str) -> complex:
        if len(bits) != self.n:
            raise ValueError(f"string {bits!r} does not have length {self.n}")
        return complex(self.amplitudes[bits_to_index(bits)])

    def __mul__(self, c) -> PureState:
        return PureState(self.n, self.amplitudes * complex(c))

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> PureState:
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        return PureState(self.n, self.amplitudes / nrm)

    def nonzero(self) -> dict[str, complex]:
        return {index_to_bits(i, self.n): complex(a)
                for i, a in enumerate(self.amplitudes) if a != 0}

    def allclose(self, other: PureState, atol: float = 1e-12) -> bool:
        return self.n == other.n and np.allclose(
            self.amplitudes, other.amplitudes, rtol=0, atol=atol)


def tensor(states) -> PureState:
    """Tensor product, first state leftmost."""
    states = list(states)
    if not states:
        raise ValueError("tensor() needs at least one state")
    amps = reduce(np.kron, (s.amplitudes for s in states))
    return PureState(sum(s.n for s in states), amps)


def xor_relabel(state: PureState, mask: str) -> PureState:
    """Flip the qubits where ``mask`` has a one: new[s] = old[s XOR mask]."""
    if len(mask) != state.n:
        raise ValueError(f"mask length {len(mask)} != {state.n} qubits")
    m = bits_to_index(mask)
    return PureState(state.n, state.amplitudes[np.arange(2**state.n) ^ m])


# -- the criterion ----------------------------------------------------------

def criterion_strings(n: int) -> list[str]:
    """Strings of weight >= 2 in emission order: by weight, then descending index."""
    out = [index_to_bits(i, n) for i in range(2**n) if i.bit_count() >= 2]
    return sorted(out, key=lambda s: (weight(s), -int(s, 2)))


def _equation_terms(amps: np.ndarray, n: int, bits: str) -> tuple[complex, complex]:
    k = weight(bits)
    lhs = amps[0] ** (k - 1) * amps[int(bits, 2)]
    rhs = np.prod([amps[1 << (n - i)] for i in ones_positions(bits)])
    return complex(lhs), complex(rhs)


def criterion_residuals(state: PureState) -> list[tuple[str, complex]]:
    """``a_0^(|alpha|-1) a_alpha - prod_{i in alpha} a_{e_i}`` for every alpha of weight >= 2.

    This is evaluated on the state as given; :func:`is_product` relabels first.
    """
    out = []
    for bits in criterion_strings(state.n):
        lhs, rhs = _equation_terms(state.amplitudes, state.n, bits)
        out.append((bits, lhs - rhs))
    return out


def criterion_equations(n: int) -> list[str]:
    """The criterion equations in symbolic form, e.g. ``a_{000}^{2}a_{111} = ...``."""
    zero = "0" * n
    lines = []
    for bits in criterion_strings(n):
        power = weight(bits) - 1
        base = f"a_{{{zero}}}" + (f"^{{{power}}}" if power > 1 else "")
        rhs = "".join(f"a_{{{unit_string(i, n)}}}" for i in ones_positions(bits))
        lines.append(f"{base}a_{{{bits}}} = {rhs}")
    return lines


@dataclass(frozen=True)
class Factorization:
    """``scalar * (x) (c0_i|0> + c1_i|1>)``, then bit flips by ``flip_mask``."""

    scalar: complex
    factors: tuple[tuple[complex, complex], ...]
    flip_mask: str

    def local_factors(self) -> list[tuple[complex, complex]]:
        """Factors expressed in the original (unflipped) basis."""
        return [(c1, c0) if bit == "1" else (c0, c1)
                for (c0, c1), bit in zip(self.factors, self.flip_mask)]

    def rebuild(self) -> PureState:
        prod = tensor(PureState(1, f) for f in self.factors)
        return xor_relabel(prod * self.scalar, self.flip_mask)


@dataclass(frozen=True)
class ProductVerdict:
    is_product: bool
    flip_mask: str
    # worst |residual| / scale over all equations of the relabeled state
    max_relative_residual: float
    violated: str | None = None
    factorization: Factorization | None = None

    def __bool__(self) -> bool:
        return self.is_product


def _base_mask(state: PureState) -> str:
    mags = np.abs(state.amplitudes)
    if not mags.any():
        raise ValueError("the zero vector is not a state")
    return index_to_bits(int(np.argmax(mags)), state.n)


def is_product(state: PureState, tol: float = DEFAULT_TOL,
               base: str | None = None) -> ProductVerdict:
    """Decide whether ``state`` is a full tensor product of single-qubit states.

    The state is first relabeled by XOR with ``base`` (by default the string
    of its largest amplitude) so the base amplitude ``a_{0...0}`` is nonzero;
    the criterion equations are then compared with a relative tolerance.
    """
    mask = _base_mask(state)
    if np.max(np.abs(state.amplitudes)) <= tol:
        raise ValueError("state has no amplitude above the tolerance")
    if base is not None:
        if len(base) != state.n:
            raise ValueError(f"base string length {len(base)} != {state.n} qubits")
        if state[base] == 0:
            raise ValueError(f"base amplitude a_{base} is zero")
        mask = base
    shifted = xor_relabel(state, mask)
    amps, n = shifted.amplitudes, state.n
    worst, violated = 0.0, None
    for bits in criterion_strings(n):
        lhs, rhs = _equation_terms(amps, n, bits)
        scale = max(abs(lhs), abs(rhs), SCALE_FLOOR)
        ratio = abs(lhs - rhs) / scale
        if ratio > worst:
            worst = ratio
        if ratio > tol and violated is None:
            violated = bits
    if violated is not None:
        return ProductVerdict(False, mask, worst, violated=violated)
    base = complex(amps[0])
    factors = tuple((1 + 0j, complex(amps[1 << (n - i)]) / base) for i in range(1, n + 1))
    return ProductVerdict(True, mask, worst, factorization=Factorization(base, factors, mask))


def factorize(state: PureState, tol: float = DEFAULT_TOL,
              base: str | None = None) -> Factorization:
    """Factors ``(1, a_{e_i}/a_0)`` of the relabeled state and ``k = a_0``."""
    verdict = is_product(state, tol, base)
    if not verdict:
        raise EntangledStateError(
            f"state is entangled (equation for {verdict.violated} fails)")
    return verdict.factorization


def reduced_density_matrix(state: PureState, k: int) -> np.ndarray:
    """2x2 reduced density matrix of qubit ``k`` by explicit partial trace."""
    if not 1 <= k <= state.n:
        raise ValueError(f"qubit {k} out of range for {state.n} qubits")
    psi = state.normalized().amplitudes.reshape(2 ** (k - 1), 2, 2 ** (state.n - k))
    rho = np.zeros((2, 2), dtype=np.complex128)
    for i in range(2):
        for j in range(2):
            rho[i, j] = np.vdot(psi[:, j, :], psi[:, i, :])
    return rho


def purity_oracle(state: PureState, k: int) -> float:
    """``tr(rho_k^2)`` of the single-qubit marginal; 1 iff qubit k factors out."""
    rho = reduced_density_matrix(state, k)
    return float(np.real(np.trace(rho @ rho)))


def is_product_by_purity(state: PureState, tol: float = DEFAULT_TOL) -> bool:
    return all(purity_oracle(state, k) >= 1 - tol for k in range(1, state.n + 1))


# -- samplers used by tests, scans and the CLI ------------------------------

def random_state(n: int, rng: np.random.Generator) -> PureState:
    """Haar-like random state (normalized complex Gaussian)."""
    vec = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return PureState(n, vec / np.linalg.norm(vec))


def random_product_state(n: int, rng: np.random.Generator) -> PureState:
    return tensor(random_state(1, rng) for _ in range(n))
