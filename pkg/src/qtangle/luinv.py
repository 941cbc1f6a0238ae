"""Local unitaries and the 2x2 amplitude minors they leave invariant in modulus."""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .qstate import (DEFAULT_TOL, SCALE_FLOOR, PureState, index_to_bits, is_product,
                     is_product_by_purity, random_product_state, random_state)


@dataclass(frozen=True)
class LocalUnitary:
    """``exp(i*theta/2) * [[lam, mu], [-conj(mu), conj(lam)]]`` with |lam|^2 + |mu|^2 = 1.

    The determinant is ``exp(i*theta)``.
    """

    lam: complex
    mu: complex
    theta: float = 0.0

    def __post_init__(self):
        if abs(abs(self.lam) ** 2 + abs(self.mu) ** 2 - 1) > 1e-12:
            raise ValueError("|lam|^2 + |mu|^2 must equal 1")

    @classmethod
    def identity(cls) -> LocalUnitary:
        return cls(1 + 0j, 0j, 0.0)

    @classmethod
    def random(cls, rng: np.random.Generator) -> LocalUnitary:
        v = rng.normal(size=4)
        v /= np.linalg.norm(v)
        return cls(complex(v[0], v[1]), complex(v[2], v[3]), float(rng.uniform(0, 2 * np.pi)))

    def matrix(self) -> np.ndarray:
        lam, mu = complex(self.lam), complex(self.mu)
        core = np.array([[lam, mu], [-mu.conjugate(), lam.conjugate()]])
        return np.exp(0.5j * self.theta) * core


def apply_single_qubit(state: PureState, k: int, u: LocalUnitary | np.ndarray) -> PureState:
    """Apply a 2x2 unitary at qubit ``k``: (a'_{x0y}, a'_{x1y}) = U (a_{x0y}, a_{x1y})."""
    if not 1 <= k <= state.n:
        raise ValueError(f"qubit {k} out of range for {state.n} qubits")
    mat = u.matrix() if isinstance(u, LocalUnitary) else np.asarray(u, dtype=np.complex128)
    psi = state.amplitudes.reshape(2 ** (k - 1), 2, 2 ** (state.n - k))
    out = np.einsum("ij,ajb->aib", mat, psi)
    return PureState(state.n, out.reshape(-1))


@dataclass(frozen=True)
class MinorSpec:
    """Minor at qubit ``position`` between contexts (alpha, beta) and (gamma, delta).

    ``context_a = (alpha, beta)`` are the strings left and right of the position.
    """

    position: int
    context_a: tuple[str, str]
    context_b: tuple[str, str]

    def validate(self, n: int) -> None:
        k = self.position
        if not 1 <= k <= n:
            raise ValueError(f"position {k} out of range for {n} qubits")
        for left, right in (self.context_a, self.context_b):
            if len(left) != k - 1 or len(right) != n - k:
                raise ValueError(f"context ({left!r}, {right!r}) does not fit position {k} of {n}")
            if set(left + right) - {"0", "1"}:
                raise ValueError(f"context ({left!r}, {right!r}) is not binary")
        if self.context_a == self.context_b:
            raise ValueError("the two contexts of a minor must differ")

    @classmethod
    def from_contexts(cls, n: int, k: int, ctx_a: int, ctx_b: int) -> MinorSpec:
        """Build from integer contexts, read as the (n-1)-bit string alpha||beta."""
        def split(c):
            s = index_to_bits(c, n - 1) if n > 1 else ""
            return (s[: k - 1], s[k - 1:])
        return cls(k, split(ctx_a), split(ctx_b))


def _amp(state: PureState, left: str, bit: str, right: str) -> complex:
    return complex(state.amplitudes[int(left + bit + right, 2)])


def minor(state: PureState, spec: MinorSpec) -> complex:
    """``a_{alpha 0 beta} a_{gamma 1 delta} - a_{gamma 0 delta} a_{alpha 1 beta}``."""
    spec.validate(state.n)
    (al, be), (ga, de) = spec.context_a, spec.context_b
    return (_amp(state, al, "0", be) * _amp(state, ga, "1", de)
            - _amp(state, ga, "0", de) * _amp(state, al, "1", be))


def all_minors(state: PureState, k: int | None = None) -> list[tuple[MinorSpec, complex]]:
    """Every minor at position ``k`` (or at all positions, ascending).

    Contexts are taken in ascending integer order of alpha||beta and pairs
    lexicographically, so the listing is deterministic.
    """
    n = state.n
    positions = range(1, n + 1) if k is None else [k]
    out = []
    for pos in positions:
        if not 1 <= pos <= n:
            raise ValueError(f"position {pos} out of range for {n} qubits")
        flat = _flattening(state, pos)
        for i, j in itertools.combinations(range(2 ** (n - 1)), 2):
            value = flat[i, 0] * flat[j, 1] - flat[j, 0] * flat[i, 1]
            out.append((MinorSpec.from_contexts(n, pos, i, j), complex(value)))
    return out


def _flattening(state: PureState, k: int) -> np.ndarray:
    """Rows are the 2^(n-1) contexts alpha||beta, columns the bit at position k."""
    n = state.n
    flat = np.moveaxis(state.amplitudes.reshape(2 ** (k - 1), 2, 2 ** (n - k)), 1, -1)
    return flat.reshape(2 ** (n - 1), 2)


def minor_scale(state: PureState) -> float:
    """Largest amplitude product, the reference for relative minor checks."""
    return max(float(np.max(np.abs(state.amplitudes))) ** 2, SCALE_FLOOR)


def max_relative_minor(state: PureState) -> float:
    worst = 0.0
    for k in range(1, state.n + 1):
        f = _flattening(state, k)
        dets = np.outer(f[:, 0], f[:, 1]) - np.outer(f[:, 1], f[:, 0])
        worst = max(worst, float(np.max(np.abs(dets))))
    return worst / minor_scale(state)


def all_minors_vanish(state: PureState, tol: float = DEFAULT_TOL) -> bool:
    return max_relative_minor(state) <= tol


# -- conjecture probe -------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    trial: int
    seed: int
    n: int
    kind: str
    max_minor: float
    minors_vanish: bool
    product: bool
    # independent verdict from single-qubit purities
    purity_product: bool

    @property
    def counterexample(self) -> bool:
        return self.minors_vanish and not self.product and not self.purity_product

    @property
    def borderline(self) -> bool:
        """Minors vanish, the criterion says entangled, the purities say product."""
        return self.minors_vanish and not self.product and self.purity_product


@dataclass(frozen=True)
class ScanReport:
    rows: tuple[ScanRow, ...]
    tol: float

    @property
    def counterexamples(self) -> list[ScanRow]:
        return [r for r in self.rows if r.counterexample]

    @property
    def borderline(self) -> list[ScanRow]:
        return [r for r in self.rows if r.borderline]

    def kind_counts(self) -> dict[str, tuple[int, int]]:
        """kind -> (trials, trials where every minor vanished)."""
        counts: dict[str, list[int]] = {}
        for r in self.rows:
            c = counts.setdefault(r.kind, [0, 0])
            c[0] += 1
            c[1] += r.minors_vanish
        return {k: (a, b) for k, (a, b) in counts.items()}

    def format_table(self, rows: bool = True) -> str:
        lines = []
        if rows:
            lines.append(f"{'trial':>6} {'seed':>20} {'n':>2} {'kind':<10} "
                         f"{'max_minor':>12} {'vanish':>6} {'verdict':<9} {'purity':<9}")
            for r in self.rows:
                lines.append(f"{r.trial:>6} {r.seed:>20} {r.n:>2} {r.kind:<10} "
                             f"{r.max_minor:>12.6g} {str(r.minors_vanish).lower():>6} "
                             f"{'product' if r.product else 'entangled':<9} "
                             f"{'product' if r.purity_product else 'entangled':<9}")
        for kind, (total, vanished) in sorted(self.kind_counts().items()):
            lines.append(f"# {kind}: trials={total} all_minors_vanish={vanished}")
        lines.append(f"borderline={len(self.borderline)}")
        lines.append(f"counterexamples={len(self.counterexamples)}")
        return "\n".join(lines)


SCAN_KINDS = ("random", "product", "partial", "projected")


def trial_seed(base_seed: int, trial: int) -> int:
    """Per-trial seed, independent of evaluation order."""
    return int(np.random.SeedSequence([base_seed, trial]).generate_state(1, np.uint64)[0])


def _rank_one_2x2(a: complex, b: complex, c: complex, d: complex):
    """Nearest rank-one matrix to [[a, b], [c, d]] in Frobenius norm."""
    p = abs(a) ** 2 + abs(c) ** 2
    r = abs(b) ** 2 + abs(d) ** 2
    q = a.conjugate() * b + c.conjugate() * d
    top = 0.5 * (p + r) + ((0.5 * (p - r)) ** 2 + abs(q) ** 2) ** 0.5
    nrm = math.hypot(abs(q), top - p)
    if nrm > 0 and abs(q) > 0:
        v0, v1 = q / nrm, complex((top - p) / nrm)
    elif p >= r:
        v0, v1 = 1 + 0j, 0j
    else:
        v0, v1 = 0j, 1 + 0j
    x0 = a * v0 + b * v1
    x1 = c * v0 + d * v1
    w0, w1 = v0.conjugate(), v1.conjugate()
    return x0 * w0, x0 * w1, x1 * w0, x1 * w1


def _minor_block(spec: MinorSpec) -> tuple[int, int, int, int]:
    (al, be), (ga, de) = spec.context_a, spec.context_b
    return (int(al + "0" + be, 2), int(ga + "0" + de, 2),
            int(al + "1" + be, 2), int(ga + "1" + de, 2))


def project_minors(state: PureState, specs, sweeps: int = 30) -> PureState:
    """Alternating projections that drive the chosen minors towards zero.

    Each step replaces the 2x2 block behind one minor by its nearest
    rank-one matrix.
    """
    amps = [complex(a) for a in state.amplitudes]
    blocks = [_minor_block(spec) for spec in specs]
    for _ in range(sweeps):
        for i, j, k, l in blocks:
            amps[i], amps[j], amps[k], amps[l] = _rank_one_2x2(amps[i], amps[j], amps[k], amps[l])
        scale = max(abs(a) for a in amps) ** 2
        if max(abs(amps[i] * amps[l] - amps[j] * amps[k]) for i, j, k, l in blocks) <= 1e-15 * scale:
            break
    vec = np.array(amps)
    nrm = np.linalg.norm(vec)
    return PureState(state.n, vec / nrm if nrm > 0 else vec)


@functools.lru_cache(maxsize=None)
def _all_specs(n: int) -> tuple[MinorSpec, ...]:
    return tuple(spec for spec, _ in all_minors(PureState(n, np.ones(2**n))))


def sample_scan_state(n: int, kind: str, rng: np.random.Generator) -> PureState:
    if kind == "random":
        return random_state(n, rng)
    if kind == "product":
        return random_product_state(n, rng)
    specs = _all_specs(n)
    if kind == "partial":
        # kill a random subset of the minors and look at the rest
        chosen = rng.choice(len(specs), size=max(1, len(specs) // 2), replace=False)
        return project_minors(random_state(n, rng), [specs[i] for i in sorted(chosen)])
    if kind == "projected":
        order = rng.permutation(len(specs))
        return project_minors(random_state(n, rng), [specs[i] for i in order])
    raise ValueError(f"unknown sampler kind {kind!r}")


def conjecture_scan(n: int, trials: int, seed: int, tol: float = DEFAULT_TOL,
                    kinds=SCAN_KINDS) -> ScanReport:
    """Look for states whose minors all vanish although they are entangled.

    A row counts as a counterexample only when the criterion and the purity
    oracle both call the state entangled; rows where the two disagree sit on
    the tolerance boundary and are reported as borderline.
    """
    if not 1 <= n <= 4:
        raise ValueError("the scan is meant for 1 <= n <= 4")
    rows = []
    for t in range(trials):
        s = trial_seed(seed, t)
        kind = kinds[t % len(kinds)]
        state = sample_scan_state(n, kind, np.random.default_rng(s))
        rel = max_relative_minor(state)
        rows.append(ScanRow(t, s, n, kind, rel, rel <= tol, bool(is_product(state, tol)),
                            is_product_by_purity(state, tol)))
    return ScanReport(tuple(rows), tol)
