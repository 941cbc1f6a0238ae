"""Two-component link diagrams, the phase-matrix state sum and the invariant Z_K.

Only component labels and crossing signs enter the weights, so a diagram
is stored as a bag of signed crossings.  A crossing between the two
components always takes the weight ``M[color(K1), color(K2)]``; a
negative crossing takes the inverse (complex conjugate) weight.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .qstate import DEFAULT_TOL
from .yangbaxter import PhaseMatrix


@dataclass(frozen=True)
class Crossing:
    comp_a: int
    comp_b: int
    sign: int

    def __post_init__(self):
        if self.comp_a not in (1, 2) or self.comp_b not in (1, 2):
            raise ValueError(f"components must be 1 or 2, got {self.comp_a}, {self.comp_b}")
        if self.sign not in (1, -1):
            raise ValueError(f"crossing sign must be +1 or -1, got {self.sign}")

    @property
    def shared(self) -> bool:
        return self.comp_a != self.comp_b


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[Crossing, ...] = ()

    def __post_init__(self):
        cs = tuple(c if isinstance(c, Crossing) else Crossing(*c) for c in self.crossings)
        if sum(c.sign for c in cs if c.shared) % 2:
            raise ValueError("shared crossings have an odd sign sum; linking number is not an integer")
        object.__setattr__(self, "crossings", cs)

    @classmethod
    def of(cls, *crossings) -> LinkDiagram:
        return cls(tuple(crossings))


HOPF = LinkDiagram.of((1, 2, 1), (1, 2, 1))
UNLINK = LinkDiagram()


@dataclass(frozen=True)
class LinkStats:
    w1: int
    w2: int
    lk: int

    @property
    def w(self) -> int:
        return self.w1 + self.w2 + 2 * self.lk


def stats(d: LinkDiagram) -> LinkStats:
    w1 = sum(c.sign for c in d.crossings if c.comp_a == c.comp_b == 1)
    w2 = sum(c.sign for c in d.crossings if c.comp_a == c.comp_b == 2)
    shared = sum(c.sign for c in d.crossings if c.shared)
    if shared % 2:
        raise ValueError("odd shared-sign sum")
    return LinkStats(w1, w2, shared // 2)


def total_writhe(d: LinkDiagram) -> int:
    """Sum of every crossing sign, straight from the diagram."""
    return sum(c.sign for c in d.crossings)


def upow(z, k: int):
    """Integer power of a unit-modulus number; negative powers conjugate."""
    return z**k if k >= 0 else np.conj(z) ** (-k)


def state_sum_bruteforce(d: LinkDiagram, M: PhaseMatrix) -> complex:
    """Sum over all colorings (a on K1, b on K2) of the product of crossing weights.

    The colorings are vectorized: entry [a, b] of ``weights`` holds the
    product for that coloring, and the final sum runs in index order.
    """
    dim = M.dim
    diag = np.diag(M.entries)
    weights = np.ones((dim, dim), dtype=np.complex128)
    for c in d.crossings:
        if c.shared:
            w = M.entries
        elif c.comp_a == 1:
            w = np.broadcast_to(diag[:, None], (dim, dim))
        else:
            w = np.broadcast_to(diag[None, :], (dim, dim))
        weights = weights * (w if c.sign > 0 else np.conj(w))
    return complex(np.sum(weights))


def state_sum_closed(st: LinkStats, M: PhaseMatrix) -> complex:
    """``sum_{a != b} lam^(w1+w2) M[a,b]^(2 lk) + 2^n lam^(w1+w2+2 lk)``."""
    lam = M.lam
    off = ~np.eye(M.dim, dtype=bool)
    pair = np.sum(upow(M.entries[off], 2 * st.lk))
    return complex(upow(lam, st.w1 + st.w2) * pair + M.dim * upow(lam, st.w))


def z_invariant(st: LinkStats, M: PhaseMatrix) -> complex:
    """``lam^(-w) S_K``."""
    return complex(upow(M.lam, -st.w) * state_sum_closed(st, M))


def z_invariant_direct(lk: int, M: PhaseMatrix) -> complex:
    """``sum_{a != b} (M[a,b]^2 / lam^2)^lk + 2^n``, evaluated as written."""
    lam = M.lam
    off = ~np.eye(M.dim, dtype=bool)
    ratio = M.entries[off] ** 2 / lam**2
    return complex(np.sum(upow(ratio, lk)) + M.dim)


@dataclass(frozen=True)
class Detection:
    detects: bool
    witness: tuple[int, int] | None

    def __bool__(self):
        return self.detects


def detects_linking(M: PhaseMatrix, tol: float = DEFAULT_TOL) -> Detection:
    """True iff some off-diagonal ``M[a,b]^2`` differs from ``lam^2``."""
    lam2 = M.lam**2
    for a, b in itertools.product(range(M.dim), repeat=2):
        if a != b and abs(M.entries[a, b] ** 2 - lam2) > tol:
            return Detection(True, (a, b))
    return Detection(False, None)


CROSSING_TYPES = tuple(Crossing(a, b, s) for a, b in ((1, 1), (2, 2), (1, 2), (2, 1)) for s in (1, -1))


def enumerate_diagrams(max_crossings: int):
    """Every valid diagram with at most ``max_crossings`` crossings, up to order.

    Weights commute, so one representative per multiset of crossing types
    covers every component/sign pattern.
    """
    for size in range(max_crossings + 1):
        for combo in itertools.combinations_with_replacement(CROSSING_TYPES, size):
            if sum(c.sign for c in combo if c.shared) % 2 == 0:
                yield LinkDiagram(combo)
