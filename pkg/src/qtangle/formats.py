"""Text formats for states, phase matrices and link diagrams.

State::

    qubits 2
    # comment
    01 0.70710678118654757 0
    10 -0.70710678118654757 0

Phase matrix (angles in radians; unlisted off-diagonal entries are angle 0)::

    phase-matrix n=1 lambda=1 0
    0 1 1.5707963267948966

Link diagram::

    X 1 2 +
    X 1 2 +
"""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .linkinv import Crossing, LinkDiagram
from .qstate import PureState, bits_to_index, index_to_bits
from .yangbaxter import PhaseMatrix


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.message = message
        self.line = line
        self.source = source
        where = ":".join(str(x) for x in (source, line) if x is not None)
        super().__init__(f"{where}: {message}" if where else message)


def _lines(text: str):
    """(line number, tokens) for every non-blank, non-comment line."""
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def _float(tok: str, no: int) -> float:
    try:
        value = float(tok)
    except ValueError:
        raise FormatError(f"not a number: {tok!r}", no) from None
    if not math.isfinite(value):
        raise FormatError(f"non-finite number: {tok!r}", no)
    return value


def _bits(tok: str, n: int, no: int) -> int:
    if len(tok) != n or set(tok) - {"0", "1"}:
        raise FormatError(f"expected a binary string of length {n}, got {tok!r}", no)
    return bits_to_index(tok)


def fmt_float(x: float) -> str:
    """17 significant digits: parses back to the same binary64 value."""
    return format(float(x), ".17g")


# -- states -----------------------------------------------------------------

def parse_state(text: str) -> PureState:
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty state file", 1)
    no, head = lines[0]
    if len(head) != 2 or head[0] != "qubits":
        raise FormatError("expected header 'qubits N'", no)
    try:
        n = int(head[1])
    except ValueError:
        raise FormatError(f"bad qubit count {head[1]!r}", no) from None
    if not 1 <= n <= 24:
        raise FormatError(f"qubit count {n} out of range", no)
    amps = np.zeros(2**n, dtype=np.complex128)
    seen = set()
    for no, toks in lines[1:]:
        if len(toks) != 3:
            raise FormatError("expected '<bitstring> <re> <im>'", no)
        idx = _bits(toks[0], n, no)
        if idx in seen:
            raise FormatError(f"amplitude for {toks[0]} listed twice", no)
        seen.add(idx)
        amps[idx] = complex(_float(toks[1], no), _float(toks[2], no))
    return PureState(n, amps)


def format_state(state: PureState) -> str:
    out = [f"qubits {state.n}"]
    for i, a in enumerate(state.amplitudes):
        if a != 0:
            out.append(f"{index_to_bits(i, state.n)} {fmt_float(a.real)} {fmt_float(a.imag)}")
    return "\n".join(out) + "\n"


# -- phase matrices ---------------------------------------------------------

def parse_phase_matrix(text: str) -> PhaseMatrix:
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty phase-matrix file", 1)
    no, head = lines[0]
    if head[0] != "phase-matrix" or len(head) < 2 or not head[1].startswith("n="):
        raise FormatError("expected header 'phase-matrix n=<N> [lambda=<re> <im>]'", no)
    try:
        n = int(head[1][2:])
    except ValueError:
        raise FormatError(f"bad n in {head[1]!r}", no) from None
    if not 1 <= n <= 6:
        raise FormatError(f"n={n} out of range", no)
    lam = None
    if len(head) > 2:
        if len(head) != 4 or not head[2].startswith("lambda="):
            raise FormatError("expected 'lambda=<re> <im>' after n", no)
        lam = complex(_float(head[2][len("lambda="):], no), _float(head[3], no))
        if abs(abs(lam) - 1) > 1e-12:
            raise FormatError("lambda must lie on the unit circle", no)
    d = 2**n
    angles = np.zeros((d, d))
    seen = set()
    for no, toks in lines[1:]:
        if len(toks) != 3:
            raise FormatError("expected '<alpha> <beta> <angle>'", no)
        a, b = _bits(toks[0], n, no), _bits(toks[1], n, no)
        if lam is not None and a == b:
            raise FormatError("diagonal entries must not be listed when lambda is set", no)
        if (a, b) in seen:
            raise FormatError(f"entry {toks[0]} {toks[1]} listed twice", no)
        seen.add((a, b))
        angles[a, b] = _float(toks[2], no)
    return PhaseMatrix.from_angles(n, angles, lam)


def format_phase_matrix(M: PhaseMatrix) -> str:
    head = f"phase-matrix n={M.n}"
    if M.diagonal_lambda is not None:
        lam = M.diagonal_lambda
        head += f" lambda={fmt_float(lam.real)} {fmt_float(lam.imag)}"
    out = [head]
    for a in range(M.dim):
        for b in range(M.dim):
            if M.diagonal_lambda is not None and a == b:
                continue
            angle = float(np.angle(M.entries[a, b]))
            if angle != 0:
                out.append(f"{index_to_bits(a, M.n)} {index_to_bits(b, M.n)} {fmt_float(angle)}")
    return "\n".join(out) + "\n"


# -- link diagrams ----------------------------------------------------------

def parse_diagram(text: str) -> LinkDiagram:
    crossings = []
    for no, toks in _lines(text):
        if len(toks) != 4 or toks[0] != "X":
            raise FormatError("expected 'X <comp_a> <comp_b> <+|->'", no)
        if toks[1] not in ("1", "2") or toks[2] not in ("1", "2"):
            raise FormatError("components must be 1 or 2", no)
        if toks[3] not in ("+", "-"):
            raise FormatError(f"sign must be + or -, got {toks[3]!r}", no)
        crossings.append(Crossing(int(toks[1]), int(toks[2]), 1 if toks[3] == "+" else -1))
    try:
        return LinkDiagram(tuple(crossings))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_diagram(d: LinkDiagram) -> str:
    return "".join(f"X {c.comp_a} {c.comp_b} {'+' if c.sign > 0 else '-'}\n" for c in d.crossings)


# -- file helpers -----------------------------------------------------------

def _read(path, parser):
    text = Path(path).read_text(encoding="utf-8")
    try:
        return parser(text)
    except FormatError as exc:
        raise FormatError(exc.message, exc.line, str(path)) from None


def read_state(path) -> PureState:
    return _read(path, parse_state)


def read_phase_matrix(path) -> PhaseMatrix:
    return _read(path, parse_phase_matrix)


def read_diagram(path) -> LinkDiagram:
    return _read(path, parse_diagram)


def write_state(path, state: PureState) -> None:
    Path(path).write_text(format_state(state), encoding="utf-8")
