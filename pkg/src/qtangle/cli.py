"""Command-line entry point: ``qtangle <group> <command> [flags]``.

Exit codes: 0 success, 1 domain error (for example an entangled state
passed to ``state factor``), 2 usage, I/O or file-format error.
"""
from __future__ import annotations

import argparse
import sys
import textwrap

import numpy as np

from . import bell, formats, linkinv, luinv, qstate, yangbaxter

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2


class DomainError(Exception):
    pass


def fmt_real(x: float) -> str:
    x = float(x)
    return format(0.0 if x == 0 else x, ".12g")


def fmt_complex(z: complex) -> str:
    """``a+bi`` with 12 significant digits; parts below 1e-12 of |z| (or 1e-12) print as 0."""
    z = complex(z)
    cut = 1e-12 * max(1.0, abs(z))
    re = 0.0 if abs(z.real) < cut else z.real
    im = 0.0 if abs(z.imag) < cut else z.imag
    return f"{fmt_real(re)}{'-' if im < 0 else '+'}{fmt_real(abs(im))}i"


def _state_of(ns):
    return formats.read_state(ns.state)


def _matrix_of(ns):
    return formats.read_phase_matrix(ns.matrix)


def _bits(M, x):
    return qstate.index_to_bits(x, M.n)


# -- state ------------------------------------------------------------------

def cmd_state_check(ns, out):
    st = _state_of(ns)
    verdict = qstate.is_product(st, ns.tol)
    out.write(("product" if verdict else "entangled") + "\n")
    out.write(f"flip_mask {verdict.flip_mask}\n")
    out.write(f"max_relative_residual {fmt_real(verdict.max_relative_residual)}\n")
    if verdict.violated is not None:
        out.write(f"violated {verdict.violated}\n")
    shifted = qstate.xor_relabel(st, verdict.flip_mask)
    out.write("# alpha residual (after relabeling)\n")
    for bits, res in qstate.criterion_residuals(shifted):
        out.write(f"{bits} {fmt_complex(res)}\n")


def cmd_state_factor(ns, out):
    st = _state_of(ns)
    try:
        fac = qstate.factorize(st, ns.tol)
    except qstate.EntangledStateError as exc:
        raise DomainError(str(exc)) from None
    out.write(f"scalar {fmt_complex(fac.scalar)}\n")
    out.write(f"flip_mask {fac.flip_mask}\n")
    for i, (c0, c1) in enumerate(fac.local_factors(), start=1):
        out.write(f"qubit {i} {fmt_complex(c0)} {fmt_complex(c1)}\n")
    if ns.out:
        formats.write_state(ns.out, fac.rebuild())


def cmd_state_purity(ns, out):
    st = _state_of(ns)
    for k in range(1, st.n + 1):
        out.write(f"qubit {k} purity {fmt_real(qstate.purity_oracle(st, k))}\n")


# -- yang-baxter and braids -------------------------------------------------

def cmd_yb_verify(ns, out):
    M = _matrix_of(ns)
    res = yangbaxter.verify_ybe(M, ns.tol)
    R = yangbaxter.build_R(M)
    unit = float(np.max(np.abs(R.conj().T @ R - np.eye(R.shape[0]))))
    out.write(f"ybe_deviation {fmt_real(res.deviation)}\n")
    out.write(f"unitarity_deviation {fmt_real(unit)}\n")
    out.write(("ybe holds" if res else "ybe fails") + "\n")
    if not res:
        raise DomainError("Yang-Baxter equation fails")


def cmd_yb_entangles(ns, out):
    M = _matrix_of(ns)
    if M.diagonal_lambda is None:
        raise DomainError("phase matrix needs lambda= for this analysis")
    brute = yangbaxter.r_entangles_uniform(M, ns.tol)
    closed = yangbaxter.r_unentangled_closed_form(M, ns.tol)
    out.write(("entangles" if brute else "does-not-entangle") + "\n")
    out.write(f"closed_form_unentangled {str(closed).lower()}\n")
    out.write(f"agree {str(closed != brute).lower()}\n")
    out.write(f"symmetric {str(M.is_symmetric).lower()}\n")


def cmd_braid_apply(ns, out):
    M = _matrix_of(ns)
    word = yangbaxter.BraidWord.parse(ns.strands, ns.word)
    U = yangbaxter.braid_operator(word, M)
    unit = float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))
    out.write(f"dimension {U.shape[0]}\n")
    out.write(f"unitarity_deviation {fmt_real(unit)}\n")
    if ns.state:
        st = _state_of(ns)
        if st.n != M.n * ns.strands:
            raise DomainError(f"state has {st.n} qubits, braid acts on {M.n * ns.strands}")
        result = qstate.PureState(st.n, U @ st.amplitudes)
        verdict = qstate.is_product(result, ns.tol)
        out.write(("product" if verdict else "entangled") + "\n")
        if ns.out:
            formats.write_state(ns.out, result)
        else:
            out.write(formats.format_state(result))


# -- links ------------------------------------------------------------------

def _link_inputs(ns):
    return formats.read_diagram(ns.diagram), _matrix_of(ns)


def _write_stats(st, out):
    out.write(f"w1 {st.w1}\nw2 {st.w2}\nlk {st.lk}\nw {st.w}\n")


def cmd_link_sum(ns, out):
    d, M = _link_inputs(ns)
    st = linkinv.stats(d)
    _write_stats(st, out)
    out.write(f"S_K {fmt_complex(linkinv.state_sum_bruteforce(d, M))}\n")
    if M.diagonal_lambda is not None:
        out.write(f"S_K_closed {fmt_complex(linkinv.state_sum_closed(st, M))}\n")


def cmd_link_z(ns, out):
    d, M = _link_inputs(ns)
    if M.diagonal_lambda is None:
        raise DomainError("Z_K needs a phase matrix with lambda=")
    st = linkinv.stats(d)
    _write_stats(st, out)
    out.write(f"S_K {fmt_complex(linkinv.state_sum_bruteforce(d, M))}\n")
    out.write(f"Z_K {fmt_complex(linkinv.z_invariant(st, M))}\n")


def cmd_link_detect(ns, out):
    M = _matrix_of(ns)
    if M.diagonal_lambda is None:
        raise DomainError("detection needs a phase matrix with lambda=")
    det = linkinv.detects_linking(M, ns.tol)
    if det:
        a, b = det.witness
        out.write(f"detects witness {_bits(M, a)} {_bits(M, b)}\n")
    else:
        out.write("does-not-detect\n")


# -- bell -------------------------------------------------------------------

def cmd_bell_delta(ns, out):
    st = _state_of(ns)
    try:
        value = bell.delta(st)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    out.write(f"delta {fmt_real(value)}\n")
    if st.n == 2 and not np.any(st.amplitudes.imag):
        s = bell.RealTwoQubitState.from_state(st)
        out.write(f"delta_closed_form {fmt_real(bell.delta_closed_form(s))}\n")
        out.write(f"violates {str(bell.violates(s)).lower()}\n")
    out.write(f"product {str(bool(qstate.is_product(st, ns.tol))).lower()}\n")


def cmd_bell_scan(ns, out):
    c = bell.violation_census(ns.trials, ns.seed)
    out.write(f"trials={c.trials} violations={c.violations} "
              f"entangled={c.entangled} max_delta={fmt_real(c.max_delta)}\n")


def cmd_bell_maximize(ns, out):
    st = _state_of(ns)
    try:
        res = bell.maximize_chsh(st)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    out.write(f"delta_max {fmt_real(res.delta_max)}\n")
    for name, theta in zip("QRST", res.angles):
        out.write(f"theta_{name} {fmt_real(theta)}\n")


def cmd_bell_lhv(ns, out):
    out.write(bell.classical_bound().format_table() + "\n")


# -- local unitary invariants -----------------------------------------------

def cmd_luinv_minors(ns, out):
    st = _state_of(ns)
    for spec, value in luinv.all_minors(st, ns.position):
        (al, be), (ga, de) = spec.context_a, spec.context_b
        out.write(f"{spec.position} {al or '-'} {be or '-'} {ga or '-'} {de or '-'} "
                  f"{fmt_complex(value)}\n")
    out.write(f"all_minors_vanish {str(luinv.all_minors_vanish(st, ns.tol)).lower()}\n")


def cmd_luinv_scan(ns, out):
    report = luinv.conjecture_scan(ns.n, ns.trials, ns.seed, ns.tol)
    out.write(report.format_table(rows=not ns.summary) + "\n")


FORMAT_HELP = textwrap.dedent("""\
    file formats:
      state          'qubits N' then '<bitstring> <re> <im>' per nonzero amplitude
                       qubits 2
                       01 0.70710678118654757 0
                       10 -0.70710678118654757 0
      phase matrix   'phase-matrix n=N [lambda=<re> <im>]' then '<alpha> <beta> <angle>'
                       phase-matrix n=1 lambda=1 0
                       0 1 1.5707963267948966
                       1 0 1.5707963267948966
      diagram        one crossing per line 'X <comp_a> <comp_b> <+|->'
                       X 1 2 +
                       X 1 2 +
    '#' starts a comment in every format.""")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qtangle", description=__doc__.splitlines()[0],
                                epilog=FORMAT_HELP,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    groups = p.add_subparsers(dest="group", required=True)

    def command(group, name, func, help_text, *, state=False, matrix=False, tol=True):
        sp = group.add_parser(name, help=help_text, description=help_text, epilog=FORMAT_HELP,
                              formatter_class=argparse.RawDescriptionHelpFormatter)
        if state:
            sp.add_argument("--state", required=True, help="state file")
        if matrix:
            sp.add_argument("--matrix", required=True, help="phase-matrix file")
        if tol:
            sp.add_argument("--tol", type=float, default=qstate.DEFAULT_TOL)
        sp.set_defaults(func=func)
        return sp

    g = groups.add_parser("state", help="product-state criterion").add_subparsers(
        dest="cmd", required=True)
    command(g, "check", cmd_state_check, "criterion verdict and residual table", state=True)
    sp = command(g, "factor", cmd_state_factor, "factor a product state", state=True)
    sp.add_argument("--out", help="write the rebuilt state here")
    command(g, "purity", cmd_state_purity, "single-qubit marginal purities", state=True, tol=False)

    g = groups.add_parser("yb", help="phase-matrix Yang-Baxter operators").add_subparsers(
        dest="cmd", required=True)
    command(g, "verify", cmd_yb_verify, "check the Yang-Baxter equation", matrix=True).set_defaults(
        tol=yangbaxter.UNIT_TOL)
    command(g, "entangles", cmd_yb_entangles,
            "does R entangle the uniform state (brute force and closed form)", matrix=True)

    g = groups.add_parser("braid", help="braid operators").add_subparsers(dest="cmd", required=True)
    sp = command(g, "apply", cmd_braid_apply, "build a braid operator, optionally apply it",
                 matrix=True)
    sp.add_argument("--strands", type=int, required=True)
    sp.add_argument("--word", required=True, help="signed generators, e.g. '1 -2 1'")
    sp.add_argument("--state", help="state on strands*n qubits")
    sp.add_argument("--out", help="write the resulting state here")

    g = groups.add_parser("link", help="two-component link invariants").add_subparsers(
        dest="cmd", required=True)
    for name, func, text in (("sum", cmd_link_sum, "state sum S_K"),
                             ("z", cmd_link_z, "invariant Z_K")):
        sp = command(g, name, func, text, matrix=True, tol=False)
        sp.add_argument("--diagram", required=True, help="diagram file")
    command(g, "detect", cmd_link_detect, "can Z_K detect linking", matrix=True)

    g = groups.add_parser("bell", help="CHSH inequality").add_subparsers(dest="cmd", required=True)
    command(g, "delta", cmd_bell_delta, "Delta with the fixed observables", state=True)
    sp = command(g, "scan", cmd_bell_scan, "violation census over random real states", tol=False)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    command(g, "maximize", cmd_bell_maximize, "search observables maximizing Delta",
            state=True, tol=False)
    command(g, "lhv", cmd_bell_lhv, "table of deterministic +-1 assignments", tol=False)

    g = groups.add_parser("luinv", help="local-unitary minor invariants").add_subparsers(
        dest="cmd", required=True)
    sp = command(g, "minors", cmd_luinv_minors, "list 2x2 minors", state=True)
    sp.add_argument("--position", type=int, help="only this qubit position")
    sp = command(g, "scan", cmd_luinv_scan, "probe the vanishing-minors conjecture")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--summary", action="store_true", help="omit per-trial rows")
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_IO
    try:
        ns.func(ns, out)
    except formats.FormatError as exc:
        err.write(f"format error: {exc}\n")
        return EXIT_IO
    except OSError as exc:
        err.write(f"i/o error: {exc}\n")
        return EXIT_IO
    except (DomainError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    return EXIT_OK


def main():
    sys.exit(run())
