"""Command line front end.

Exit codes: 0 success or true, 1 semantic false, 2 usage or input error.
Orientations are read from ``-i FILE`` or standard input and written to
standard output in the .uso format.
"""

from __future__ import annotations

import argparse
import sys
import time
from math import comb

from . import constructions, reduction
from .cube import N_MAX, Edge, Face
from .errors import ArgumentError, DimensionError, UsoError
from .orientation import flip, load, load_edges, store
from .phases import (
    compute_phases_fast,
    compute_phases_naive,
    flip_matching_checked,
    in_phase,
    is_flippable,
    is_hypervertex,
)
from .recognition import is_uso_naive, sweep_uso


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _read(args, stdin) -> str:
    if getattr(args, "input", None):
        with open(args.input, encoding="utf-8") as fh:
            return fh.read()
    return stdin.read()


def _read_file(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _edge(s: str, n: int) -> Edge:
    e, m = Edge.parse(s)
    if m != n:
        raise DimensionError(f"edge {s} has {m} bits, the cube has dimension {n}")
    return e


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="usophase", description="Unique sink orientations and their phases.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def with_input(sp):
        sp.add_argument("-i", "--input", help="orientation file (default: standard input)")
        return sp

    g = sub.add_parser("gen", help="generate a named USO")
    g.add_argument("--kind", choices=["uniform", "schurr"], required=True)
    g.add_argument("-n", type=int, required=True)

    v = with_input(sub.add_parser("verify", help="exit 0 if the input is a USO, 1 otherwise"))
    v.add_argument("--jobs", type=int, default=1)

    ph = with_input(sub.add_parser("phases", help="print the phase partition (.phz)"))
    mode = ph.add_mutually_exclusive_group()
    mode.add_argument("--fast", action="store_true", help="face sweep (default)")
    mode.add_argument("--naive", action="store_true", help="all vertex pairs")
    ph.add_argument("--jobs", type=int, default=1)

    t = with_input(sub.add_parser("2ip", help="are two edges in the same phase"))
    t.add_argument("edge1")
    t.add_argument("edge2")

    fl = with_input(sub.add_parser("flippable", help="can a single edge be flipped"))
    fl.add_argument("edge")

    f = with_input(sub.add_parser("flip", help="flip an edge set without any check"))
    f.add_argument("edges", help=".eds file")

    fm = with_input(sub.add_parser("flip-matching", help="flip a matching that is a union of phases"))
    fm.add_argument("edges", help=".eds file")

    ps = with_input(sub.add_parser("partial-swap", help="partial swap in dimension J"))
    ps.add_argument("-j", type=int, required=True)

    hv = with_input(sub.add_parser("hypervertex", help="test a face, or replace it with --replace"))
    hv.add_argument("face", help="face string over 0, 1, *")
    hv.add_argument("--replace", metavar="USO", help="orientation to put inside the face")

    s = sub.add_parser("sample", help="run the phase-flip Markov chain from the uniform USO")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)

    en = sub.add_parser("enumerate", help="all USOs of Q_n, n <= 3")
    en.add_argument("-n", type=int, required=True)
    en.add_argument("--count", action="store_true", help="print only the number")

    r = sub.add_parser("reduce", help="turn a QDIMACS sentence into a phase query")
    r.add_argument("qbf")
    r.add_argument("--emit-uso", metavar="FILE")
    r.add_argument("--decide", action="store_true")

    b = sub.add_parser("bench", help="CSV of pair checks and wall time on Schurr cubes")
    b.add_argument("-n", type=int, default=8, help="largest dimension")
    b.add_argument("--min-n", type=int, default=1)
    return p


def _cmd_gen(args, stdin, out, err):
    make = constructions.uniform if args.kind == "uniform" else constructions.schurr
    out.write(store(make(args.n)))
    return 0


def _cmd_verify(args, stdin, out, err):
    O = load(_read(args, stdin))
    rep = sweep_uso(O, jobs=max(1, args.jobs))
    if rep.is_uso:
        return 0
    err.write("not a USO: " + rep.witness.describe(O) + "\n")
    return 1


def _cmd_phases(args, stdin, out, err):
    O = load(_read(args, stdin))
    if args.naive:
        part = compute_phases_naive(O)
    else:
        part = compute_phases_fast(O, jobs=max(1, args.jobs))
    out.write(part.to_text())
    return 0


def _answer(out, ok: bool, yes: str, no: str) -> int:
    out.write((yes if ok else no) + "\n")
    return 0 if ok else 1


def _cmd_2ip(args, stdin, out, err):
    O = load(_read(args, stdin))
    e, f = _edge(args.edge1, O.dim), _edge(args.edge2, O.dim)
    return _answer(out, in_phase(O, e, f), "IN-PHASE", "NOT-IN-PHASE")


def _cmd_flippable(args, stdin, out, err):
    O = load(_read(args, stdin))
    return _answer(out, is_flippable(O, _edge(args.edge, O.dim)), "FLIPPABLE", "NOT-FLIPPABLE")


def _cmd_flip(args, stdin, out, err):
    O = load(_read(args, stdin))
    S = load_edges(_read_file(args.edges), O.dim)
    out.write(store(flip(O, S)))
    return 0


def _cmd_flip_matching(args, stdin, out, err):
    O = load(_read(args, stdin))
    H = load_edges(_read_file(args.edges), O.dim)
    out.write(store(flip_matching_checked(O, H)))
    return 0


def _cmd_partial_swap(args, stdin, out, err):
    O = load(_read(args, stdin))
    out.write(store(constructions.partial_swap(O, args.j)))
    return 0


def _cmd_hypervertex(args, stdin, out, err):
    O = load(_read(args, stdin))
    f = Face.parse(args.face)
    if f.n != O.dim:
        raise DimensionError(f"face {args.face} does not fit a cube of dimension {O.dim}")
    if args.replace is None:
        return _answer(out, is_hypervertex(O, f), "HYPERVERTEX", "NOT-HYPERVERTEX")
    inner = load(_read_file(args.replace))
    out.write(store(constructions.replace_hypervertex(O, f, inner)))
    return 0


def _cmd_sample(args, stdin, out, err):
    err.write(f"seed {args.seed}\n")
    out.write(store(constructions.sample_uniform(args.n, args.steps, args.seed)))
    return 0


def _cmd_enumerate(args, stdin, out, err):
    usos = constructions.enumerate_usos(args.n)
    if args.count:
        out.write(f"{sum(1 for _ in usos)}\n")
    else:
        for O in usos:
            out.write(store(O))
    return 0


def _cmd_reduce(args, stdin, out, err):
    inst = reduction.parse_qbf(_read_file(args.qbf))
    res = reduction.reduce_to_2ip(inst)
    n = res.layout.total_dim
    out.write(f"dim {n}\n")
    for blk in res.layout.levels:
        kind = "forall" if blk.quantifier is reduction.Quantifier.FORALL else "exists"
        dims = " ".join(str(d) for d in range(blk.first_dim, blk.first_dim + blk.width))
        out.write(f"level {blk.level} {kind} x{blk.variable} dims {dims}\n")
    out.write(f"e {res.e.render(n)}\ne' {res.e_prime.render(n)}\n")
    if args.emit_uso or args.decide:
        if n > N_MAX:
            raise ArgumentError(f"dimension {n} is too large to materialize (limit {N_MAX})")
        dense = res.oracle.materialize()
        if args.emit_uso:
            with open(args.emit_uso, "w", encoding="utf-8") as fh:
                fh.write(store(dense))
        if args.decide:
            return _answer(out, in_phase(dense, res.e, res.e_prime), "IN-PHASE", "NOT-IN-PHASE")
    return 0


def _timed(fn):
    t = time.perf_counter_ns()
    val = fn()
    return val, time.perf_counter_ns() - t


def _cmd_bench(args, stdin, out, err):
    if args.min_n < 1 or args.n < args.min_n:
        raise ArgumentError("need 1 <= --min-n <= -n")
    out.write("op,n,pair_checks,wall_ns\n")
    for n in range(args.min_n, args.n + 1):
        O = constructions.schurr(n)
        rep, ns = _timed(lambda: sweep_uso(O))
        out.write(f"verify-fast,{n},{rep.pair_checks},{ns}\n")
        _, ns = _timed(lambda: is_uso_naive(O))
        out.write(f"verify-naive,{n},{comb(1 << n, 2)},{ns}\n")
        part, ns = _timed(lambda: compute_phases_fast(O))
        out.write(f"phases-fast,{n},{part.pair_checks},{ns}\n")
        part, ns = _timed(lambda: compute_phases_naive(O))
        out.write(f"phases-naive,{n},{part.pair_checks},{ns}\n")
    return 0


COMMANDS = {
    "gen": _cmd_gen,
    "verify": _cmd_verify,
    "phases": _cmd_phases,
    "2ip": _cmd_2ip,
    "flippable": _cmd_flippable,
    "flip": _cmd_flip,
    "flip-matching": _cmd_flip_matching,
    "partial-swap": _cmd_partial_swap,
    "hypervertex": _cmd_hypervertex,
    "sample": _cmd_sample,
    "enumerate": _cmd_enumerate,
    "reduce": _cmd_reduce,
    "bench": _cmd_bench,
}


def run(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        stderr.write(f"{exc}\n")
        return 2
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 2
    try:
        return COMMANDS[args.cmd](args, stdin, stdout, stderr)
    except (UsoError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
