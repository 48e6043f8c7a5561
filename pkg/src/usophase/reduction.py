"""From quantified boolean formulas to phase queries.

A QBF is turned into an acyclic USO whose 1-edges at the minimum and the
maximum vertex are in phase exactly when the formula is true. The cube is
built level by level: the innermost block of three dimensions holds a base
gadget that encodes the truth of the matrix under one assignment, and every
quantifier adds two (forall) or three (exists) outer dimensions that arrange
copies of the two sub-gadgets in a combed product, then flip a few "red"
edges to wire the phases together.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cube import Edge, full_mask
from .errors import GadgetError, ParseError
from .orientation import Combing, DenseOrientation, OracleOrientation, Orientation, as_array, is_acyclic, is_combed, store
from .phases import in_phase
from .recognition import is_uso_fast

BASE_DIM = 3


class Quantifier(str, enum.Enum):
    FORALL = "a"
    EXISTS = "e"


@dataclass(frozen=True)
class QbfInstance:
    """Prenex CNF sentence. ``quantifiers[k]`` binds variable ``order[k]``, outermost first."""

    num_vars: int
    quantifiers: tuple[Quantifier, ...]
    clauses: tuple[frozenset[int], ...]
    order: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.order:
            object.__setattr__(self, "order", tuple(range(1, self.num_vars + 1)))
        if len(self.quantifiers) != self.num_vars or sorted(self.order) != list(range(1, self.num_vars + 1)):
            raise ValueError("every variable must be quantified exactly once")
        for c in self.clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range")

    def matrix(self, values: dict[int, bool]) -> bool:
        return all(any(values[abs(l)] == (l > 0) for l in c) for c in self.clauses)

    def render(self) -> str:
        prefix = "".join(("A" if q is Quantifier.FORALL else "E") + f"x{v} " for q, v in zip(self.quantifiers, self.order))
        body = " & ".join("(" + " | ".join(("~" if l < 0 else "") + f"x{abs(l)}" for l in sorted(c, key=abs)) + ")" for c in self.clauses)
        return prefix + ": " + (body or "true")


def parse_qbf(text: str) -> QbfInstance:
    """Read the QDIMACS subset: ``p cnf V C``, then ``a``/``e`` lines, then clauses.

    Every line is 0-terminated, ``c`` lines are comments, and every variable
    must be quantified exactly once.
    """
    header = None
    quants: list[Quantifier] = []
    order: list[int] = []
    clauses: list[frozenset[int]] = []
    lineno = 0
    for lineno, raw in enumerate(text.split("\n"), start=1):
        s = raw.strip()
        if not s or s.startswith("c"):
            continue
        toks = s.split()
        if header is None:
            if toks[0] != "p" or len(toks) != 4 or toks[1] != "cnf":
                raise ParseError(f"expected 'p cnf <vars> <clauses>', got {s!r}", lineno)
            try:
                header = (int(toks[2]), int(toks[3]))
                header_line = lineno
            except ValueError:
                raise ParseError(f"bad problem line {s!r}", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise ParseError("negative counts in problem line", lineno)
            continue
        if toks[0] in ("a", "e"):
            if clauses:
                raise ParseError("quantifier line after the first clause", lineno)
            q = Quantifier(toks[0])
            for var in _ints(toks[1:], lineno):
                if not 1 <= var <= header[0]:
                    raise ParseError(f"variable {var} not declared", lineno)
                if var in order:
                    raise ParseError(f"variable {var} quantified twice", lineno)
                quants.append(q)
                order.append(var)
            continue
        lits = _ints(toks, lineno)
        for lit in lits:
            if abs(lit) > header[0]:
                raise ParseError(f"literal {lit} uses an undeclared variable", lineno)
            if abs(lit) not in order:
                raise ParseError(f"variable {abs(lit)} is free", lineno)
        clauses.append(frozenset(lits))
    if header is None:
        raise ParseError("missing problem line", max(lineno, 1))
    if len(order) != header[0]:
        missing = sorted(set(range(1, header[0] + 1)) - set(order))
        raise ParseError(f"variable {missing[0]} is never quantified", header_line)
    if len(clauses) != header[1]:
        raise ParseError(f"problem line announces {header[1]} clauses, found {len(clauses)}", header_line)
    return QbfInstance(header[0], tuple(quants), tuple(clauses), tuple(order))


def _ints(toks: list[str], lineno: int) -> list[int]:
    try:
        vals = [int(t) for t in toks]
    except ValueError:
        raise ParseError(f"non-integer token in {' '.join(toks)!r}", lineno) from None
    if not vals or vals[-1] != 0:
        raise ParseError("line is not 0-terminated", lineno)
    if 0 in vals[:-1]:
        raise ParseError("0 inside a line", lineno)
    return vals[:-1]


def eval_qbf(inst: QbfInstance) -> bool:
    values: dict[int, bool] = {}

    def go(k: int) -> bool:
        if k == inst.num_vars:
            return inst.matrix(values)
        branch = []
        for b in (False, True):
            values[inst.order[k]] = b
            branch.append(go(k + 1))
        return all(branch) if inst.quantifiers[k] is Quantifier.FORALL else any(branch)

    return go(0)


# -- gadgets ------------------------------------------------------------------

# Outmaps of the true base gadget, dimension 1 in bit 0.
TRUE_GADGET = (0, 5, 2, 3, 6, 1, 4, 7)


def gadget_invariants(O: Orientation) -> dict[str, bool]:
    n = O.dim
    out = as_array(O)
    return {
        "uso": is_uso_fast(O),
        "acyclic": is_acyclic(O),
        "combed-down-1": is_combed(O, 1) is Combing.DOWN,
        "sink-at-min": int(out[0]) == 0,
        "source-at-max": int(out[-1]) == full_mask(n),
    }


def extreme_edges(n: int) -> tuple[Edge, Edge]:
    """The 1-edges at the minimum and at the maximum vertex of Q_n."""
    return Edge(0, 1), Edge(full_mask(n) & ~1, 1)


def extremes_in_phase(O: Orientation) -> bool:
    e, f = extreme_edges(O.dim)
    return in_phase(O, e, f)


def search_true_gadget() -> DenseOrientation:
    """Smallest (by stored text) Q_3 USO with all five invariants and in-phase extremes."""
    from .constructions import enumerate_usos

    cands = [O for O in enumerate_usos(BASE_DIM) if all(gadget_invariants(O).values()) and extremes_in_phase(O)]
    return min(cands, key=store)


def base_gadget(truth: bool) -> DenseOrientation:
    if truth:
        return DenseOrientation(TRUE_GADGET, BASE_DIM, validate=False)
    return DenseOrientation(np.arange(1 << BASE_DIM, dtype=np.int64), BASE_DIM, validate=False)


@dataclass(frozen=True)
class Wiring:
    """Block placement and red edges of one quantifier level.

    Outer position ``p`` (the level's own coordinates) holds the false
    sub-gadget ('F'), the true one ('T') or a uniform cube. A red edge
    ``(anchor, p, q)`` joins the copies of one inner vertex in blocks p and q;
    the anchor names that inner vertex.
    """

    width: int
    placement: dict
    reds: tuple

    def block(self, p: int) -> str:
        return self.placement.get(p, "U")


FORALL_WIRING = Wiring(2, {0: "F", 1: "F", 3: "T"}, (("max", 0, 1), ("min", 1, 3)))
EXISTS_WIRING = Wiring(
    3,
    {0: "F", 1: "F", 3: "T", 7: "T"},
    (("lo1", 0, 1), ("max", 1, 3), ("lo1", 3, 7), ("hi1", 0, 1), ("min", 1, 3), ("hi1", 3, 7)),
)
WIRINGS = {Quantifier.FORALL: FORALL_WIRING, Quantifier.EXISTS: EXISTS_WIRING}


def anchor_vertex(anchor: str, d: int) -> int:
    full = full_mask(d)
    return {"min": 0, "max": full, "lo1": 1, "hi1": full ^ 1}[anchor]


@lru_cache(maxsize=None)
def _red_toggles(q: Quantifier, d: int) -> dict[int, int]:
    """Outer-bit toggles per global vertex of one level (inner dimension d)."""
    w = WIRINGS[q]
    out: dict[int, int] = {}
    for anchor, p, r in w.reds:
        x = anchor_vertex(anchor, d)
        t = (p ^ r) << d
        out[x | (p << d)] = out.get(x | (p << d), 0) ^ t
        out[x | (r << d)] = out.get(x | (r << d), 0) ^ t
    return out


def _synth(q: Quantifier, F: Orientation, T: Orientation, validate: bool) -> DenseOrientation:
    if F.dim != T.dim:
        raise GadgetError(f"sub-gadgets have dimensions {F.dim} and {T.dim}")
    if validate:
        for name, G in (("F", F), ("T", T)):
            bad = [k for k, ok in gadget_invariants(G).items() if not ok]
            if bad:
                raise GadgetError(f"sub-gadget {name} violates: {', '.join(bad)}")
    w = WIRINGS[q]
    d = F.dim
    inner = {"F": as_array(F), "T": as_array(T), "U": np.arange(1 << d, dtype=np.int64)}
    out = np.concatenate([inner[w.block(p)] | (p << d) for p in range(1 << w.width)])
    for v, t in _red_toggles(q, d).items():
        # a red edge must be flippable: its endpoints differ only in the edge's own bit
        u = v ^ t
        if int(out[v] ^ out[u]) != t:
            raise AssertionError(f"red edge at vertex {v} is not flippable")
    for v, t in _red_toggles(q, d).items():
        out[v] ^= t
    return DenseOrientation(out, d + w.width, validate=False)


def synth_forall(F: Orientation, T: Orientation, validate: bool = True) -> DenseOrientation:
    """Gadget whose extreme 1-edges are in phase iff they are in both F and T."""
    return _synth(Quantifier.FORALL, F, T, validate)


def synth_exists(F: Orientation, T: Orientation, validate: bool = True) -> DenseOrientation:
    """Gadget whose extreme 1-edges are in phase iff they are in F or in T."""
    return _synth(Quantifier.EXISTS, F, T, validate)


@dataclass(frozen=True)
class LevelBlock:
    level: int  # 0 is the outermost quantifier
    quantifier: Quantifier
    variable: int
    first_dim: int  # 1-based
    width: int

    @property
    def offset(self) -> int:
        """Number of cube dimensions below this block."""
        return self.first_dim - 1


@dataclass(frozen=True)
class GadgetLayout:
    total_dim: int
    levels: tuple[LevelBlock, ...]

    def owner(self, dim: int) -> int | None:
        """Level owning cube dimension ``dim``; None for the base block."""
        for b in self.levels:
            if b.first_dim <= dim < b.first_dim + b.width:
                return b.level
        return None


def build_layout(inst: QbfInstance) -> GadgetLayout:
    start = BASE_DIM + 1
    blocks = []
    for k in reversed(range(inst.num_vars)):
        q = inst.quantifiers[k]
        width = WIRINGS[q].width
        blocks.append(LevelBlock(k, q, inst.order[k], start, width))
        start += width
    return GadgetLayout(start - 1, tuple(sorted(blocks, key=lambda b: b.level)))


def succinct_outmap(inst: QbfInstance, layout: GadgetLayout, v: int) -> int:
    """Outmap of ``v`` in the reduction cube, without building any gadget.

    Walks from the outermost level inward. A uniform block ends the descent;
    otherwise the block decides the current variable and the level's red
    edges may toggle one outer bit.
    """
    out = 0
    values: dict[int, bool] = {}
    for blk in layout.levels:
        d = blk.offset
        p = (v >> d) & full_mask(blk.width)
        out |= (p << d) ^ _red_toggles(blk.quantifier, d).get(v & full_mask(d + blk.width), 0)
        kind = WIRINGS[blk.quantifier].block(p)
        if kind == "U":
            return out | (v & full_mask(d))
        values[blk.variable] = kind == "T"
    gadget = TRUE_GADGET if inst.matrix(values) else range(1 << BASE_DIM)
    return out | gadget[v & full_mask(BASE_DIM)]


def dense_reduction(inst: QbfInstance, validate: bool = True) -> DenseOrientation:
    """The same cube built bottom-up with the dense gadget synthesizers."""
    values: dict[int, bool] = {}

    def build(k: int) -> DenseOrientation:
        if k == inst.num_vars:
            return base_gadget(inst.matrix(values))
        subs = []
        for b in (False, True):
            values[inst.order[k]] = b
            subs.append(build(k + 1))
        return _synth(inst.quantifiers[k], subs[0], subs[1], validate)

    return build(0)


@dataclass(frozen=True)
class ReductionOutput:
    oracle: OracleOrientation
    e: Edge
    e_prime: Edge
    layout: GadgetLayout


def reduce_to_2ip(inst: QbfInstance) -> ReductionOutput:
    layout = build_layout(inst)
    oracle = OracleOrientation(layout.total_dim, lambda v: succinct_outmap(inst, layout, v))
    e, f = extreme_edges(layout.total_dim)
    return ReductionOutput(oracle, e, f, layout)


def decide_2ip(out: ReductionOutput) -> bool:
    """Answer the phase query on the reduction output via a dense partition."""
    return in_phase(out.oracle.materialize(), out.e, out.e_prime)
