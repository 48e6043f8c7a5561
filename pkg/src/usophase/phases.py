"""Phases of a USO.

Two i-edges are in direct phase when a vertex of one and a vertex of the
other, on opposite sides of dimension i, agree on every other dimension
they span. Phases are the classes of the transitive closure, and flipping
a subset of E_i keeps the USO property exactly when it is a union of
i-phases.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .cube import Edge, Face, bit, face_sweep, neighbors_in_Ni
from .errors import (
    ArgumentError,
    NotAMatching,
    NotUnionOfPhases,
    NotUsoError,
    ParseError,
    ResourceError,
)
from .orientation import DenseOrientation, Orientation, as_array, flip
from .recognition import is_uso_fast

DEFAULT_BFS_BUDGET = 1 << 22


class UnionFind:
    """Disjoint sets over 0..size-1, union by size, path compression.

    ``smallest(x)`` is the least element of the set holding ``x``.
    """

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size
        self.least = list(range(size))

    def find(self, x: int) -> int:
        root = x
        parent = self.parent
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.least[ra] = min(self.least[ra], self.least[rb])
        return True

    def smallest(self, x: int) -> int:
        return self.least[self.find(x)]


@dataclass(frozen=True)
class DirectPhaseCertificate:
    v: int
    w: int
    dim: int


@dataclass(eq=False)
class PhasePartition:
    """For each computed dimension i, ``labels[i][base]`` is the base of the
    smallest edge in the phase of the i-edge at ``base`` (-1 for bases that
    are not canonical i-edge bases).
    """

    n: int
    labels: dict[int, np.ndarray]
    pair_checks: int = field(default=0)

    def __eq__(self, other):
        if not isinstance(other, PhasePartition):
            return NotImplemented
        return (
            self.n == other.n
            and self.labels.keys() == other.labels.keys()
            and all(np.array_equal(self.labels[i], other.labels[i]) for i in self.labels)
        )

    @property
    def dims(self) -> list[int]:
        return sorted(self.labels)

    def _label(self, e: Edge) -> int:
        try:
            return int(self.labels[e.dim][e.base])
        except KeyError:
            raise ArgumentError(f"dimension {e.dim} was not computed") from None

    def same_phase(self, e: Edge, f: Edge) -> bool:
        if e.dim != f.dim:
            return False
        return self._label(e) == self._label(f)

    def class_of(self, e: Edge) -> tuple[Edge, ...]:
        lab = self.labels[e.dim]
        rep = self._label(e)
        return tuple(Edge(int(b), e.dim) for b in np.flatnonzero(lab == rep))

    def classes(self, i: int) -> list[tuple[Edge, ...]]:
        lab = self.labels[i]
        bases = np.flatnonzero(lab >= 0)
        groups: dict[int, list[Edge]] = {}
        for b in bases.tolist():
            groups.setdefault(int(lab[b]), []).append(Edge(b, i))
        return [tuple(groups[r]) for r in sorted(groups)]

    def num_classes(self, i: int | None = None) -> int:
        if i is not None:
            lab = self.labels[i]
            return len(np.unique(lab[lab >= 0]))
        return sum(self.num_classes(j) for j in self.labels)

    def to_text(self) -> str:
        lines = []
        for i in self.dims:
            cls = self.classes(i)
            lines.append(f"dim {i} classes {len(cls)}")
            for c in cls:
                lines.append(" ".join(e.render(self.n) for e in c))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, n: int) -> PhasePartition:
        labels: dict[int, np.ndarray] = {}
        current = None
        expected = 0
        seen = 0
        for lineno, line in enumerate(text.splitlines(), start=1):
            s = line.strip()
            if not s:
                continue
            parts = s.split()
            if parts[0] == "dim":
                if current is not None and seen != expected:
                    raise ParseError(f"dimension {current} declared {expected} classes, found {seen}", lineno)
                if len(parts) != 4 or parts[2] != "classes":
                    raise ParseError(f"bad header {s!r}", lineno)
                current, expected, seen = int(parts[1]), int(parts[3]), 0
                labels[current] = _empty_labels(n)
                continue
            if current is None:
                raise ParseError("class line before any 'dim' header", lineno)
            members = []
            for tok in parts:
                e, width = Edge.parse(tok)
                if width != n or e.dim != current:
                    raise ParseError(f"edge {tok} does not belong to dimension {current} of Q_{n}", lineno)
                members.append(e.base)
            rep = min(members)
            for b in members:
                labels[current][b] = rep
            seen += 1
        if current is not None and seen != expected:
            raise ParseError(f"dimension {current} declared {expected} classes, found {seen}")
        return cls(n, labels)


def _empty_labels(n: int) -> np.ndarray:
    return np.full(1 << n, -1, dtype=np.int64)


def _partition_from_pairs(n: int, dims: Sequence[int], pairs: Iterable[tuple[np.ndarray, np.ndarray, np.ndarray]], checks: int) -> PhasePartition:
    forests = {i: UnionFind(1 << n) for i in dims}
    for d, a, b in pairs:
        for i in dims:
            sel = d == bit(i)
            if not sel.any():
                continue
            uf = forests[i]
            for x, y in zip(a[sel].tolist(), b[sel].tolist()):
                if x != y:
                    uf.union(x, y)
    labels = {}
    verts = np.arange(1 << n, dtype=np.int64)
    for i in dims:
        uf = forests[i]
        lab = _empty_labels(n)
        for v in verts[(verts & bit(i)) == 0].tolist():
            lab[v] = uf.smallest(v)
        labels[i] = lab
    return PhasePartition(n, labels, checks)


def _resolve_dims(n: int, dims) -> list[int]:
    if dims is None:
        return list(range(1, n + 1))
    dims = sorted(set(dims))
    for i in dims:
        if not 1 <= i <= n:
            raise ArgumentError(f"dimension {i} outside 1..{n}")
    return dims


def _certified(mins, maxs, d):
    """Filter pairs whose difference mask D has a single bit; return (D, base_a, base_b)."""
    single = (d & (d - 1)) == 0
    d = d[single]
    return d, mins[single] & ~d, maxs[single] & ~d


def compute_phases_naive(O: Orientation, dims=None) -> PhasePartition:
    """Certificates from all vertex pairs, then connected components."""
    out = as_array(O)
    n = O.dim
    dims = _resolve_dims(n, dims)
    size = len(out)
    verts = np.arange(size, dtype=np.int64)
    pairs = []
    checks = 0
    for v in range(size - 1):
        ws = verts[v + 1 :]
        d = (v ^ ws) & (out[v] ^ out[ws])
        checks += len(ws)
        if np.any(d == 0):
            raise NotUsoError("orientation is not a USO")
        vs = np.full(len(ws), v, dtype=np.int64)
        pairs.append(_certified(vs, ws, d))
    return _partition_from_pairs(n, dims, pairs, checks)


def _fast_chunk(out, chunk):
    _, mins, maxs = chunk
    d = (mins ^ maxs) & (out[mins] ^ out[maxs])
    if np.any(d == 0):
        return len(mins), None
    return len(mins), _certified(mins, maxs, d)


def compute_phases_fast(O: Orientation, dims=None, jobs: int = 1) -> PhasePartition:
    """Certificates only from the min/max pair of every face (3^n - 2^n pairs).

    The face extremes are exactly the pairs the pseudo-USO recognition test
    inspects, and the closure of certificates over any pair set that decides
    the USO property yields the full phase partition.
    """
    out = as_array(O)
    n = O.dim
    dims = _resolve_dims(n, dims)
    chunks = list(face_sweep(n, chunks=jobs))
    if jobs > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda c: _fast_chunk(out, c), chunks))
    else:
        results = [_fast_chunk(out, c) for c in chunks]
    if any(r[1] is None for r in results):
        raise NotUsoError("orientation is not a USO")
    checks = sum(r[0] for r in results)
    return _partition_from_pairs(n, dims, [r[1] for r in results], checks)


def compute_phases_bounded(O: Orientation, i: int, max_distance: int) -> PhasePartition:
    """i-phases using only direct-phase pairs of edges at N_i distance <= max_distance."""
    out = as_array(O)
    n = O.dim
    size = len(out)
    verts = np.arange(size, dtype=np.int64)
    b = bit(i)
    pairs = []
    for v in range(size - 1):
        ws = verts[v + 1 :]
        d = (v ^ ws) & (out[v] ^ out[ws])
        sel = d == b
        ws = ws[sel]
        dist = np.array([bin(x).count("1") for x in ((v ^ ws) & ~b).tolist()], dtype=np.int64)
        ws = ws[dist <= max_distance]
        pairs.append((np.full(len(ws), b), np.full(len(ws), v & ~b), ws & ~b))
    return _partition_from_pairs(n, [i], pairs, 0)


# -- single-pair and single-edge queries ------------------------------------


def certificate_from_pair(O: Orientation, v: int, w: int) -> DirectPhaseCertificate | None:
    if v == w:
        raise ArgumentError("certificate needs two distinct vertices")
    d = (v ^ w) & (O.outmap(v) ^ O.outmap(w))
    if d and not d & (d - 1):
        return DirectPhaseCertificate(v, w, d.bit_length())
    return None


def certifying_pairs(O: Orientation, e: Edge, f: Edge) -> list[tuple[int, int]]:
    """Opposing endpoint pairs of two i-edges that certify direct phase."""
    if e.dim != f.dim:
        raise ArgumentError(f"edges of dimensions {e.dim} and {f.dim}")
    if e == f:
        raise ArgumentError("direct phase needs two distinct edges")
    found = []
    for v, w in ((e.base, f.top), (e.top, f.base)):
        c = certificate_from_pair(O, v, w)
        if c is not None and c.dim == e.dim:
            found.append((v, w))
    return found


def in_direct_phase(O: Orientation, e: Edge, f: Edge) -> bool:
    return bool(certifying_pairs(O, e, f))


def is_flippable(O: Orientation, e: Edge) -> bool:
    return (O.outmap(e.base) ^ O.outmap(e.top)) == bit(e.dim)


def direct_phase_partners(O: Orientation, e: Edge) -> Iterable[Edge]:
    """All i-edges in direct phase with ``e``, found by scanning every vertex
    on the other side of dimension i (2^n outmap queries)."""
    n = O.dim
    b = bit(e.dim)
    for v in (e.base, e.top):
        ov = O.outmap(v)
        side = v & b
        for w in range(1 << n):
            if (w & b) == side:
                continue
            if ((v ^ w) & (ov ^ O.outmap(w))) == b:
                partner = Edge(w & ~b, e.dim)
                if partner != e:
                    yield partner


def phase_bfs(O: Orientation, e: Edge, target: Edge | None = None, budget: int = DEFAULT_BFS_BUDGET) -> tuple[bool, set[Edge]]:
    """Breadth-first search over direct phase starting at ``e``.

    Stops early when ``target`` is reached. Returns ``(reached, visited)``;
    raises ResourceError when more than ``budget`` edges would be visited.
    """
    seen = {e}
    queue = deque([e])
    while queue:
        cur = queue.popleft()
        if cur == target:
            return True, seen
        for nxt in direct_phase_partners(O, cur):
            if nxt not in seen:
                if len(seen) >= budget:
                    raise ResourceError(f"phase search exceeded {budget} edges")
                seen.add(nxt)
                if nxt == target:
                    return True, seen
                queue.append(nxt)
    return target is None, seen


def in_phase(O: Orientation, e: Edge, f: Edge, budget: int = DEFAULT_BFS_BUDGET) -> bool:
    """Decide whether two edges lie in the same phase.

    Dense orientations use the face sweep; oracles are searched edge by
    edge, keeping only the visited set in memory.
    """
    if e.dim != f.dim:
        raise ArgumentError(f"edges of dimensions {e.dim} and {f.dim}")
    if e == f:
        return True
    if isinstance(O, DenseOrientation):
        return compute_phases_fast(O, dims=[e.dim]).same_phase(e, f)
    return phase_bfs(O, e, f, budget)[0]


def _single_dim(S: Iterable[Edge]) -> tuple[int | None, set[Edge]]:
    S = set(S)
    ds = {e.dim for e in S}
    if len(ds) > 1:
        raise ArgumentError(f"edge set spans dimensions {sorted(ds)}")
    return (ds.pop() if ds else None), S


def is_union_of_phases(O: Orientation, S: Iterable[Edge], partition: PhasePartition | None = None) -> bool:
    i, S = _single_dim(S)
    if i is None:
        return True
    if partition is None or i not in partition.labels:
        partition = compute_phases_fast(O, dims=[i])
    return _closed_under(partition, i, S)


def _closed_under(partition: PhasePartition, i: int, S: set[Edge]) -> bool:
    lab = partition.labels[i]
    chosen = np.zeros(len(lab), dtype=bool)
    for e in S:
        chosen[e.base] = True
    reps_in = set(lab[chosen].tolist())
    members = np.isin(lab, list(reps_in)) & (lab >= 0)
    return bool(np.array_equal(members, chosen))


def phase_connected_in_Ni(O: Orientation, P: Iterable[Edge]) -> bool:
    """Whether the edges of ``P`` induce a connected subgraph of N_i."""
    P = set(P)
    if not P:
        return True
    n = O.dim
    start = next(iter(P))
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nb in neighbors_in_Ni(cur, n):
            if nb in P and nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return len(seen) == len(P)


def is_hypervertex(O: Orientation, f: Face) -> bool:
    """Every vertex of ``f`` orients each non-spanned dimension the same way."""
    if f.n != O.dim:
        raise ArgumentError(f"face of Q_{f.n} used on Q_{O.dim}")
    out = as_array(O)
    verts = np.array(f.vertices(), dtype=np.int64)
    vals = out[verts] & f.fixed_mask
    return bool(np.all(vals == vals[0]))


def is_matching(H: Iterable[Edge]) -> bool:
    used = set()
    for e in H:
        for v in e.endpoints:
            if v in used:
                return False
            used.add(v)
    return True


def is_union_of_phases_multi(O: Orientation, H: Iterable[Edge], partition: PhasePartition | None = None) -> bool:
    """Every per-dimension part of ``H`` is a union of phases."""
    H = set(H)
    by_dim: dict[int, set[Edge]] = {}
    for e in H:
        by_dim.setdefault(e.dim, set()).add(e)
    if not by_dim:
        return True
    if partition is None:
        partition = compute_phases_fast(O, dims=list(by_dim))
    return all(_closed_under(partition, i, S) for i, S in by_dim.items())


def flip_matching_checked(O: Orientation, H: Iterable[Edge], partition: PhasePartition | None = None) -> Orientation:
    """Flip a matching that must be a union of phases.

    The outcome is cross-checked against the face sweep on the flipped
    orientation; a disagreement means a matching flipped into a USO
    without being a union of phases, and raises AssertionError.
    """
    H = set(H)
    if not is_matching(H):
        raise NotAMatching("edge set shares a vertex")
    union = is_union_of_phases_multi(O, H, partition)
    result = flip(O, H)
    uso = is_uso_fast(result)
    if uso != union:
        raise AssertionError(
            f"matching flip disagrees with phases (union of phases={union}, flipped is USO={uso})"
        )
    if not union:
        raise NotUnionOfPhases("matching is not a union of phases")
    return result
