"""Orientations of the n-cube given by their outmaps.

``O.outmap(v)`` has bit ``i - 1`` set when the i-edge at ``v`` leaves ``v``.
"""

from __future__ import annotations

import enum
from collections import deque
from typing import Callable, Iterable

import numpy as np

from .cube import N_MAX, Edge, Face, bit, check_dim, deposit, extract, full_mask, parse_bits, render_bits
from .errors import DimensionError, FaceError, InvalidOrientation, ParseError, ResourceError

EdgeSet = frozenset  # of Edge


class Orientation:
    """Common interface: ``dim`` and ``outmap(v)``."""

    dim: int

    def outmap(self, v: int) -> int:
        raise NotImplementedError

    def materialize(self) -> DenseOrientation:
        raise NotImplementedError


class DenseOrientation(Orientation):
    """Outmaps stored in a flat array indexed by vertex."""

    def __init__(self, outmaps, n: int | None = None, validate: bool = True):
        arr = np.array(outmaps, dtype=np.int64)
        if arr.ndim != 1 or len(arr) == 0 or len(arr) & (len(arr) - 1):
            raise DimensionError("outmap array length must be a power of two")
        size_n = len(arr).bit_length() - 1
        if n is None:
            n = size_n
        if n != size_n or n < 1:
            raise DimensionError(f"{len(arr)} outmaps do not describe a cube of dimension {n}")
        check_dim(n)
        if np.any((arr < 0) | (arr > full_mask(n))):
            raise InvalidOrientation("outmap value out of range")
        arr.flags.writeable = False
        self.dim = n
        self._out = arr
        if validate:
            bad = consistency_violation(self)
            if bad is not None:
                raise InvalidOrientation(
                    f"edge {bad.render(n)} is claimed by both or neither endpoint", edge=bad
                )

    @property
    def array(self) -> np.ndarray:
        return self._out

    def outmap(self, v: int) -> int:
        return int(self._out[v])

    def materialize(self) -> DenseOrientation:
        return self

    def __eq__(self, other):
        if not isinstance(other, DenseOrientation):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self._out, other._out)

    def __hash__(self):
        return hash((self.dim, self._out.tobytes()))

    def __repr__(self):
        body = " ".join(render_bits(int(x), self.dim) for x in self._out[:8])
        more = " ..." if len(self._out) > 8 else ""
        return f"DenseOrientation(n={self.dim}: {body}{more})"


class OracleOrientation(Orientation):
    """Orientation computed on demand by a pure function of the vertex.

    Results are never cached; call ``materialize`` to get a dense copy.
    """

    def __init__(self, n: int, fn: Callable[[int], int]):
        if n < 1:
            raise DimensionError(f"dimension {n} < 1")
        self.dim = n
        self._fn = fn

    def outmap(self, v: int) -> int:
        return int(self._fn(v))

    def materialize(self) -> DenseOrientation:
        if self.dim > N_MAX:
            raise ResourceError(f"refusing to materialize 2^{self.dim} outmaps")
        return DenseOrientation([self._fn(v) for v in range(1 << self.dim)], self.dim, validate=False)

    def __repr__(self):
        return f"OracleOrientation(n={self.dim})"


def as_array(O: Orientation) -> np.ndarray:
    """Dense outmap array of ``O``; oracles are materialized (not cached)."""
    if isinstance(O, DenseOrientation):
        return O.array
    return O.materialize().array


def consistency_violation(O: Orientation) -> Edge | None:
    """First edge (by base, then dimension) whose endpoints disagree, or None."""
    out = as_array(O)
    n = O.dim
    verts = np.arange(1 << n, dtype=np.int64)
    worst = None
    for i in range(1, n + 1):
        b = bit(i)
        lower = verts[(verts & b) == 0]
        bad = ((out[lower] ^ out[lower | b]) & b) == 0
        if bad.any():
            cand = Edge(int(lower[np.argmax(bad)]), i)
            if worst is None or cand < worst:
                worst = cand
    return worst


def check_consistency(O: Orientation) -> bool:
    return consistency_violation(O) is None


def _check_edges(S: Iterable[Edge], n: int) -> list[Edge]:
    S = list(S)
    for e in S:
        if not 1 <= e.dim <= n or e.top >= (1 << n):
            raise DimensionError(f"edge {e} is not an edge of Q_{n}")
    return S


def flip(O: Orientation, S: Iterable[Edge]) -> Orientation:
    """Reverse every edge in ``S``. The result need not be a USO."""
    n = O.dim
    S = _check_edges(S, n)
    if isinstance(O, DenseOrientation):
        out = O.array.copy()
        for e in S:
            b = bit(e.dim)
            out[e.base] ^= b
            out[e.top] ^= b
        return DenseOrientation(out, n, validate=False)
    toggles: dict[int, int] = {}
    for e in S:
        b = bit(e.dim)
        toggles[e.base] = toggles.get(e.base, 0) ^ b
        toggles[e.top] = toggles.get(e.top, 0) ^ b
    return OracleOrientation(n, lambda v, f=O.outmap: f(v) ^ toggles.get(v, 0))


def restrict(O: Orientation, f: Face) -> DenseOrientation:
    """Orientation of the subcube ``f``, spanned dimensions relabeled 1..dim(f)."""
    if f.n != O.dim:
        raise FaceError(f"face of Q_{f.n} used on Q_{O.dim}")
    if f.dim == 0:
        raise FaceError("cannot restrict to a 0-dimensional face")
    free = f.free_mask
    out = [extract(O.outmap(f.fixed_values | deposit(x, free)) & free, free) for x in range(1 << f.dim)]
    return DenseOrientation(out, f.dim, validate=False)


class Combing(str, enum.Enum):
    DOWN = "down"
    UP = "up"
    NOT_COMBED = "not-combed"


def is_combed(O: Orientation, i: int) -> Combing:
    if not 1 <= i <= O.dim:
        raise DimensionError(f"dimension {i} outside 1..{O.dim}")
    out = as_array(O)
    b = bit(i)
    verts = np.arange(1 << O.dim, dtype=np.int64)
    points_up = (out & b) != (verts & b)
    if not points_up.any():
        return Combing.DOWN
    if points_up.all():
        return Combing.UP
    return Combing.NOT_COMBED


def is_acyclic(O: Orientation) -> bool:
    """Kahn's algorithm on the arcs v -> v^bit(i) with outmap(v)_i = 1."""
    n = O.dim
    if n > N_MAX:
        raise ResourceError(f"dimension {n} too large for a cycle check")
    out = as_array(O)
    size = 1 << n
    verts = np.arange(size, dtype=np.int64)
    indeg = np.zeros(size, dtype=np.int64)
    for i in range(n):
        b = 1 << i
        tails = verts[(out & b) != 0]
        np.add.at(indeg, tails ^ b, 1)
    indeg = indeg.tolist()
    outl = out.tolist()
    queue = deque(v for v in range(size) if indeg[v] == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        m = outl[v]
        while m:
            low = m & -m
            m ^= low
            w = v ^ low
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == size


# -- text formats -----------------------------------------------------------


def store(O: Orientation) -> str:
    n = O.dim
    lines = [f"uso {n}"]
    lines.extend(render_bits(int(x), n) for x in as_array(O))
    return "\n".join(lines) + "\n"


def _parse_one(lines: list[str], start: int) -> tuple[DenseOrientation, int]:
    header = lines[start].split()
    if len(header) != 2 or header[0] != "uso":
        raise ParseError(f"expected header 'uso <n>', got {lines[start]!r}", start + 1)
    try:
        n = int(header[1])
    except ValueError:
        raise ParseError(f"bad dimension {header[1]!r}", start + 1) from None
    if not 1 <= n <= N_MAX:
        raise ParseError(f"dimension {n} outside 1..{N_MAX}", start + 1)
    size = 1 << n
    body = lines[start + 1 : start + 1 + size]
    if len(body) < size:
        raise ParseError(f"expected {size} outmap lines, found {len(body)}", start + 1 + len(body) + 1)
    out = []
    for k, line in enumerate(body):
        lineno = start + 2 + k
        s = line.strip()
        if len(s) != n:
            raise ParseError(f"outmap has length {len(s)}, expected {n}", lineno)
        if any(c not in "01" for c in s):
            raise ParseError(f"outmap {s!r} contains characters other than 0/1", lineno)
        out.append(parse_bits(s))
    O = DenseOrientation(out, n, validate=False)
    bad = consistency_violation(O)
    if bad is not None:
        raise InvalidOrientation(
            f"edge {bad.render(n)} is claimed by both or neither endpoint",
            edge=bad,
            line=start + 2 + bad.base,
        )
    return O, start + 1 + size


def _content_lines(text: str) -> list[str]:
    lines = text.split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    return lines


def load(text: str) -> DenseOrientation:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty input", 1)
    O, end = _parse_one(lines, 0)
    if end != len(lines):
        raise ParseError("trailing content after the last outmap", end + 1)
    return O


def load_many(text: str) -> list[DenseOrientation]:
    """Parse concatenated .uso documents."""
    lines = _content_lines(text)
    out = []
    pos = 0
    while pos < len(lines):
        O, pos = _parse_one(lines, pos)
        out.append(O)
    return out


def store_edges(S: Iterable[Edge], n: int) -> str:
    return "".join(f"{render_bits(e.base, n)} {e.dim}\n" for e in sorted(S))


def load_edges(text: str, n: int | None = None) -> frozenset:
    """Parse an edge-set file: one ``<base-bits> <dim>`` per line."""
    out = set()
    for lineno, line in enumerate(text.split("\n"), start=1):
        s = line.strip()
        if not s:
            continue
        parts = s.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<bits> <dim>', got {s!r}", lineno)
        bits, d = parts
        if n is None:
            n = len(bits)
        if len(bits) != n:
            raise ParseError(f"vertex {bits!r} does not have {n} bits", lineno)
        try:
            base = parse_bits(bits)
            dim = int(d)
        except (ParseError, ValueError):
            raise ParseError(f"bad edge line {s!r}", lineno) from None
        if not 1 <= dim <= n:
            raise ParseError(f"dimension {dim} outside 1..{n}", lineno)
        if base & bit(dim):
            raise ParseError(f"base {bits} is not the lower endpoint of its {dim}-edge", lineno)
        out.add(Edge(base, dim))
    return frozenset(out)
