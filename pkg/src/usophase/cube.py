"""Vertices, faces and edges of the n-cube.

Vertices are plain ints. Dimension ``i`` (1-based, as in all external
text) lives in bit ``i - 1``, so dimension 1 is the least significant bit.
Bitstrings are rendered dimension 1 first: vertex 0b100 in Q_3 prints as
``"001"``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import ArgumentError, DimensionError, FaceError, ParseError

N_MAX = 24
# Largest n for which the full face sweep is precomputed and cached.
SWEEP_CACHE_MAX = 14


def bit(i: int) -> int:
    """Mask of dimension ``i`` (1-based)."""
    return 1 << (i - 1)


def full_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(x: int) -> int:
    return bin(x).count("1")


def dims_of(mask: int) -> list[int]:
    """1-based dimensions set in ``mask``, increasing."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def check_dim(n: int, limit: int = N_MAX) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1 or n > limit:
        raise DimensionError(f"dimension {n} outside 1..{limit}")


def render_bits(x: int, n: int) -> str:
    return "".join("1" if (x >> k) & 1 else "0" for k in range(n))


def parse_bits(s: str) -> int:
    if not s or any(c not in "01" for c in s):
        raise ParseError(f"not a bitstring: {s!r}")
    return sum(1 << k for k, c in enumerate(s) if c == "1")


def deposit(x: int, mask: int) -> int:
    """Scatter the low bits of ``x`` into the set positions of ``mask``."""
    out = 0
    k = 0
    pos = 0
    while mask:
        if mask & 1:
            if (x >> k) & 1:
                out |= 1 << pos
            k += 1
        mask >>= 1
        pos += 1
    return out


def extract(v: int, mask: int) -> int:
    """Gather the bits of ``v`` at the set positions of ``mask`` into the low bits."""
    out = 0
    k = 0
    pos = 0
    while mask:
        if mask & 1:
            if (v >> pos) & 1:
                out |= 1 << k
            k += 1
        mask >>= 1
        pos += 1
    return out


@dataclass(frozen=True, order=True)
class Edge:
    """Canonical i-edge ``{base, base ^ bit(dim)}`` with ``base`` in the lower i-facet."""

    base: int
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError(f"edge dimension {self.dim} < 1")
        if self.base < 0 or self.base & bit(self.dim):
            raise ArgumentError(f"edge base {self.base} is not in the lower {self.dim}-facet")

    @classmethod
    def at(cls, v: int, i: int) -> Edge:
        return cls(v & ~bit(i), i)

    @property
    def top(self) -> int:
        return self.base | bit(self.dim)

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.base, self.top

    def render(self, n: int) -> str:
        return f"{render_bits(self.base, n)}:{self.dim}"

    @classmethod
    def parse(cls, s: str) -> tuple[Edge, int]:
        """Parse ``"<base-bits>:<dim>"``; returns the edge and the bitstring length."""
        try:
            bits, d = s.strip().split(":")
            dim = int(d)
        except ValueError:
            raise ParseError(f"bad edge {s!r}, expected <bits>:<dim>") from None
        n = len(bits)
        if not 1 <= dim <= n:
            raise ParseError(f"edge dimension {dim} outside 1..{n}")
        base = parse_bits(bits)
        if base & bit(dim):
            raise ParseError(f"edge {s!r} is not canonical (base must have bit {dim} clear)")
        return cls(base, dim), n


def edge_canonical(v: int, i: int) -> Edge:
    return Edge.at(v, i)


def edges(n: int, i: int) -> Iterator[Edge]:
    """All canonical i-edges of Q_n in increasing base order."""
    b = bit(i)
    for v in range(1 << n):
        if not v & b:
            yield Edge(v, i)


def neighbors_in_Ni(e: Edge, n: int) -> set[Edge]:
    """i-edges sharing a 2-face with ``e``."""
    if not 1 <= e.dim <= n:
        raise DimensionError(f"edge dimension {e.dim} outside 1..{n}")
    return {Edge(e.base ^ bit(j), e.dim) for j in range(1, n + 1) if j != e.dim}


def ni_distance(e: Edge, f: Edge) -> int:
    """Distance of two same-dimension edges in the neighborhood graph."""
    return popcount(e.base ^ f.base)


@dataclass(frozen=True)
class Face:
    n: int
    fixed_mask: int
    fixed_values: int = 0

    def __post_init__(self):
        if self.fixed_mask & ~full_mask(self.n) or self.fixed_mask < 0:
            raise FaceError("fixed mask outside the cube")
        if self.fixed_values & ~self.fixed_mask:
            raise FaceError("fixed values set on free coordinates")

    @property
    def free_mask(self) -> int:
        return full_mask(self.n) & ~self.fixed_mask

    @property
    def dim(self) -> int:
        return self.n - popcount(self.fixed_mask)

    @property
    def spanned(self) -> list[int]:
        return dims_of(self.free_mask)

    def extremes(self) -> tuple[int, int]:
        return self.fixed_values, self.fixed_values | self.free_mask

    def __contains__(self, v: int) -> bool:
        return (v & self.fixed_mask) == self.fixed_values and 0 <= v < (1 << self.n)

    def vertices(self) -> list[int]:
        free = self.free_mask
        return [self.fixed_values | deposit(x, free) for x in range(1 << self.dim)]

    def contains_edge(self, e: Edge) -> bool:
        return bool(bit(e.dim) & self.free_mask) and e.base in self

    def edges(self, i: int) -> list[Edge]:
        if not bit(i) & self.free_mask:
            return []
        return [Edge(v, i) for v in self.vertices() if not v & bit(i)]

    def order_key(self) -> int:
        """Rank in the 0 < 1 < * lexicographic order, dimension 1 most significant."""
        key = 0
        for k in range(self.n):
            b = 1 << k
            digit = 2 if self.free_mask & b else (1 if self.fixed_values & b else 0)
            key = key * 3 + digit
        return key

    def render(self) -> str:
        out = []
        for k in range(self.n):
            b = 1 << k
            out.append("*" if self.free_mask & b else ("1" if self.fixed_values & b else "0"))
        return "".join(out)

    __str__ = render

    @classmethod
    def parse(cls, s: str) -> Face:
        s = s.strip()
        if not s or any(c not in "01*" for c in s):
            raise FaceError(f"bad face string {s!r}")
        fixed = values = 0
        for k, c in enumerate(s):
            if c != "*":
                fixed |= 1 << k
                if c == "1":
                    values |= 1 << k
        return cls(len(s), fixed, values)

    @classmethod
    def full(cls, n: int) -> Face:
        return cls(n, 0, 0)


def faces(n: int) -> Iterator[Face]:
    """Every face of Q_n once, lexicographic in the string over 0 < 1 < *."""
    check_dim(n)
    for chars in itertools.product("01*", repeat=n):
        yield Face.parse("".join(chars))


def face_extremes(f: Face) -> tuple[int, int]:
    return f.extremes()


def face_order_keys(n: int, free: int, mins: np.ndarray) -> np.ndarray:
    """Vectorized ``Face.order_key`` for faces with a common free mask."""
    key = np.zeros(len(mins), dtype=np.int64)
    for k in range(n):
        b = 1 << k
        digit = np.full(len(mins), 2, dtype=np.int64) if free & b else (mins >> k) & 1
        key = key * 3 + digit
    return key


def submasks(mask: int) -> np.ndarray:
    """All submasks of ``mask`` as an increasing int64 array."""
    positions = [p for p in range(mask.bit_length()) if (mask >> p) & 1]
    r = np.arange(1 << len(positions), dtype=np.int64)
    out = np.zeros_like(r)
    for k, p in enumerate(positions):
        out |= ((r >> k) & 1) << p
    return out


def _sweep_block(n: int, free: int) -> tuple[np.ndarray, np.ndarray]:
    mins = submasks(full_mask(n) & ~free)
    return mins, mins | free


@lru_cache(maxsize=SWEEP_CACHE_MAX + 1)
def _sweep_arrays(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    frees, mins, maxs = [], [], []
    for free in range(1, 1 << n):
        lo, hi = _sweep_block(n, free)
        mins.append(lo)
        maxs.append(hi)
        frees.append(np.full(len(lo), free, dtype=np.int64))
    arrays = tuple(np.concatenate(a) for a in (frees, mins, maxs))
    for a in arrays:
        a.flags.writeable = False
    return arrays


def face_sweep(n: int, chunks: int = 1) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Yield ``(free, min, max)`` arrays covering every face of dimension >= 1.

    Together the chunks hold exactly 3^n - 2^n min/max pairs. Small cubes
    come from a cached table split into ``chunks`` pieces; larger cubes are
    streamed one free mask at a time.
    """
    if n <= SWEEP_CACHE_MAX:
        frees, mins, maxs = _sweep_arrays(n)
        bounds = np.linspace(0, len(mins), max(1, chunks) + 1).astype(int)
        for a, b in zip(bounds[:-1], bounds[1:]):
            if b > a:
                yield frees[a:b], mins[a:b], maxs[a:b]
        return
    for free in range(1, 1 << n):
        lo, hi = _sweep_block(n, free)
        yield np.full(len(lo), free, dtype=np.int64), lo, hi
