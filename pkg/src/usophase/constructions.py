"""USO generators and transformations, plus the phase-flip Markov chain."""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .cube import Face, bit, check_dim, deposit, extract, full_mask
from .errors import ArgumentError, NotHypervertex, NotUsoError, ResourceError
from .orientation import DenseOrientation, Orientation, as_array, flip
from .phases import compute_phases_fast, is_hypervertex
from .recognition import is_uso_fast

ENUMERATE_MAX = 3


def uniform(n: int) -> DenseOrientation:
    """Every edge points to the lower facet of its dimension: O(v) = v."""
    check_dim(n)
    return DenseOrientation(np.arange(1 << n, dtype=np.int64), n, validate=False)


def schurr(n: int) -> DenseOrientation:
    """S^n(v)_i = v_i xor v_{i+1} for i < n, and S^n(v)_n = v_n."""
    check_dim(n)
    v = np.arange(1 << n, dtype=np.int64)
    top = bit(n)
    out = (v ^ (v >> 1)) & (full_mask(n) & ~top) | (v & top)
    return DenseOrientation(out, n, validate=False)


def schurr_recursive(n: int) -> DenseOrientation:
    """Same cube built recursively: S^(n-1) below, S^(n-1) with its (n-1)-edges
    flipped above, n-edges combed downwards."""
    check_dim(n)
    if n == 1:
        return DenseOrientation([0, 1], 1, validate=False)
    lower = schurr_recursive(n - 1).array
    upper = lower ^ bit(n - 1)
    top = bit(n)
    return DenseOrientation(np.concatenate([lower, upper | top]), n, validate=False)


def replace_hypervertex(O: Orientation, f: Face, inner: Orientation) -> DenseOrientation:
    """Swap the orientation inside hypervertex ``f`` for the USO ``inner``."""
    if not is_hypervertex(O, f):
        raise NotHypervertex(f"face {f.render()} is not a hypervertex")
    if inner.dim != f.dim:
        raise ArgumentError(f"replacement has dimension {inner.dim}, face has {f.dim}")
    if not is_uso_fast(inner):
        raise NotUsoError("replacement orientation is not a USO")
    out = as_array(O).copy()
    free = f.free_mask
    for v in f.vertices():
        out[v] = (out[v] & f.fixed_mask) | deposit(inner.outmap(extract(v, free)), free)
    return DenseOrientation(out, O.dim, validate=False)


def partial_swap(O: Orientation, j: int) -> DenseOrientation:
    """Exchange, across dimension j, the subgraphs induced by the endpoints
    of upward j-edges.

    With W the lower endpoints of j-edges pointing up, every non-j edge with
    both endpoints in W trades orientation with its copy in the upper
    j-facet. j-edges and all other edges keep their orientation.
    """
    if not is_uso_fast(O):
        raise NotUsoError("partial swap needs a USO")
    n = O.dim
    if not 1 <= j <= n:
        raise ArgumentError(f"dimension {j} outside 1..{n}")
    src = as_array(O)
    out = src.copy()
    b = bit(j)
    verts = np.arange(1 << n, dtype=np.int64)
    in_w = ((verts & b) == 0) & ((src & b) != 0)
    for u in np.flatnonzero(in_w).tolist():
        for k in range(1, n + 1):
            if k == j:
                continue
            kb = bit(k)
            if in_w[u ^ kb]:
                up = u | b
                out[u] = (out[u] & ~kb) | (src[up] & kb)
                out[up] = (out[up] & ~kb) | (src[u] & kb)
    return DenseOrientation(out, n, validate=False)


def enumerate_usos(n: int) -> Iterator[DenseOrientation]:
    """Every USO of Q_n, lexicographic in the outmap array.

    Backtracks vertex by vertex; bits toward already placed neighbours are
    forced and every candidate is checked against the Szabo-Welzl condition
    with all earlier vertices.
    """
    if n > ENUMERATE_MAX:
        raise ResourceError(f"enumeration is limited to n <= {ENUMERATE_MAX}")
    check_dim(n)
    size = 1 << n
    full = full_mask(n)
    out = [0] * size

    def place(v):
        if v == size:
            yield DenseOrientation(list(out), n, validate=False)
            return
        forced_mask = v  # lower neighbours exist exactly in the dimensions set in v
        forced = 0
        m = v
        while m:
            low = m & -m
            m ^= low
            if not out[v ^ low] & low:
                forced |= low
        for c in range(full + 1):
            if c & forced_mask != forced:
                continue
            if all((v ^ w) & (c ^ out[w]) for w in range(v)):
                out[v] = c
                yield from place(v + 1)

    yield from place(0)


def markov_step(O: Orientation, rng) -> Orientation:
    """One move of the phase-flip chain.

    Draw a dimension i uniformly, then flip each i-phase independently with
    probability 1/2. Both choices go through ``rng.integers`` only.
    """
    n = O.dim
    i = int(rng.integers(1, n + 1))
    classes = compute_phases_fast(O, dims=[i]).classes(i)
    picks = rng.integers(0, 2, size=len(classes))
    S = [e for c, take in zip(classes, picks) if take for e in c]
    return flip(O, S) if S else O


def sample_uniform(n: int, steps: int, seed: int) -> Orientation:
    """Run the chain ``steps`` times from the uniform USO with a seeded PCG64."""
    if steps < 1:
        raise ArgumentError("steps must be >= 1")
    rng = np.random.default_rng(seed)
    O: Orientation = uniform(n)
    for _ in range(steps):
        O = markov_step(O, rng)
    return O
