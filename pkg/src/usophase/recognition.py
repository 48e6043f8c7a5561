"""Unique sink recognition: sink counting, the all-pairs test, and the face sweep."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cube import Face, face_order_keys, face_sweep, full_mask
from .orientation import Orientation, as_array


@dataclass(frozen=True)
class Witness:
    """A face whose extreme vertices break the Szabo-Welzl condition."""

    face: Face
    v: int
    w: int

    def describe(self, O: Orientation) -> str:
        from .cube import render_bits

        n = O.dim
        return (
            f"face {self.face.render()}: vertices {render_bits(self.v, n)} and "
            f"{render_bits(self.w, n)} have outmaps {render_bits(O.outmap(self.v), n)} and "
            f"{render_bits(O.outmap(self.w), n)}, equal on the spanned dimensions"
        )


@dataclass(frozen=True)
class SweepReport:
    is_uso: bool
    pair_checks: int
    witness: Witness | None


def count_sinks(O: Orientation, f: Face) -> int:
    out = as_array(O)
    verts = np.array(f.vertices(), dtype=np.int64)
    return int(np.count_nonzero((out[verts] & f.free_mask) == 0))


def is_uso_naive(O: Orientation) -> bool:
    """All 2^(n-1)(2^n - 1) vertex pairs against the Szabo-Welzl condition."""
    out = as_array(O)
    size = len(out)
    verts = np.arange(size, dtype=np.int64)
    for v in range(size - 1):
        ws = verts[v + 1 :]
        if np.any(((v ^ ws) & (out[v] ^ out[ws])) == 0):
            return False
    return True


def _sweep_chunk(out, n, chunk):
    frees, mins, maxs = chunk
    d = (mins ^ maxs) & (out[mins] ^ out[maxs])
    bad = np.flatnonzero(d == 0)
    if len(bad) == 0:
        return len(mins), None
    best = None
    # order keys depend on the free mask, so rank failures one free mask at a time
    bf, bm = frees[bad], mins[bad]
    for free in np.unique(bf):
        sel = bm[bf == free]
        keys = face_order_keys(n, int(free), sel)
        k = int(np.argmin(keys))
        cand = (int(keys[k]), int(free), int(sel[k]))
        if best is None or cand < best:
            best = cand
    return len(mins), best


def sweep_uso(O: Orientation, jobs: int = 1) -> SweepReport:
    """Compare the min and max vertex of every face of dimension >= 1.

    A non-USO contains a minimal bad face, which is a pseudo USO, and there
    the two extremes have equal outmaps; so these 3^n - 2^n checks decide
    the USO property. The reported witness is the first bad face in
    ``faces()`` order.
    """
    out = as_array(O)
    n = O.dim
    chunks = list(face_sweep(n, chunks=jobs))
    if jobs > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda c: _sweep_chunk(out, n, c), chunks))
    else:
        results = [_sweep_chunk(out, n, c) for c in chunks]
    checks = sum(r[0] for r in results)
    fails = [r[1] for r in results if r[1] is not None]
    if not fails:
        return SweepReport(True, checks, None)
    _, free, lo = min(fails)
    face = Face(n, full_mask(n) & ~free, lo)
    return SweepReport(False, checks, Witness(face, lo, lo | free))


def is_uso_fast(O: Orientation, jobs: int = 1) -> bool:
    return sweep_uso(O, jobs).is_uso


def is_uso(O: Orientation) -> bool:
    return sweep_uso(O).is_uso


def is_puso(O: Orientation) -> bool:
    """No unique global sink, but every proper face has exactly one sink."""
    n = O.dim
    out = as_array(O)
    full = full_mask(n)
    if int(np.count_nonzero(out == 0)) == 1:
        return False
    verts = np.arange(1 << n, dtype=np.int64)
    # sinks of face (free, fixed values) are the vertices with outmap & free == 0
    for free in range(full):
        sinks = verts[(out & free) == 0]
        counts = np.bincount(sinks & ~free & full, minlength=1 << n)
        anchors = verts[(verts & free) == 0]
        if np.any(counts[anchors] != 1):
            return False
    return True
