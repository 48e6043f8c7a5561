"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The lines are collected in ``RESULTS`` and printed in an "acceptance
criteria" section at the end of the pytest run. Run alone with
``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import io
import itertools
import random
import sys
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import chain_samples  # noqa: E402
from oracles import count_usos_brute, qbf_brute  # noqa: E402

from usophase.cli import run  # noqa: E402
from usophase.constructions import enumerate_usos, markov_step, partial_swap, schurr, uniform  # noqa: E402
from usophase.cube import edges, faces, full_mask, ni_distance  # noqa: E402
from usophase.orientation import flip, store  # noqa: E402
from usophase.phases import (  # noqa: E402
    certificate_from_pair,
    compute_phases_bounded,
    compute_phases_fast,
    compute_phases_naive,
    in_direct_phase,
    in_phase,
    is_hypervertex,
    is_union_of_phases_multi,
    phase_connected_in_Ni,
)
from usophase.recognition import is_uso_fast  # noqa: E402
from usophase.reduction import (  # noqa: E402
    QbfInstance,
    Quantifier,
    build_layout,
    dense_reduction,
    eval_qbf,
    gadget_invariants,
    parse_qbf,
    reduce_to_2ip,
)

RESULTS: dict[int, str] = {}


def report(num, ok, detail):
    line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[num] = line
    assert ok, line


_cache: dict = {}


def q2():
    if "q2" not in _cache:
        _cache["q2"] = list(enumerate_usos(2))
    return _cache["q2"]


def q3():
    if "q3" not in _cache:
        _cache["q3"] = list(enumerate_usos(3))
    return _cache["q3"]


def sampled(n, count, seed):
    key = ("s", n, count, seed)
    if key not in _cache:
        _cache[key] = chain_samples(n, count, seed)
    return _cache[key]


def test_criterion_01_fast_equals_naive():
    brute_q3 = count_usos_brute(3)
    pools = {"Q2": q2(), "Q3": q3(), "Q4 sampled": sampled(4, 200, 4), "Q5 sampled": sampled(5, 50, 5)}
    bad = 0
    for O in itertools.chain(*pools.values()):
        if compute_phases_fast(O).to_text() != compute_phases_naive(O).to_text():
            bad += 1
    # the CLI paths on a few inputs as well
    for O in pools["Q5 sampled"][:5]:
        outs = []
        for flag in ("--fast", "--naive"):
            buf = io.StringIO()
            run(["phases", flag], io.StringIO(store(O)), buf, io.StringIO())
            outs.append(buf.getvalue())
        bad += outs[0] != outs[1]
    sizes = {k: len(v) for k, v in pools.items()}
    ok = bad == 0 and sizes["Q2"] == 12 and sizes["Q3"] == 744 == brute_q3
    report(1, ok, f"{sizes}, brute Q3 count {brute_q3}, mismatches {bad}")


def test_criterion_02_pair_check_counts():
    buf = io.StringIO()
    code = run(["bench", "-n", "10"], io.StringIO(), buf, io.StringIO())
    rows = [r.split(",") for r in buf.getvalue().strip().split("\n")[1:]]
    counts = {(op, int(n)): int(c) for op, n, c, _ in rows}
    bad = []
    for n in range(1, 11):
        if counts[("phases-fast", n)] > 3**n:
            bad.append(("phases-fast", n))
        if counts[("verify-fast", n)] > 3**n:
            bad.append(("verify-fast", n))
        if counts[("phases-naive", n)] != 2 ** (n - 1) * (2**n - 1):
            bad.append(("phases-naive", n))
    report(2, code == 0 and not bad, f"n=10: fast {counts[('phases-fast', 10)]} <= {3**10}, naive {counts[('phases-naive', 10)]}; violations {bad}")


def test_criterion_03_phase_connectedness():
    pool = q3() + sampled(4, 60, 40) + sampled(5, 40, 50)
    bad = classes = 0
    for O in pool:
        part = compute_phases_fast(O)
        for i in part.dims:
            for c in part.classes(i):
                classes += 1
                bad += not phase_connected_in_Ni(O, c)
    report(3, bad == 0, f"{len(pool)} USOs, {classes} classes, disconnected {bad}")


def q3_matchings():
    all_edges = [e for i in (1, 2, 3) for e in edges(3, i)]
    out = [()]
    for k in (1, 2, 3):
        for H in itertools.combinations(all_edges, k):
            ends = [v for e in H for v in e.endpoints]
            if len(set(ends)) == len(ends):
                out.append(H)
    return out


def test_criterion_04_matching_proposition():
    matchings = q3_matchings()
    bad = checks = 0
    for O in q3():
        part = compute_phases_fast(O)
        for H in matchings:
            checks += 1
            if is_uso_fast(flip(O, H)) != is_union_of_phases_multi(O, H, part):
                bad += 1
    report(4, bad == 0, f"{len(matchings)} matchings x 744 USOs = {checks} checks, violations {bad}")


def test_criterion_05_hypervertex_phase_characterization():
    bad = checks = 0
    for O in q3():
        part = compute_phases_fast(O)
        for f in faces(3):
            if f.dim == 0:
                continue
            hv = is_hypervertex(O, f)
            contained = True
            for i in f.spanned:
                inside = {e.base for e in f.edges(i)}
                for c in part.classes(i):
                    bases = {e.base for e in c}
                    if bases & inside and not bases <= inside:
                        contained = False
                    if bases == inside and not hv:
                        bad += 1
            checks += 1
            bad += hv != contained
    report(5, bad == 0, f"{checks} (USO, face) pairs, violations {bad}")


def test_criterion_06_schurr():
    details, ok = [], True
    for n in (3, 4, 5):
        O = schurr(n)
        top = list(edges(n, n))
        one_class = compute_phases_fast(O, dims=[n]).num_classes(n) == 1
        full = full_mask(n)
        certs = [certificate_from_pair(O, v, v ^ full) for v in range(1 << n) if not v & (1 << (n - 1))]
        antipodal = len(certs) == 2 ** (n - 1) and all(c is not None and c.dim == n for c in certs)
        cross = sum(
            1
            for e, f in itertools.combinations(top, 2)
            if (e.base ^ f.base) & 1 and ni_distance(e, f) < n - 1 and in_direct_phase(O, e, f)
        )
        split = compute_phases_bounded(O, n, n - 2).num_classes(n)
        ok &= one_class and antipodal and cross == 0 and split == 2
        details.append(f"n={n}: one class {one_class}, antipodal certs {antipodal}, cross {cross}, split {split}")
    report(6, ok, "; ".join(details))


def test_criterion_07_partial_swap():
    bad = changed = 0
    for O in q3():
        for j in (1, 2, 3):
            R = partial_swap(O, j)
            changed += R != O
            # j-edges never move, so the relocation is the identity on E_j
            if not is_uso_fast(R) or compute_phases_fast(R, dims=[j]) != compute_phases_fast(O, dims=[j]):
                bad += 1
    report(7, bad == 0, f"744 USOs x 3 dimensions ({changed} swaps change the cube), violations {bad}")


def test_criterion_08_phase_lower_bound():
    counts = [compute_phases_fast(O).num_classes() for O in q3()]
    report(8, min(counts) >= 6, f"fewest classes over Q3: {min(counts)}")


def test_criterion_09_sampler_uniformity():
    steps, seed = 100_000, 20260101
    rng = np.random.default_rng(seed)
    index = {store(O): k for k, O in enumerate(q2())}
    O = uniform(2)
    counts = Counter()
    for _ in range(steps):
        O = markov_step(O, rng)
        counts[index[store(O)]] += 1
    expected = steps / 12
    chi2 = sum((counts[k] - expected) ** 2 / expected for k in range(12))
    report(9, chi2 < 31 and len(counts) == 12, f"chi-square {chi2:.2f} over {steps} steps (seed {seed}), bound 31")


def qbf_suite():
    A, E = Quantifier.FORALL, Quantifier.EXISTS
    insts = [
        parse_qbf("p cnf 1 1\ne 1 0\n1 0\n"),
        parse_qbf("p cnf 1 1\na 1 0\n1 0\n"),
        parse_qbf("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n"),
        QbfInstance(1, (A,), ()),
        QbfInstance(1, (E,), (frozenset({1}), frozenset({-1}))),
    ]
    rng = random.Random(2024)
    while len(insts) < 40:
        m = rng.randint(1, 3)
        quants = tuple(rng.choice([A, E]) for _ in range(m))
        clauses = tuple(
            frozenset(rng.choice([1, -1]) * rng.randint(1, m) for _ in range(rng.randint(1, 3)))
            for _ in range(rng.randint(1, 4))
        )
        order = list(range(1, m + 1))
        rng.shuffle(order)
        inst = QbfInstance(m, quants, clauses, tuple(order))
        if build_layout(inst).total_dim <= 12:
            insts.append(inst)
    return insts


def test_criterion_10_reduction_end_to_end():
    insts = qbf_suite()
    bad = []
    truths = 0
    for inst in insts:
        res = reduce_to_2ip(inst)
        dense = dense_reduction(inst)  # validates the invariants of every sub-gadget
        inv = gadget_invariants(dense)
        same = res.oracle.materialize() == dense
        truth = eval_qbf(inst)
        brute = qbf_brute(inst.num_vars, [q.value for q in inst.quantifiers], inst.order, inst.clauses)
        answer = in_phase(dense, res.e, res.e_prime)
        truths += truth
        if not (all(inv.values()) and same and answer == truth == brute):
            bad.append(inst.render())
    report(10, len(insts) >= 20 and not bad, f"{len(insts)} instances ({truths} true), failures {bad}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
