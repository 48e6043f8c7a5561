from __future__ import annotations

import sys

import numpy as np
import pytest

from usophase.constructions import enumerate_usos, markov_step, uniform


@pytest.fixture(scope="session")
def q2_usos():
    return list(enumerate_usos(2))


@pytest.fixture(scope="session")
def q3_usos():
    return list(enumerate_usos(3))


def chain_samples(n, count, seed, thin=10, burn=50):
    """``count`` states of one phase-flip chain, ``thin`` steps apart."""
    rng = np.random.default_rng(seed)
    O = uniform(n)
    for _ in range(burn):
        O = markov_step(O, rng)
    out = []
    while len(out) < count:
        for _ in range(thin):
            O = markov_step(O, rng)
        out.append(O)
    return out


@pytest.fixture(scope="session")
def sampled_q4():
    return chain_samples(4, 200, seed=4)


@pytest.fixture(scope="session")
def sampled_q5():
    return chain_samples(5, 50, seed=5)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None:
        return
    ran = {int(r.nodeid.split("criterion_")[1][:2]) for key in ("passed", "failed") for r in terminalreporter.stats.get(key, []) if "criterion_" in r.nodeid}
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ran):
        terminalreporter.write_line(mod.RESULTS.get(num, f"criterion {num:2d}: FAIL  (raised before reporting)"))
