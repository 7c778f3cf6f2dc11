import math
import sys

import numpy as np
import pytest

from renyilab.core import Pmf, decreasing_rearrangement, random_log_concave

SWEEP_SIZE = 10_000
ORDER_GRID = (0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 10.0, math.inf)


def sweep_pmf(i: int) -> Pmf:
    """The i-th pmf of the standard seeded sweep (lengths cycle through 1..50)."""
    return random_log_concave(1 + i % 50, seed=i)


@pytest.fixture(scope="session")
def sweep():
    return [sweep_pmf(i) for i in range(SWEEP_SIZE)]


def robin_hood(f: Pmf, transfers: int, seed: int) -> Pmf:
    """A pmf majorized by ``f``: mass moves from richer to poorer entries.

    Each transfer takes at most half the gap between the two entries, so
    the rich entry never drops below the poor one.
    """
    rng = np.random.default_rng(seed)
    w = decreasing_rearrangement(f).copy()
    w = np.concatenate([w, np.full(3, w[-1] * 0.5)])  # spread onto new points too
    w[len(f):] = 0.0
    for _ in range(transfers):
        i, j = sorted(rng.choice(w.size, size=2, replace=False))
        gap = w[i] - w[j]
        if gap > 0:
            delta = rng.uniform(0, 0.5) * gap
            w[i] -= delta
            w[j] += delta
    w = w[w > 0]
    return Pmf(0, w / math.fsum(w))


def brute_renyi(probs, alpha):
    """Renyi entropy straight from the definition, no special tricks."""
    p = [float(x) for x in probs]
    if alpha == 0:
        return math.log(len(p))
    if alpha == 1:
        return -sum(x * math.log(x) for x in p)
    if math.isinf(alpha):
        return -math.log(max(p))
    return math.log(sum(x ** alpha for x in p)) / (1 - alpha)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
