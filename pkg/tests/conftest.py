import hypothesis
import numpy as np
import pytest

from falsify import Repertoire, Sample
from falsify.experiment import thresholds

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture
def t1():
    """Thresholds on m=4 sampled at (0, 1, 2)."""
    return thresholds(4), Sample((0, 1, 2))


def random_instance(rng, m_max=12, k_max=64, distinct=True):
    """Random (F, d) with m <= m_max, |F| <= k_max."""
    m = int(rng.integers(1, m_max + 1))
    k = int(rng.integers(1, k_max + 1))
    F = Repertoire(rng.choice([-1, 1], size=(k, m)))
    if distinct:
        l = int(rng.integers(1, m + 1))
        d = Sample(tuple(rng.choice(m, size=l, replace=False)))
    else:
        l = int(rng.integers(1, m + 3))
        d = Sample(tuple(rng.integers(0, m, size=l)))
    return F, d


def brute_min_risk_counts(F, m, d):
    """Per error count, number of labelings of X whose best member makes that many errors."""
    counts = {}
    rows = [tuple(r) for r in F.matrix.tolist()]
    for code in range(1 << m):
        sigma = [1 if (code >> i) & 1 else -1 for i in range(m)]
        k = min(sum(f[x] != sigma[x] for x in d.indices) for f in rows)
        counts[k] = counts.get(k, 0) + 1
    return counts
