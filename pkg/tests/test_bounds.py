import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from falsify.bounds import (
    Confidence,
    constants,
    ei_rademacher_bound,
    ei_vc_bound,
    rademacher_bound,
    vc_bound,
)
from falsify.capacity import rademacher_via_distribution
from falsify.errors import EiExceedsL, InvalidConfidence
from falsify.learning import Repertoire, RiskValue, min_risk_histogram
from falsify.core import Sample
from test_learning import full_patterns, instances

LN2 = math.log(2)


def conf_term(delta, l):
    # (1 - log2 delta) / l written with natural logs
    return math.sqrt((1 + math.log(1 / delta) / LN2) / l)


def test_constants_formula():
    c = constants()
    assert c.c1 == pytest.approx(math.sqrt(6 * LN2), abs=1e-15)
    assert c.c2 == pytest.approx(math.sqrt(LN2), abs=1e-15)
    assert c.c3 == pytest.approx(math.sqrt(2 * LN2), abs=1e-15)
    assert c.c1 == pytest.approx(2.03933, abs=1e-5)
    assert c.c2 == pytest.approx(0.83255, abs=1e-5)
    assert c.c3 == pytest.approx(1.17741, abs=1e-5)
    assert round(c.c1) == 2


def test_vc_bound_zero_capacity():
    r = vc_bound(RiskValue(0, 10), 0, 10, 0.5)
    assert r.capacity_term == 0
    assert r.total == pytest.approx(constants().c2 * math.sqrt(2 / 10), abs=1e-15)


def test_vc_bound_t1():
    r = vc_bound(RiskValue(0, 3), 2, 3, 0.05)
    assert r.capacity_term == pytest.approx(1.6651, abs=1e-4)
    assert r.confidence_term == pytest.approx(1.1089, abs=1e-4)
    assert r.total == pytest.approx(2.774, abs=1e-3)
    assert r.vacuous


def test_vc_bound_large_sample():
    r = vc_bound(RiskValue(0, 1000), 2, 1000, 0.05)
    expected = math.sqrt(6 * LN2) * math.sqrt(2 / 1000) + math.sqrt(LN2) * conf_term(0.05, 1000)
    assert r.total == pytest.approx(expected, abs=1e-12)
    assert r.capacity_term == pytest.approx(0.0912, abs=1e-4)
    assert r.total == pytest.approx(0.1519, abs=1e-4)
    assert not r.vacuous


def test_rademacher_bound_examples():
    assert rademacher_bound(RiskValue(0, 5), 1, 5, 0.05).vacuous
    r = rademacher_bound(RiskValue(0, 3), Fraction(2, 3), 3, 0.05)
    assert r.confidence_term == pytest.approx(1.5683, abs=1e-4)
    assert r.total == pytest.approx(2.235, abs=1e-3)
    assert r.capacity_exact == Fraction(2, 3)
    r = rademacher_bound(Fraction(1, 10), 0, 10**4, 0.05)
    assert r.total - 0.1 == pytest.approx(0.0272, abs=1e-4)


def test_ei_vc_bound_examples():
    assert ei_vc_bound(0, 7, 7, 0.1).capacity_term == 0
    assert ei_vc_bound(0, 0, 7, 0.1).capacity_term == pytest.approx(constants().c1)
    a = ei_vc_bound(RiskValue(0, 3), 1, 3, 0.05)
    b = vc_bound(RiskValue(0, 3), 2, 3, 0.05)
    assert a.capacity_term == pytest.approx(constants().c1 * math.sqrt(2 / 3), abs=1e-15)
    # sqrt is ill-conditioned at 0, so compare the radicands
    assert a.confidence_term == b.confidence_term
    assert a.capacity_term**2 == pytest.approx(b.capacity_term**2, abs=1e-12)


def test_ei_vc_bound_rejects_excess():
    with pytest.raises(EiExceedsL):
        ei_vc_bound(0, 4, 3, 0.05)


def test_ei_rademacher_bound_examples(t1):
    F, d = t1
    r = ei_rademacher_bound(RiskValue(0, 3), min_risk_histogram(F, d), 0.05)
    assert r.capacity_exact == Fraction(2, 3)
    assert r.total == pytest.approx(rademacher_bound(RiskValue(0, 3), Fraction(2, 3), 3, 0.05).total, abs=1e-15)
    G, g = full_patterns(3)
    assert ei_rademacher_bound(0, min_risk_histogram(G, g), 0.05).capacity_exact == 1
    S = Repertoire(np.array([[1, -1, 1]]))
    assert ei_rademacher_bound(0, min_risk_histogram(S, Sample((0, 1, 2))), 0.05).capacity_exact == 0


@pytest.mark.parametrize("delta", [0, 1, -0.1, 1.5])
def test_invalid_confidence(delta):
    with pytest.raises(InvalidConfidence):
        Confidence(delta)
    with pytest.raises(InvalidConfidence):
        vc_bound(0, 1, 5, delta)


@given(st.integers(1, 200), st.floats(0, 1), st.floats(1e-6, 0.999))
def test_route_agreement(l, frac, delta):
    V = frac * l
    a = vc_bound(0, V, l, delta)
    b = ei_vc_bound(0, l - V, l, delta)
    # sqrt is ill-conditioned at 0, so compare the radicands
    assert a.confidence_term == b.confidence_term
    assert a.capacity_term**2 == pytest.approx(b.capacity_term**2, abs=1e-12)


@given(instances(m_max=8, k_max=10))
def test_ei_rademacher_capacity_matches(inst):
    F, d = inst
    h = min_risk_histogram(F, d)
    assert ei_rademacher_bound(0, h, 0.05).capacity_exact == rademacher_via_distribution(h)


@given(st.integers(1, 100), st.integers(0, 100), st.integers(0, 100),
       st.floats(0, 8), st.floats(0, 8), st.floats(1e-4, 0.99), st.floats(1e-4, 0.99))
def test_monotonicity(l, k1, k2, V1, V2, d1, d2):
    k1, k2 = sorted((k1 % (l + 1), k2 % (l + 1)))
    V1, V2 = sorted((V1, V2))
    d1, d2 = sorted((d1, d2))
    base = vc_bound(RiskValue(k1, l), V1, l, d2).total
    assert vc_bound(RiskValue(k2, l), V1, l, d2).total >= base
    assert vc_bound(RiskValue(k1, l), V2, l, d2).total >= base
    assert vc_bound(RiskValue(k1, l), V1, l, d1).total >= base
    assert vc_bound(RiskValue(0, l + 1), V1, l + 1, d2).total <= vc_bound(RiskValue(0, l), V1, l, d2).total


@given(st.integers(1, 50), st.floats(0, 5), st.floats(1e-4, 0.99))
def test_vacuous_flag(l, V, delta):
    r = vc_bound(0, V, l, delta)
    assert r.vacuous == (r.total >= 1)
    assert r.total == pytest.approx(float(r.empirical_term) + r.capacity_term + r.confidence_term, abs=1e-12)


def test_report_json():
    obj = rademacher_bound(RiskValue(1, 4), Fraction(1, 2), 4, 0.05).to_json()
    assert obj["empirical_term"] == "1/4" and obj["capacity_exact"] == "1/2" and obj["vacuous"] is True
