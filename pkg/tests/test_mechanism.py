import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from falsify.core import Hypothesis
from falsify.errors import FalsifyError, UnknownOutput, ZeroProbabilityOutput
from falsify.mechanism import (
    Mechanism,
    actual_repertoire,
    effective_information,
    from_function,
    output_marginal,
)


@pytest.fixture
def half():
    # p(y=1|x0) = 1, p(y=1|x1) = 1/2
    return Mechanism(np.array([[0.0, 1.0], [0.5, 0.5]]), (0, 1))


def fig1(sizes=(9, 63, 72)):
    f = [j for j, s in enumerate(sizes) for _ in range(s)]
    return from_function(f)


def test_marginal_constant():
    assert output_marginal(from_function([7] * 5), 7) == 1


def test_marginal_identity():
    mech = from_function(range(4))
    assert all(output_marginal(mech, y) == 0.25 for y in range(4))


def test_marginal_half(half):
    assert output_marginal(half, 1) == pytest.approx(0.75, abs=1e-15)


def test_unknown_output(half):
    with pytest.raises(UnknownOutput):
        output_marginal(half, 5)


def test_repertoire_identity_point_mass():
    rep = actual_repertoire(from_function(range(4)), 2)
    assert rep.posterior.tolist() == [0, 0, 1, 0]
    assert rep.support == (2,)


def test_repertoire_constant_uniform():
    rep = actual_repertoire(from_function([0] * 4), 0)
    assert rep.posterior.tolist() == [0.25] * 4


def test_repertoire_half(half):
    post = actual_repertoire(half, 1).posterior
    assert post == pytest.approx([2 / 3, 1 / 3], abs=1e-12)


def test_zero_probability_output():
    mech = Mechanism(np.array([[1.0, 0.0], [1.0, 0.0]]), ("a", "b"))
    with pytest.raises(ZeroProbabilityOutput):
        actual_repertoire(mech, "b")
    with pytest.raises(ZeroProbabilityOutput):
        effective_information(mech, "b")


def test_ei_constant_zero():
    assert effective_information(from_function([1] * 6), 1) == 0


def test_ei_fig1_four_bits():
    assert effective_information(fig1(), 0) == pytest.approx(4.0, abs=1e-10)
    assert effective_information(fig1((9, 135)), 0) == pytest.approx(4.0, abs=1e-10)


def test_ei_half(half):
    expected = (2 / 3) * math.log2(4 / 3) + (1 / 3) * math.log2(2 / 3)
    assert effective_information(half, 1) == pytest.approx(expected, abs=1e-12)
    assert effective_information(half, 1) == pytest.approx(0.0817, abs=1e-4)


def test_from_function_identity_and_constant():
    assert effective_information(from_function(range(4)), 3) == pytest.approx(2.0, abs=1e-12)
    assert effective_information(from_function([0] * 4), 0) == 0


def test_from_hypothesis():
    mech = from_function(Hypothesis((1, -1, -1, -1)))
    assert mech.outputs == (-1, 1)
    assert effective_information(mech, 1) == pytest.approx(2.0)
    assert effective_information(mech, -1) == pytest.approx(2 - math.log2(3))


def test_json_round_trip(half):
    again = Mechanism.from_json(half.to_json())
    assert np.array_equal(again.matrix, half.matrix) and again.outputs == half.outputs


def test_rejects_bad_rows():
    with pytest.raises(FalsifyError):
        Mechanism(np.array([[0.5, 0.4]]), (0, 1))


@st.composite
def mechanisms(draw):
    n = draw(st.integers(1, 8))
    k = draw(st.integers(1, 5))
    raw = draw(arrays(float, (n, k), elements=st.floats(0, 1)))
    raw[:, 0] += 1e-3
    return Mechanism(raw / raw.sum(axis=1, keepdims=True), tuple(range(k)))


@given(mechanisms())
def test_ei_range_and_bayes(mech):
    n = mech.n_inputs
    total = np.zeros(n)
    for y in mech.outputs:
        py = output_marginal(mech, y)
        if py == 0:
            continue
        ei = effective_information(mech, y)
        assert 0 <= ei <= math.log2(n) + 1e-12
        total += py * actual_repertoire(mech, y).posterior
    assert np.allclose(total, 1 / n, atol=1e-10)


@given(st.lists(st.integers(0, 4), min_size=1, max_size=40))
def test_deterministic_reduction(values):
    mech = from_function(values)
    n = len(values)
    for y in set(values):
        pre = values.count(y)
        assert effective_information(mech, y) == pytest.approx(math.log2(n) - math.log2(pre), abs=1e-10)
        ei = effective_information(mech, y)
        if pre == 1:
            assert ei == pytest.approx(math.log2(n), abs=1e-10)
        if pre == n:
            assert ei == pytest.approx(0, abs=1e-10)
