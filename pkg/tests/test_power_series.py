import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sheffer_szasz.power_series import (
    TruncatedSeries,
    series_add,
    series_eval_derivatives,
    series_exp,
    series_mul,
)


def coeffs(s):
    return s.coeffs.tolist()


def test_add_examples():
    assert coeffs(series_add([1, 2], [0, 0])) == [1, 2]
    assert coeffs(series_add([1, 1], [1, -1])) == [2, 0]
    assert coeffs(series_add([0.5, 0.25, 0.125], [0.5, 0.75, 0.875])) == [1, 1, 1]


def test_add_pads_shorter_operand():
    assert coeffs(series_add([1], [0, 0, 3])) == [1, 0, 3]


def test_mul_examples():
    assert coeffs(series_mul([1, 1, 0], [1, 1, 0])) == [1, 2, 1]
    assert coeffs(series_mul([1, 0, 0], [0, 1, 0])) == [0, 1, 0]


def test_mul_exp_t_squared():
    e = TruncatedSeries([1 / math.factorial(k) for k in range(4)])
    oracle = [2**k / math.factorial(k) for k in range(4)]
    np.testing.assert_allclose(series_mul(e, e).coeffs, oracle, rtol=1e-15)
    np.testing.assert_allclose(series_mul(e, e).coeffs, [1, 2, 2, 4 / 3], rtol=1e-15)


def test_exp_examples():
    np.testing.assert_allclose(series_exp([0, 1, 0, 0, 0]).coeffs, [1, 1, 1 / 2, 1 / 6, 1 / 24], rtol=1e-15)
    assert coeffs(series_exp([0, 0, 0, 0])) == [1, 0, 0, 0]
    np.testing.assert_allclose(series_exp([0, 2, 0, 0]).coeffs, [1, 2, 2, 4 / 3], rtol=1e-15)


def test_exp_factors_out_constant_term():
    np.testing.assert_allclose(series_exp([1.5, 1, 0]).coeffs, math.exp(1.5) * np.array([1, 1, 0.5]))


def test_eval_derivatives_examples():
    e = TruncatedSeries.from_function(lambda k: 1 / math.factorial(k), 30)
    vals = series_eval_derivatives(e, 1.0, 2)
    assert vals == pytest.approx([math.e] * 3, abs=1e-12)
    assert series_eval_derivatives([0, 1, 0], 1.0, 2).tolist() == [1, 1, 0]


def test_eval_derivatives_polynomial_exact():
    # p(t) = 3 - 2t + 5t^3 at t = 0.7
    p = [3, -2, 0, 5]
    t = 0.7
    expected = [3 - 2 * t + 5 * t**3, -2 + 15 * t**2, 30 * t, 30, 0]
    np.testing.assert_allclose(series_eval_derivatives(p, t, 4), expected, rtol=1e-15, atol=1e-15)


def test_invariants_on_construction():
    with pytest.raises(ValueError):
        TruncatedSeries([1.0, float("nan")])
    with pytest.raises(ValueError):
        TruncatedSeries([])
    s = TruncatedSeries([1, 2, 3])
    assert s.order == 2 and len(s.coeffs) == 3
    with pytest.raises(ValueError):
        s.coeffs[0] = 5.0


def test_closure_under_arithmetic():
    a, b = TruncatedSeries([0, 1, 2, 3]), TruncatedSeries([1, 0, 0, 4])
    assert (a + b).order == 3
    assert (a * b).order == 3
    assert series_exp(a).order == 3


series_strategy = st.integers(min_value=1, max_value=20).flatmap(
    lambda K: st.lists(st.floats(-1, 1), min_size=K + 1, max_size=K + 1)
)


@settings(max_examples=60, deadline=None)
@given(series_strategy, series_strategy)
def test_exp_of_sum_is_product_of_exps(a, b):
    K = min(len(a), len(b)) - 1
    a = TruncatedSeries([0.0] + a[1 : K + 1])
    b = TruncatedSeries([0.0] + b[1 : K + 1])
    lhs = series_exp(a + b).coeffs
    rhs = series_mul(series_exp(a), series_exp(b)).coeffs
    np.testing.assert_allclose(lhs, rhs, atol=1e-12, rtol=0)


@settings(max_examples=60, deadline=None)
@given(series_strategy, series_strategy, series_strategy)
def test_mul_commutative_and_associative(a, b, c):
    K = min(len(a), len(b), len(c)) - 1
    a, b, c = (TruncatedSeries(v[: K + 1]) for v in (a, b, c))
    np.testing.assert_allclose((a * b).coeffs, (b * a).coeffs, atol=1e-12)
    np.testing.assert_allclose(((a * b) * c).coeffs, (a * (b * c)).coeffs, atol=1e-12)
