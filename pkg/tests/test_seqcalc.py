import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cesaro_growth.seqcalc import (
    RealSequence,
    cesaro_means,
    cesaro_number,
    cesaro_numbers,
    forward_difference,
    summation_by_parts_check,
    weighted_difference_sum,
)

finite_seq = st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=20)


def test_zero_extension():
    b = RealSequence([5.0, 3.0])
    assert b.support_bound == 1
    assert b[1] == 3.0 and b[2] == 0.0 and b[10**6] == 0.0
    with pytest.raises(IndexError):
        b[-1]


def test_difference_of_constant_vanishes_inside_support():
    # the zero extension makes the last entry a boundary jump
    d = forward_difference(np.ones(10), 1).values
    assert np.all(d[:-1] == 0)


def test_second_difference_of_square_is_two():
    k = np.arange(30, dtype=float)
    d = forward_difference(k**2, 2).values
    assert np.allclose(d[:-2], 2.0)


def test_difference_example():
    assert np.array_equal(forward_difference([5, 3, 0, 0], 1).values, [2, 3, 0, 0])


def test_order_zero_is_identity():
    b = np.array([1.5, -2.0, 7.0])
    assert np.array_equal(forward_difference(b, 0).values, b)


@given(finite_seq, st.integers(0, 4), st.integers(0, 4))
def test_difference_orders_compose(vals, l1, l2):
    b = np.array(vals + [0.0] * 10)
    lhs = forward_difference(forward_difference(b, l2), l1).values
    rhs = forward_difference(b, l1 + l2).values
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12 * (1 + np.max(np.abs(b))) * 2 ** (l1 + l2))


@pytest.mark.parametrize("deg", [0, 1, 2, 3])
def test_difference_annihilates_low_degree_polynomials(deg):
    k = np.arange(40, dtype=float)
    b = np.polyval(np.arange(1, deg + 2, dtype=float), k)
    d = forward_difference(b, deg + 1).values
    assert np.allclose(d[: -(deg + 1)], 0.0, atol=1e-7)


def test_cesaro_number_examples():
    assert cesaro_number(3, 2) == pytest.approx(10.0, abs=0)
    assert all(cesaro_number(k, 0) == 1.0 for k in range(20))
    assert cesaro_number(4, 1) == 5.0
    assert cesaro_number(0, -3.0) == 1.0


def test_cesaro_number_zero_is_flagged():
    with pytest.raises(ValueError):
        cesaro_number(3, -2)
    assert cesaro_number(3, -2, allow_zero=True) == 0.0


def test_cesaro_numbers_match_binomials():
    from math import comb

    A = cesaro_numbers(60, 3)
    assert all(A[k] == pytest.approx(comb(k + 3, k), rel=1e-13) for k in range(61))


def test_cesaro_numbers_no_overflow_and_polynomial_growth():
    for m in (1, 2, 3.5):
        A = cesaro_numbers(4096, m)
        assert np.all(np.isfinite(A))
        k = np.arange(1, 1025)
        ratio = A[1:1025] / k**m
        # A_k^m / k^m decreases to 1/Γ(m+1), so C_m = A_1^m = m + 1
        assert np.all(np.diff(ratio) <= 1e-15)
        assert ratio.max() == pytest.approx(m + 1)
        assert ratio[-1] == pytest.approx(1 / math.gamma(m + 1), rel=1e-2)


def test_cesaro_means_examples():
    assert cesaro_means([3.0], 7, 1.5) == pytest.approx(3.0)
    assert cesaro_means(np.ones(10), 2, 1) == pytest.approx(2.0)
    assert cesaro_means([1.0], 5, 2) == pytest.approx(1.0)


def test_summation_by_parts_examples():
    lhs, rhs = summation_by_parts_check([1.0], [1.0], 1)
    assert lhs == rhs == 1.0
    lhs, rhs = summation_by_parts_check(np.arange(5.0), np.zeros(5), 2)
    assert lhs == rhs == 0.0


@settings(max_examples=200)
@given(finite_seq, finite_seq, st.integers(0, 3))
def test_summation_by_parts_property(a, b, m):
    lhs, rhs = summation_by_parts_check(a, b, m)
    assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs)) * (1 + max(map(abs, a))) * (1 + max(map(abs, b)))


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 4, 17, 32])
def test_weighted_difference_sum_constant(d, n):
    one = lambda k: np.ones_like(k)  # noqa: E731
    assert weighted_difference_sum(one, n, d) == pytest.approx(1.0, abs=1e-12)


def test_weighted_difference_sum_matches_brute_force():
    from math import comb

    def A(k, m):
        return comb(k + m, k)

    f = lambda j: np.maximum(j, 1.0) ** 1.5  # noqa: E731
    n, d = 12, 2
    h = [A(n - j, d) * float(f(np.array(j))) if j <= n else 0.0 for j in range(n + d + 2)]
    total = 0.0
    for j in range(n + 1):
        diff = sum((-1) ** i * comb(d + 1, i) * h[j + i] for i in range(d + 2))
        total += abs(diff) * A(j, d) / A(n, d)
    assert weighted_difference_sum(f, n, d) == pytest.approx(total, rel=1e-12)


def test_weighted_difference_sum_degree_zero_term():
    assert np.isfinite(weighted_difference_sum(lambda k: k, 0, 1))
