from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from localorder.tangent import (
    bernoulli,
    bernoulli_numbers,
    tangent_derivative,
    tangent_formula,
    tangent_table,
    zigzag_numbers,
)

# A000182
TANGENT_NUMBERS = [
    1, 2, 16, 272, 7936, 353792, 22368256, 1903757312, 209865342976,
    29088885112832, 4951498053124096,
]


def test_bernoulli_examples():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(10) == Fraction(5, 66)
    assert bernoulli(12) == Fraction(-691, 2730)


def test_odd_bernoulli_vanish():
    bs = bernoulli_numbers(15)
    assert all(bs[n] == 0 for n in range(3, 16, 2))


def test_bernoulli_matches_series_of_x_over_expm1():
    # x / (e^x - 1) = sum B_n x^n / n!  <=>  (sum x^k/(k+1)!) * (sum B_n x^n/n!) = 1
    from math import factorial
    N = 14
    bs = bernoulli_numbers(N)
    for m in range(N + 1):
        s = sum(Fraction(1, factorial(k + 1)) * bs[m - k] / factorial(m - k) for k in range(m + 1))
        assert s == (1 if m == 0 else 0)


def test_tangent_examples():
    assert [tangent_derivative(o) for o in (1, 3, 5, 7, 9)] == [1, 2, 16, 272, 7936]


def test_both_methods_agree_through_m11():
    zz = zigzag_numbers(22)
    for m in range(1, 12):
        assert tangent_formula(m) == zz[2 * m - 1] == TANGENT_NUMBERS[m - 1]


def test_zigzag_start():
    # Euler zigzag numbers A000111
    assert zigzag_numbers(10) == [1, 1, 1, 2, 5, 16, 61, 272, 1385, 7936]


@pytest.mark.parametrize("bad", [0, 2, -1, 4])
def test_even_or_nonpositive_orders_rejected(bad):
    with pytest.raises(ValueError):
        tangent_derivative(bad)


@given(st.integers(1, 30))
def test_formula_is_integer_and_positive(m):
    v = tangent_formula(m)
    assert isinstance(v, int) and v > 0


def test_table():
    t = tangent_table(5)
    assert [t[m] for m in range(1, 6)] == TANGENT_NUMBERS[:5]
    assert t.rows()[2] == (3, 5, 16)
    with pytest.raises(IndexError):
        t[6]
