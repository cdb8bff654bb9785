from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellipjack.arith import (QSeries, as_rational, format_rational, gen_binomial,
                             qseries_inv, qseries_mul, rising_over_factorial)
from ellipjack.errors import OrderMismatch, ZeroConstantTerm
from ellipjack.hseries import HSeries

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def series(K, nonzero_constant=False):
    first = rationals.filter(lambda x: x != 0) if nonzero_constant else rationals
    return st.builds(lambda c0, rest: QSeries([c0] + rest),
                     first, st.lists(rationals, min_size=K, max_size=K))


def test_gen_binomial_examples():
    assert gen_binomial(Fraction(7, 3), 0) == 1
    assert gen_binomial(2, 2) == 1
    assert gen_binomial(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert gen_binomial(5, 7) == 0
    with pytest.raises(ValueError):
        gen_binomial(1, -1)


@given(rationals, st.integers(0, 10))
def test_gen_binomial_is_falling_factorial(a, k):
    prod = Fraction(1)
    for i in range(k):
        prod *= a - i
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    assert gen_binomial(a, k) * fact == prod


@given(rationals, st.integers(0, 8))
def test_rising_over_factorial_sign_flip(a, k):
    assert rising_over_factorial(a, k) == (-1) ** k * gen_binomial(-a, k)


def test_rational_parsing_and_format():
    assert as_rational("3/6") == Fraction(1, 2)
    assert as_rational(4) == 4
    assert format_rational(Fraction(-4, 6)) == "-2/3"
    assert format_rational(Fraction(5)) == "5"
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_qseries_examples():
    a = QSeries([1, 1, 0])
    b = QSeries([1, -1, 0])
    assert qseries_mul(a, b) == QSeries([1, 0, -1])
    assert a * 1 == a
    assert QSeries([0, 1]) * QSeries([0, 1]) == QSeries([0, 0])
    assert qseries_inv(QSeries([1, -1, 0, 0])) == QSeries([1, 1, 1, 1])
    assert qseries_inv(QSeries.one(3)) == QSeries.one(3)
    with pytest.raises(ZeroConstantTerm):
        qseries_inv(QSeries([0, 1]))


def test_order_mismatch_is_an_error():
    with pytest.raises(OrderMismatch):
        QSeries([1, 2]) + QSeries([1, 2, 3])
    with pytest.raises(OrderMismatch):
        qseries_mul(QSeries([1]), QSeries([1, 0]))


def test_qseries_json_and_evaluate():
    s = QSeries([Fraction(1, 3), -2, 0])
    assert QSeries.from_json(s.to_json()) == s
    assert s.to_json() == ["1/3", "-2", "0"]
    assert s.evaluate(0.5) == pytest.approx(1 / 3 - 2 * 0.25)
    assert s.valuation() == 0 and QSeries.zero(2).valuation() is None


@settings(max_examples=60)
@given(series(3), series(3), series(3))
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + (-a) == QSeries.zero(3)


@settings(max_examples=60)
@given(series(4, nonzero_constant=True))
def test_inverse_is_two_sided(a):
    inv = qseries_inv(a)
    assert a * inv == QSeries.one(4)
    assert inv * a == QSeries.one(4)


def test_qseries_power_and_division():
    a = QSeries([2, 1, 0])
    assert a ** 2 == a * a
    assert a ** -1 == qseries_inv(a)
    assert (a / a) == QSeries.one(2)


def test_hseries_inverse_and_products():
    h = HSeries([Fraction(2), 1], 5)
    assert (h * h.inverse()) == 1
    assert (1 / h) == h.inverse()
    # 1/(c - x) expansion
    c = Fraction(3)
    geo = HSeries([1 / c ** (i + 1) for i in range(5)], 5)
    assert geo * HSeries([c, -1], 5) == 1
