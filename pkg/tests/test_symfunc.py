import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellipjack.arith import QSeries
from ellipjack.errors import InvalidInput, NoUniqueLeading
from ellipjack.symfunc import (SymPoly, as_vector, dominance_leq, dominated_partitions,
                               is_partition, monomial_sym, partitions, sympoly_add,
                               sympoly_normalize_leading, sympoly_scale, tail_nonneg, tails)


def test_dominance_examples():
    assert dominance_leq((1, 1), (2, 0))
    assert not dominance_leq((2, 0), (1, 1))
    assert not dominance_leq((1, 0), (2, 0))
    with pytest.raises(InvalidInput):
        dominance_leq((1, 0), (1, 0, 0))


def test_tail_nonneg_examples():
    assert not tail_nonneg((2, -1))
    assert tail_nonneg((2, 0))
    assert not tail_nonneg((1, -1))
    assert tail_nonneg((-1, 2))
    assert tails((3, -1, 2)) == [4, 1, 2]


vec3 = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))


@given(vec3, vec3, vec3)
def test_dominance_partial_order(a, b, c):
    assert dominance_leq(a, a)
    if dominance_leq(a, b) and dominance_leq(b, a):
        assert a == b
    if dominance_leq(a, b) and dominance_leq(b, c):
        assert dominance_leq(a, c)


def test_partitions_enumeration():
    assert list(partitions(3, 2)) == [(3, 0), (2, 1)]
    assert sorted(partitions(4, 3)) == sorted([(4, 0, 0), (3, 1, 0), (2, 2, 0), (2, 1, 1)])
    assert dominated_partitions((2, 1, 0)) == [(2, 1, 0), (1, 1, 1)]
    assert all(is_partition(p) for p in partitions(6, 4))


def test_monomial_convention():
    assert monomial_sym((1, 0)).to_explicit() == {(1, 0): 1, (0, 1): 1}
    assert monomial_sym((1, 1)).to_explicit() == {(1, 1): 2}
    assert monomial_sym((0, 0)).to_explicit() == {(0, 0): 2}


def test_monomial_is_permutation_invariant():
    rng = np.random.default_rng(0)
    M = monomial_sym((3, 1, 0, -1))
    z = np.exp(1j * rng.uniform(0, 6, 4))
    base = M.evaluate(z)
    for perm in itertools.permutations(range(4)):
        assert M.evaluate(z[list(perm)]) == pytest.approx(base)


def test_normalize_and_plumbing():
    p = SymPoly(2, {(2, 0): 3, (1, 1): 6})
    assert p.normalize_leading() == SymPoly(2, {(2, 0): 1, (1, 1): 2})
    assert sympoly_add(p, sympoly_scale(p, -1)).is_zero()
    assert sympoly_scale(p, 1) == p
    assert p.degree == 2
    with pytest.raises(NoUniqueLeading):
        SymPoly(4, {(3, 1, 1, 1): 1, (2, 2, 2, 0): 1}).normalize_leading()


def test_series_coefficients_compare_with_rationals():
    p = SymPoly(2, {(1, 0): Fraction(2)})
    s = SymPoly(2, {(1, 0): QSeries([2, 0, 0])})
    assert p == s
    n = sympoly_normalize_leading(SymPoly(2, {(1, 0): QSeries([2, 1])}))
    assert n[(1, 0)] == QSeries([1, 0])


def test_json_roundtrip():
    p = SymPoly(2, {(2, 0): Fraction(1, 3), (1, 1): QSeries([1, Fraction(-1, 2)])})
    obj = p.to_json_obj()
    assert obj["terms"][0] == {"partition": [2, 0], "coeff": "1/3"}
    assert obj["terms"][1]["coeff"] == ["1", "-1/2"]
    assert SymPoly.from_json(p.to_json()) == p


def test_bad_keys_rejected():
    with pytest.raises(InvalidInput):
        SymPoly(2, {(0, 1): 1})
    with pytest.raises(InvalidInput):
        SymPoly(2, {(1, 0, 0): 1})
    assert as_vector("2, -1,0") == (2, -1, 0)
