import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellipjack.arith import QSeries
from ellipjack.errors import GapViolation, InvalidInput, NonPositiveDiff
from ellipjack.jack import ModelParams
from ellipjack.kernel import EllipticParams
from ellipjack.spectral import (SCoeffs, alpha_elliptic, alpha_trig, e0, energy_diff,
                                eigenvalue_fixed_point, eigenvalue_lagrange, gap_delta, phi,
                                s_elliptic)
from ellipjack.symfunc import partitions, tail_nonneg


def test_s_coefficients():
    trig = SCoeffs("trig")
    assert [trig(nu) for nu in (-2, -1, 0, 1, 2)] == [0, 0, 0, 1, 2]
    ell = SCoeffs("elliptic", 4)
    assert ell(2) == QSeries([2, 0, 2, 0, 2])
    assert ell(-2) == QSeries([0, 0, 2, 0, 2])
    assert ell(0) == QSeries.zero(4)
    for nu in range(1, 8):
        assert s_elliptic(nu, 6) - s_elliptic(-nu, 6) == nu
        # S_nu (1 - q^2nu) = nu
        assert s_elliptic(nu, 6) * QSeries.monomial(-1, nu, 6) + s_elliptic(nu, 6) == nu


def test_e0_examples():
    assert e0((1, 0), ModelParams(2, 1)) == Fraction(5, 2)
    assert e0((1, 0), ModelParams(2, 2)) == 5
    for N in range(2, 7):
        for lam in (Fraction(1, 2), Fraction(2), Fraction(7, 3)):
            assert e0((0,) * N, ModelParams(N, lam)) == lam ** 2 * N * (N * N - 1) / 12
    # centre-of-mass momentum shifts every entry
    assert e0((1, 0), ModelParams(2, 2, p=1)) == e0((2, 1), ModelParams(2, 2))


def test_energy_diff_example():
    assert energy_diff((1, 0), {(0, 1): 1}, ModelParams(2, 1)) == 6
    with pytest.raises(InvalidInput):
        energy_diff((1, 0), {(0, 1): 0}, ModelParams(2, 1))
    with pytest.raises(NonPositiveDiff):
        # off the partition cone the closed form can fail to be positive
        energy_diff((0, 3), {(0, 1): 1}, ModelParams(2, 1))


@settings(max_examples=80)
@given(st.integers(2, 4), st.integers(0, 5), st.data(),
       st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=6))
def test_energy_diff_matches_direct_difference(N, w, data, lam):
    parts = list(partitions(w, N))
    n = data.draw(st.sampled_from(parts))
    pairs = [(j, k) for j in range(N) for k in range(j + 1, N)]
    mu = {pr: data.draw(st.integers(0, 2)) for pr in pairs}
    if not any(mu.values()):
        mu[pairs[0]] = 1
    p = ModelParams(N, lam)
    m = list(n)
    for (j, k), v in mu.items():
        m[j] += v
        m[k] -= v
    assert energy_diff(n, mu, p) == e0(m, p) - e0(n, p) > 0


def test_alpha_trig_examples():
    p = ModelParams(2, 2)
    assert alpha_trig((2, 0), ModelParams(2, 1)).entries == {(2, 0): 1}
    for N in (2, 3):
        assert alpha_trig((0,) * N, p if N == 2 else ModelParams(3, 2)).entries == {(0,) * N: 1}
    # one-step walk n -> n + E_12 with S_1 = 1: gamma / (E0(3,-1) - E0(2,0)) = 4/10
    table = alpha_trig((2, 0), p)
    assert table.coefficient((3, -1)) == Fraction(2, 5)
    assert table[(2, 0)] == 1


def test_alpha_trig_positive_denominators_and_finiteness():
    for lam in (Fraction(1, 2), Fraction(3, 2), Fraction(3)):
        p = ModelParams(3, lam)
        for n in partitions(4, 3):
            table = alpha_trig(n, p)
            assert table[n] == 1
            for m in table.entries:
                assert sum(m) == sum(n) and tail_nonneg(m)
                if m != n:
                    assert e0(m, p) > e0(n, p)


def test_alpha_elliptic_reductions():
    p = ModelParams(2, Fraction(3, 2))
    n = (2, 1)
    E = eigenvalue_fixed_point(n, p, EllipticParams(2)).value
    table = alpha_elliptic(n, E, p, EllipticParams(2))
    assert table[n] == QSeries.one(2)
    trig = alpha_trig(n, p)
    for m, c in table.entries.items():
        if tail_nonneg(m):
            assert c[0] == trig.coefficient(m)
    k0 = alpha_elliptic(n, QSeries([e0(n, p)]), p, EllipticParams(0))
    assert {m: c[0] for m, c in k0.entries.items() if tail_nonneg(m)} == trig.entries
    free = ModelParams(2, 1)
    assert alpha_elliptic(n, QSeries([e0(n, free), 0]), free, EllipticParams(1)).entries == {n: QSeries.one(1)}


def test_phi_trig_and_leading_order():
    p = ModelParams(2, 2)
    n = (1, 0)
    assert phi(n, Fraction(7, 3), p, order=0) == QSeries([0])
    # two-step closed walks: -gamma^2 [1/(E0(n+E) - xi) + 1/(E0(n-E) - xi)]
    xi = Fraction(5)
    expected = -p.gamma ** 2 * (1 / (e0((2, -1), p) - xi) + 1 / (e0((0, 1), p) - xi))
    val = phi(n, xi, p, EllipticParams(1))
    assert val[0] == 0 and val[1] == expected == 2


def test_phi_float_mode_matches_series():
    p = ModelParams(2, Fraction(3, 2))
    n = (2, 0)
    xi = Fraction(31, 4)
    exact = phi(n, xi, p, EllipticParams(2))
    floaty = phi(n, float(xi), p, EllipticParams(2))
    for a, b in zip(exact.coeffs, floaty.coeffs):
        assert float(a) == pytest.approx(b, abs=1e-10)


def test_fixed_point_examples():
    assert eigenvalue_fixed_point((1, 0), ModelParams(2, 2), EllipticParams(0)).value == QSeries([5])
    free = eigenvalue_fixed_point((2, 1), ModelParams(2, 1), EllipticParams(3)).value
    assert free == e0((2, 1), ModelParams(2, 1))
    v = eigenvalue_fixed_point((1, 0), ModelParams(2, 2), EllipticParams(2)).value
    assert v == QSeries([5, 2, Fraction(17, 2)])


def test_lagrange_agrees_with_fixed_point():
    for lam, n in ((Fraction(2), (1, 0)), (Fraction(3), (2, 0)), (Fraction(3, 2), (1, 0))):
        p = ModelParams(2, lam)
        ell = EllipticParams(2)
        fp = eigenvalue_fixed_point(n, p, ell).value
        res = eigenvalue_lagrange(n, Fraction(1, 2), p, ell, terms=30)
        assert res.delta >= Fraction(1, 2) or lam.denominator != 1
        for a, b in zip(fp.coeffs, res.value.coeffs):
            assert abs(a - b) < Fraction(1, 10 ** 12)
    assert eigenvalue_lagrange((1, 0), Fraction(1, 2), ModelParams(2, 2), EllipticParams(0)).value == 5


def test_gap_delta():
    p = ModelParams(2, 2)
    assert gap_delta((1, 0), Fraction(1, 2), p) >= Fraction(1, 2)
    # a equal to an actual level difference is detected
    a = e0((2, -1), p) - e0((1, 0), p)
    assert gap_delta((1, 0), a, p, 3) == 0
    with pytest.raises(GapViolation):
        eigenvalue_lagrange((1, 0), a, p, EllipticParams(1))
    # enlarging the window never increases the result
    prev = None
    for window in range(3, 9):
        d = gap_delta((2, 1, 0), Fraction(1, 3), ModelParams(3, Fraction(3, 2)), window)
        assert prev is None or d <= prev
        prev = d
    with pytest.raises(InvalidInput):
        gap_delta((2, 0), Fraction(1, 2), p, 1)


def test_eigenvalue_json():
    res = eigenvalue_lagrange((1, 0), Fraction(1, 2), ModelParams(2, 2), EllipticParams(1), terms=10)
    obj = res.to_json_obj()
    assert obj["mode"] == "elliptic-formal" and obj["a"] == "1/2" and obj["delta"] == "1/2"
    assert obj["K"] == 1 and obj["value"][0] == "5"
    assert not math.isnan(res.value.evaluate(0.1))
