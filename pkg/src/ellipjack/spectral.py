"""Interaction coefficients, free energies and the walk-sum series.

All walk sums are evaluated by one dynamic program.  The coefficient
alpha(m) satisfies

    alpha(m) = delta(m, n) + gamma / [[E0(m) - E]] * sum_{j<k} sum_nu S_nu alpha(m - nu E_jk)

and summing this recursion is the same as summing over walks.  States are
parametrized by their tails t_l = m_l + ... + m_N (l = 2..N); a forward step
(nu > 0) lowers some tails, so at a fixed q^2-order the recursion is
triangular when states are visited in decreasing total tail.

Resonances: a state m != n with E0(m) == E0(n) would put a denominator with
vanishing constant term into a formal q^2 expansion.  Such states are
excluded exactly like m = n itself and listed in the result diagnostics.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import QSeries, as_rational, format_rational, qseries_inv, qseries_mul
from .errors import (DegenerateDenominator, DegenerateSpectrum, GapViolation,
                     InvalidInput, NonPositiveDiff)
from .hseries import HSeries
from .jack import ModelParams
from .kernel import EllipticParams
from .symfunc import is_partition, tail_nonneg, tails


# S coefficients ----------------------------------------------------------------

def s_trig(nu: int) -> Fraction:
    return Fraction(nu) if nu > 0 else Fraction(0)


def s_elliptic(nu: int, K: int) -> QSeries:
    """S_nu as a q^2-series: nu/(1 - q^2nu) for nu > 0, |nu| q^2|nu|/(1 - q^2|nu|) for nu < 0."""
    out = [Fraction(0)] * (K + 1)
    if nu == 0:
        return QSeries(out)
    a = abs(nu)
    start = 0 if nu > 0 else a
    for d in range(start, K + 1, a):
        out[d] = Fraction(a)
    return QSeries(out)


@dataclass(frozen=True)
class SCoeffs:
    mode: str = "trig"
    K: int = 0

    def __call__(self, nu: int):
        if self.mode == "trig":
            return s_trig(nu)
        return s_elliptic(nu, self.K)


# free energies -----------------------------------------------------------------

def e0(m, params: ModelParams) -> Fraction:
    N, lam, p = params.N, params.lam, params.p
    return sum(((mj + p + lam * (N + 1 - 2 * (j + 1)) / 2) ** 2
                for j, mj in enumerate(m)), Fraction(0))


def E_vec(j: int, k: int, N: int) -> tuple:
    v = [0] * N
    v[j] += 1
    v[k] -= 1
    return tuple(v)


def energy_diff(n, mu: dict, params: ModelParams) -> Fraction:
    """E0(n + sum mu_jk E_jk) - E0(n) from the manifestly positive closed form.

    ``mu`` maps 0-based pairs (j, k), j < k, to non-negative integers.
    """
    n = tuple(n)
    N, lam = params.N, params.lam
    if any(v < 0 for v in mu.values()) or not any(mu.values()):
        raise InvalidInput("mu must be non-negative and not identically zero")
    total = Fraction(0)
    for j in range(N):
        lin = sum(mu.get((j, k), 0) * (n[j] - n[k] + (k - j) * lam) for k in range(j + 1, N))
        net = sum(mu.get((k, j), 0) for k in range(j)) - sum(mu.get((j, k), 0) for k in range(j + 1, N))
        total += 2 * lin + net ** 2
    if total <= 0:
        raise NonPositiveDiff(f"energy difference {total} is not positive for n={n}, mu={mu}")
    return total


# state space ------------------------------------------------------------------

def from_tails(t: tuple, w: int) -> tuple:
    """Vector with weight w and tails (t_2, ..., t_N)."""
    full = (w,) + tuple(t) + (0,)
    return tuple(full[i] - full[i + 1] for i in range(len(full) - 1))


def tail_box(n, lower: int, upper_extra: int) -> list[tuple]:
    """All m of weight |n| with lower <= t_l(m) <= t_l(n) + upper_extra (l >= 2)."""
    tn = tails(n)[1:]
    w = sum(n)
    ranges = [range(lower, t + upper_extra + 1) for t in tn]
    return [from_tails(t, w) for t in itertools.product(*ranges)]


def tail_sum(m) -> int:
    return sum(tails(m)[1:])


@dataclass
class WalkSystem:
    """Solved alpha table over a finite box of states."""

    n: tuple
    alpha: dict
    excluded: list
    region: list


def _neighbours(m: tuple, region: set, K: int, elliptic: bool):
    """Yield (nu, predecessor) with predecessor = m - nu E_jk inside the region."""
    N = len(m)
    for j in range(N):
        for k in range(j + 1, N):
            nu = 1
            while True:
                p = list(m)
                p[j] -= nu
                p[k] += nu
                p = tuple(p)
                if p not in region:
                    # tails of p grow with nu, so once outside it stays outside
                    break
                yield nu, p
                nu += 1
            if elliptic:
                for nu in range(1, K + 1):
                    p = list(m)
                    p[j] += nu
                    p[k] -= nu
                    p = tuple(p)
                    if p in region:
                        yield -nu, p


def solve_walks(n, params: ModelParams, K: int, den_inv, *, elliptic: bool,
                region: list | None = None, zero=None) -> WalkSystem:
    """Sum alpha = delta + gamma R alpha order by order in q^2.

    ``den_inv(m)`` returns 1/[[E0(m) - E]] as a QSeries of order K (or None
    for an excluded state).  ``zero`` is the zero element of the coefficient
    ring (Fraction(0) unless h-series coefficients are in use).
    """
    n = tuple(n)
    if zero is None:
        zero = Fraction(0)
    one = zero + 1
    gamma = params.gamma
    if region is None:
        region = tail_box(n, -K if elliptic else 0, K if elliptic else 0)
    if gamma == 0:
        # free model: no walk ever contributes
        alpha = {m: QSeries([zero] * (K + 1)) for m in region}
        alpha[n] = QSeries([one] + [zero] * K)
        return WalkSystem(n, alpha, [], region)
    rset = set(region)
    order = sorted(region, key=tail_sum, reverse=True)

    s_cache = {}

    def S(nu):
        if nu not in s_cache:
            s_cache[nu] = s_elliptic(nu, K) if elliptic else QSeries([s_trig(nu)], K)
        return s_cache[nu]

    inv = {}
    excluded = []
    for m in region:
        if m == n:
            continue
        d = den_inv(m)
        if d is None:
            excluded.append(m)
        else:
            inv[m] = d

    nbrs = {m: list(_neighbours(m, rset, K, elliptic)) for m in inv}
    alpha = {m: [zero] * (K + 1) for m in region}
    alpha[n][0] = one
    # coefficient ring values of S at each order, cached as lists
    for d in range(K + 1):
        for m in order:
            if m not in inv:
                continue
            dinv = inv[m].coeffs
            acc = zero
            for nu, p in nbrs[m]:
                sc = S(nu).coeffs
                ap = alpha[p]
                # sum over d1 + d2 + d3 = d of dinv[d1] * S[d2] * alpha_p[d3]
                for d2 in range(d + 1):
                    s_val = sc[d2]
                    if s_val == 0:
                        continue
                    for d3 in range(d - d2 + 1):
                        a_val = ap[d3]
                        if a_val == 0:
                            continue
                        acc = acc + dinv[d - d2 - d3] * (s_val * a_val)
            alpha[m][d] = gamma * acc
    table = {m: QSeries(v) for m, v in alpha.items()}
    return WalkSystem(n, table, excluded, region)


def _interaction_at_n(system: WalkSystem, params: ModelParams, K: int, elliptic: bool, zero):
    """(S alpha)(n) = sum_{j<k} sum_nu S_nu alpha(n - nu E_jk)."""
    n = system.n
    total = QSeries([zero] * (K + 1))
    rset = set(system.alpha)
    for nu, p in _neighbours(n, rset, K, elliptic):
        s = s_elliptic(nu, K) if elliptic else QSeries([s_trig(nu)], K)
        total = total + qseries_mul(s, system.alpha[p])
    return total


def resonant(m, n, params: ModelParams) -> bool:
    return m != n and e0(m, params) == e0(n, params)


# alpha tables -----------------------------------------------------------------

@dataclass
class AlphaTable:
    base: tuple
    entries: dict
    mode: str
    K: int = 0
    excluded: list = field(default_factory=list)
    params: ModelParams | None = None

    def __getitem__(self, m):
        m = tuple(m)
        if m in self.entries:
            return self.entries[m]
        return Fraction(0) if self.mode == "trig" else QSeries.zero(self.K)

    def coefficient(self, m):
        """alpha_n(m) for any m, summing walks outside the stored region if needed."""
        m = tuple(m)
        if m in self.entries or self.mode != "trig":
            return self[m]
        return alpha_trig_coefficient(self.base, m, self.params)

    def to_json_obj(self) -> dict:
        rows = []
        for m in sorted(self.entries, reverse=True):
            c = self.entries[m]
            rows.append({"m": list(m),
                         "coeff": c.to_json() if isinstance(c, QSeries) else format_rational(c)})
        return {"n": list(self.base), "mode": self.mode, "K": self.K, "entries": rows,
                "excluded": [list(x) for x in self.excluded]}


def _trig_den_inv(n, params: ModelParams):
    en = e0(n, params)

    def den_inv(m):
        diff = e0(m, params) - en
        if diff == 0:
            raise DegenerateSpectrum(f"E0({m}) == E0({n}) on a walk from n")
        return QSeries([1 / diff])
    return den_inv


def alpha_trig(n, params: ModelParams) -> AlphaTable:
    """All alpha_n(m) with tail_nonneg(m), via the walk sum with S_nu = nu (nu > 0)."""
    n = tuple(n)
    if len(n) != params.N:
        raise InvalidInput(f"{n} does not have {params.N} entries")
    if not tail_nonneg(n):
        return AlphaTable(n, {n: Fraction(1)}, "trig", params=params)
    system = solve_walks(n, params, 0, _trig_den_inv(n, params), elliptic=False)
    entries = {m: c[0] for m, c in system.alpha.items() if c[0] != 0}
    return AlphaTable(n, entries, "trig", params=params)


def alpha_trig_coefficient(n, m, params: ModelParams) -> Fraction:
    """alpha_n(m) for an arbitrary endpoint m (only walks from n to m contribute)."""
    n, m = tuple(n), tuple(m)
    if sum(m) != sum(n):
        return Fraction(0)
    tn, tm = tails(n)[1:], tails(m)[1:]
    if any(a > b for a, b in zip(tm, tn)):
        return Fraction(0)
    # every state on a walk from n to m has tails between those of m and n
    ranges = [range(a, b + 1) for a, b in zip(tm, tn)]
    region = [from_tails(t, sum(n)) for t in itertools.product(*ranges)]
    system = solve_walks(n, params, 0, _trig_den_inv(n, params), elliptic=False, region=region)
    return system.alpha[m][0]


def _elliptic_den_inv(n, E: QSeries, params: ModelParams):
    K = E.order

    def den_inv(m):
        if resonant(m, n, params):
            return None
        return qseries_inv(e0(m, params) - E)
    return den_inv


def alpha_elliptic(n, E: QSeries, params: ModelParams, ell: EllipticParams) -> AlphaTable:
    """alpha_n(m) as q^2-series on the box -K <= t_l <= t_l(n) + K.

    Values are exact through order K for every m whose tails are all
    >= -K + d when read at order d, which covers every product alpha(m) f_m
    that survives truncation.
    """
    n = tuple(n)
    K = ell.K
    if E.order != K:
        raise InvalidInput("eigenvalue series order must equal K")
    if E[0] != e0(n, params):
        raise InvalidInput("eigenvalue series must start at E0(n)")
    system = solve_walks(n, params, K, _elliptic_den_inv(n, E, params), elliptic=True)
    entries = {m: c for m, c in system.alpha.items() if not c.is_zero()}
    return AlphaTable(n, entries, "elliptic", K, sorted(system.excluded), params=params)


# eigenvalues ------------------------------------------------------------------

@dataclass
class EigenvalueResult:
    n: tuple
    mode: str
    value: object
    K: int = 0
    method: str = "closed-form"
    a: Fraction | None = None
    delta: Fraction | None = None
    iterations: int = 0
    excluded: list = field(default_factory=list)

    def to_json_obj(self) -> dict:
        v = self.value
        if isinstance(v, QSeries):
            value = v.to_json()
        elif isinstance(v, Fraction):
            value = format_rational(v)
        else:
            value = repr(float(v))
        out = {"n": list(self.n), "mode": self.mode, "value": value, "K": self.K,
               "method": self.method}
        if self.a is not None:
            out["a"] = format_rational(self.a)
        if self.delta is not None:
            out["delta"] = format_rational(self.delta)
        if self.excluded:
            out["excluded"] = [list(x) for x in self.excluded]
        return out


def eigenvalue_trig(n, params: ModelParams) -> EigenvalueResult:
    return EigenvalueResult(tuple(n), "trig", e0(n, params))


def phi(n, xi, params: ModelParams, ell: EllipticParams | None = None, order: int | None = None):
    """Phi_n(xi) truncated at q^2-order ``order``.

    ``xi`` may be a Fraction, a float, or a QSeries; the result is a QSeries
    of the same coefficient kind.  In the trigonometric limit (order 0)
    every closed walk needs a step with S_nu, nu <= 0, so Phi vanishes.
    """
    n = tuple(n)
    K = order if order is not None else (ell.K if ell is not None else 0)
    if isinstance(xi, QSeries):
        if xi.order != K:
            raise InvalidInput("xi series order must equal the requested order")
        xis = xi
    else:
        xis = QSeries.constant(xi, K)
    floaty = isinstance(xis[0], float)

    def den_inv(m):
        if resonant(m, n, params):
            return None
        e = e0(m, params)
        d = (float(e) - xis) if floaty else (e - xis)
        if d[0] == 0:
            raise DegenerateDenominator(f"E0({m}) - xi has vanishing constant term")
        return qseries_inv(d)

    zero = 0.0 if floaty else Fraction(0)
    system = solve_walks(n, params, K, den_inv, elliptic=True, zero=zero)
    sa = _interaction_at_n(system, params, K, True, zero)
    return sa * (-params.gamma)


def eigenvalue_fixed_point(n, params: ModelParams, ell: EllipticParams) -> EigenvalueResult:
    """Solve E = E0(n) + Phi_n(E) one q^2-order per iteration."""
    n = tuple(n)
    K = ell.K
    E = QSeries.constant(e0(n, params), K)
    excluded = []
    for it in range(K + 1):
        system = solve_walks(n, params, K, _elliptic_den_inv(n, E, params), elliptic=True)
        excluded = system.excluded
        newE = e0(n, params) - params.gamma * _interaction_at_n(system, params, K, True, Fraction(0))
        if newE == E and it > 0:
            break
        E = newE
    return EigenvalueResult(n, "elliptic-formal", E, K, "fixed-point", iterations=it + 1,
                            excluded=sorted(excluded))


def gap_delta(n, a, params: ModelParams, window: int | None = None) -> Fraction | None:
    """min |E0(m) - E0(n) - a| over m != n of equal weight with all |t_l(m)| <= window.

    None when the window holds no state other than n.
    """
    n = tuple(n)
    a = as_rational(a)
    w = sum(n)
    if window is None:
        window = w
    if window < w:
        raise InvalidInput("window must be at least the weight of n")
    en = e0(n, params)
    best = None
    for t in itertools.product(range(-window, window + 1), repeat=params.N - 1):
        m = from_tails(t, w)
        if m == n:
            continue
        d = abs(e0(m, params) - en - a)
        if best is None or d < best:
            best = d
    return best


def eigenvalue_lagrange(n, a, params: ModelParams, ell: EllipticParams, terms: int = 40,
                        window: int | None = None) -> EigenvalueResult:
    """Lagrange-inversion series for E = E0(n) + Phi_n(E) around xi0 = E0(n) + a.

    Writing the equation as xi = xi0 + (Phi(xi) - a), Lagrange's theorem gives

        E = xi0 + sum_{k>=1} (1/k!) d^{k-1}/dxi^{k-1} (Phi(xi) - a)^k |_{xi0}

    which is evaluated as xi0 + sum_k (1/k) [h^{k-1}] (Phi(xi0 + h) - a)^k with
    Phi expanded in h through order terms - 1.
    """
    n = tuple(n)
    a = as_rational(a)
    K = ell.K
    en = e0(n, params)
    xi0 = en + a
    if window is None:
        window = sum(n) + 2 * K
    delta = gap_delta(n, a, params, window)
    if delta is not None and delta == 0:
        raise GapViolation(f"a={a} puts the expansion point on a level E0(m)")
    L = terms

    region = tail_box(n, -K, K)
    for m in region:
        if m != n and not resonant(m, n, params) and abs(e0(m, params) - xi0) <= abs(a):
            raise GapViolation(
                f"pole E0({m})={e0(m, params)} lies within |a| of the expansion point")

    def den_inv(m):
        if resonant(m, n, params):
            return None
        c = e0(m, params) - xi0
        # 1/(c - h) = sum_i h^i / c^(i+1)
        return QSeries([HSeries([1 / c ** (i + 1) for i in range(L)], L)], K)

    zero = HSeries([], L)
    system = solve_walks(n, params, K, den_inv, elliptic=True, region=region, zero=zero)
    phi_h = _interaction_at_n(system, params, K, True, zero) * (-params.gamma)
    G = QSeries([c - a if d == 0 else c for d, c in enumerate(phi_h.coeffs)])
    total = [Fraction(0)] * (K + 1)
    total[0] = xi0
    power = QSeries([HSeries([1], L)], K)
    for k in range(1, terms + 1):
        power = qseries_mul(power, G)
        for d in range(K + 1):
            c = power[d]
            if isinstance(c, HSeries):
                total[d] += c[k - 1] / k
    return EigenvalueResult(n, "elliptic-formal", QSeries(total), K, "lagrange", a=a,
                            delta=delta, iterations=terms, excluded=sorted(system.excluded))


def numeric_value(result: EigenvalueResult, q: float) -> float:
    v = result.value
    if isinstance(v, QSeries):
        return v.evaluate(q)
    return float(v)

