"""The building blocks f_m as explicit (Laurent) symmetric polynomials.

f_m(z) is the constant term in xi of

    prod_j xi_j^{m_j} * prod_{j<k} Theta(xi_j/xi_k)^lam / prod_{j,k} Theta(z_j/xi_k)^lam

expanded in the region |xi_1| < ... < |xi_N|, all larger than |z_j| = 1.

Trigonometric case (Theta(x) = 1 - x): expanding (1 - xi_j/xi_k)^lam with
exponents mu_jk and (1 - z_j/xi_k)^-lam with exponents nu_jk, the xi-integrals
force the column sums of nu to be

    c_l = m_l + sum_{k>l} mu_lk - sum_{j<l} mu_jl      (all >= 0)

and the sum over nu with those column sums factorizes into a product of
g_c(z) = [t^c] prod_j (1 - z_j t)^-lam.  So

    f_m = sum_mu prod binom(lam, mu)(-1)^mu * g_{c_1} ... g_{c_N}.

Elliptic case: Theta(x) = (1 - x) C(x) with C(x) = prod_r (1 - q^2r x)(1 - q^2r/x).
All C factors together form a q^2-series whose coefficients are Laurent
monomials xi^a z^b, and each monomial just shifts m -> m + a and multiplies
the trigonometric answer by z^b.
"""
from __future__ import annotations

import threading
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import log

import numpy as np

from . import polydict
from .arith import QSeries, gen_binomial, rising_over_factorial
from .errors import ContourViolation, InvalidInput, NonConvergence
from .jack import ModelParams
from .symfunc import SymPoly, sort_desc, stabilizer_order, tails


@dataclass(frozen=True)
class EllipticParams:
    """Truncation order K in q**2, plus an optional numeric nome q."""

    K: int = 0
    q: float | None = None

    def __post_init__(self):
        if self.K < 0:
            raise InvalidInput("K must be >= 0")
        if self.q is not None and not (0 <= self.q < 1):
            raise InvalidInput("numeric q must lie in [0, 1)")

    @property
    def beta(self) -> float:
        if not self.q:
            return float("inf")
        return -2.0 * log(self.q)


class _Memo:
    """Lock-protected dictionary; fills are idempotent so races only waste work."""

    def __init__(self):
        self._lock = threading.Lock()
        self._data: dict = {}

    def get_or_compute(self, key, fn):
        with self._lock:
            if key in self._data:
                return self._data[key]
        val = fn()
        with self._lock:
            return self._data.setdefault(key, val)

    def clear(self):
        with self._lock:
            self._data.clear()

    def __len__(self):
        return len(self._data)


_G = _Memo()
_GPROD = _Memo()
_FTRIG = _Memo()
_CSERIES = _Memo()
_FELL = _Memo()


def clear_caches():
    for memo in (_G, _GPROD, _FTRIG, _CSERIES, _FELL):
        memo.clear()


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def g_poly(c: int, N: int, lam: Fraction) -> dict:
    """[t^c] prod_j (1 - z_j t)^(-lam) as an explicit polynomial."""
    def build():
        w = [rising_over_factorial(lam, i) for i in range(c + 1)]
        out = {}
        for a in _compositions(c, N):
            coeff = Fraction(1)
            for ai in a:
                coeff *= w[ai]
            out[a] = coeff
        return out
    return _G.get_or_compute((c, N, lam), build)


def _g_product(cs: tuple, N: int, lam: Fraction) -> dict:
    """prod_l g_{c_l}; ``cs`` is sorted so permuted column sums share an entry."""
    def build():
        out = {(0,) * N: Fraction(1)}
        for c in cs:
            if c:
                out = polydict.pmul(out, g_poly(c, N, lam))
        return out
    return _GPROD.get_or_compute((cs, N, lam), build)


def _mu_terms(m: tuple, lam: Fraction):
    """Yield (weight, column sums) over all admissible mu matrices.

    Columns are filled from l = N down to 1; at column l the incoming
    entries mu_jl (j < l) are chosen so that c_l >= 0, with the outgoing
    entries mu_lk (k > l) already fixed.
    """
    N = len(m)
    tl = tails(m)
    if any(t < 0 for t in tl):
        return
    binoms: dict[int, Fraction] = {}

    def bw(k):
        if k not in binoms:
            binoms[k] = gen_binomial(lam, k) * (-1) ** k
        return binoms[k]

    mu = {}
    cols = [0] * N

    def rec(l, weight):
        if l < 0:
            yield weight, tuple(cols)
            return
        out_flow = sum(mu[(l, k)] for k in range(l + 1, N))
        budget = m[l] + out_flow
        if budget < 0:
            return
        # incoming flow into column l from columns 0..l-1
        for inc in _compositions_upto(budget, l):
            w = weight
            for j, v in enumerate(inc):
                if v:
                    b = bw(v)
                    if b == 0:
                        w = 0
                        break
                    w = w * b
            if w == 0:
                continue
            for j, v in enumerate(inc):
                mu[(j, l)] = v
            cols[l] = budget - sum(inc)
            yield from rec(l - 1, w)
        for j in range(l):
            mu.pop((j, l), None)

    yield from rec(N - 1, Fraction(1))


def _compositions_upto(budget: int, parts: int):
    """All tuples of ``parts`` non-negative ints with sum <= budget."""
    if parts == 0:
        yield ()
        return
    for first in range(budget + 1):
        for rest in _compositions_upto(budget - first, parts - 1):
            yield (first,) + rest


def f_trig_explicit(m, params: ModelParams) -> dict:
    """f_m as an explicit polynomial ``{exponent: coeff}`` (trigonometric case)."""
    m = tuple(m)
    if len(m) != params.N:
        raise InvalidInput(f"{m} does not have {params.N} entries")

    def build():
        by_cols = defaultdict(Fraction)
        for w, cols in _mu_terms(m, params.lam):
            by_cols[sort_desc(cols)] += w
        out = {}
        for cs, w in by_cols.items():
            if w:
                out = polydict.padd(out, _g_product(cs, params.N, params.lam), w)
        return out

    return _FTRIG.get_or_compute((m, params.N, params.lam), build)


def f_trig(m, params: ModelParams) -> SymPoly:
    return SymPoly.from_explicit(params.N, f_trig_explicit(m, params))


# elliptic corrections ---------------------------------------------------------

def _c_power_series(s: Fraction, K: int) -> list[dict]:
    """C(x)^s as a list over q^2-order of Laurent polynomials {k: coeff} in x."""
    def build():
        # log C(x) = -sum_d q^{2d} sum_{k | d} (x^k + x^-k)/k
        L = [dict() for _ in range(K + 1)]
        for d in range(1, K + 1):
            for k in range(1, d + 1):
                if d % k == 0:
                    for e in (k, -k):
                        L[d][e] = L[d].get(e, 0) - s * Fraction(1, k)
        F = [dict() for _ in range(K + 1)]
        F[0] = {0: Fraction(1)}
        # d F_d = sum_i i L_i F_{d-i}
        for d in range(1, K + 1):
            acc = {}
            for i in range(1, d + 1):
                for e1, c1 in L[i].items():
                    for e2, c2 in F[d - i].items():
                        acc[e1 + e2] = acc.get(e1 + e2, 0) + i * c1 * c2
            F[d] = {e: c / d for e, c in acc.items() if c != 0}
        return F
    return _CSERIES.get_or_compute(("C", s, K), build)


def _series_mul(A: list[dict], B: list[dict], K: int) -> list[dict]:
    out = [defaultdict(Fraction) for _ in range(K + 1)]
    for i in range(K + 1):
        for j in range(K + 1 - i):
            for ea, ca in A[i].items():
                for eb, cb in B[j].items():
                    out[i + j][tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    return [{e: c for e, c in o.items() if c != 0} for o in out]


def elliptic_correction(params: ModelParams, K: int) -> list[dict]:
    """prod_{j<k} C(xi_j/xi_k)^lam prod_{j,k} C(z_j/xi_k)^-lam.

    Returned as a list over q^2-order of ``{(a, b): coeff}`` meaning
    ``coeff * xi^a * z^b`` with ``a`` and ``b`` length-N exponent tuples.
    """
    N, lam = params.N, params.lam

    def build():
        zero = (0,) * (2 * N)
        total = [dict() for _ in range(K + 1)]
        total[0] = {zero: Fraction(1)}

        def embed(series, pos_plus, pos_minus):
            out = []
            for layer in series:
                lay = {}
                for e, c in layer.items():
                    v = [0] * (2 * N)
                    v[pos_plus] += e
                    v[pos_minus] -= e
                    lay[tuple(v)] = c
                out.append(lay)
            return out

        cplus = _c_power_series(lam, K)
        cminus = _c_power_series(-lam, K)
        for j in range(N):
            for k in range(j + 1, N):
                total = _series_mul(total, embed(cplus, j, k), K)
        for j in range(N):
            for k in range(N):
                # x = z_j / xi_k: z index N + j, xi index k
                total = _series_mul(total, embed(cminus, N + j, k), K)
        return [{(e[:N], e[N:]): c for e, c in layer.items()} for layer in total]

    return _CSERIES.get_or_compute(("Q", N, lam, K), build)


def f_elliptic_explicit(m, params: ModelParams, K: int) -> list[dict]:
    """Per q^2-order explicit Laurent polynomials of the elliptic f_m."""
    m = tuple(m)

    def build():
        Q = elliptic_correction(params, K)
        out = []
        for layer in Q:
            acc = {}
            for (a, b), c in layer.items():
                shifted = tuple(x + y for x, y in zip(m, a))
                base = f_trig_explicit(shifted, params)
                if base:
                    acc = polydict.padd(acc, polydict.pshift(base, b), c)
            out.append(acc)
        return out

    return _FELL.get_or_compute((m, params.N, params.lam, K), build)


def f_elliptic(m, params: ModelParams, ell: EllipticParams) -> SymPoly:
    """f_m with QSeries coefficients truncated at order ell.K."""
    K = ell.K
    layers = f_elliptic_explicit(m, params, K)
    keys = set()
    for layer in layers:
        keys.update(e for e in layer if all(e[i] >= e[i + 1] for i in range(params.N - 1)))
    coeffs = {}
    for e in keys:
        st = stabilizer_order(e)
        coeffs[e] = QSeries([layer.get(e, 0) / st for layer in layers])
    return SymPoly(params.N, coeffs)


# numerical contour quadrature -------------------------------------------------

def _theta_cap(x, lam_power: float, q: float):
    """Theta(x)**lam_power with the principal branch taken factor by factor."""
    out = np.exp(lam_power * np.log1p(-x))
    if q:
        r = 1
        while True:
            qr = q ** (2 * r)
            if qr * max(np.max(np.abs(x)), np.max(np.abs(1 / x))) < 1e-18:
                break
            out = out * np.exp(lam_power * (np.log1p(-qr * x) + np.log1p(-qr / x)))
            r += 1
    return out


def _f_numeric_once(m, lam: float, q: float, z, eps: float, Q: int) -> complex:
    N = len(m)
    y = -np.pi + 2 * np.pi * (np.arange(Q) + 0.5) / Q
    grids = np.meshgrid(*([y] * N), indexing="ij")
    xi = [np.exp(eps * (j + 1) + 1j * grids[j]) for j in range(N)]
    integrand = np.ones_like(xi[0])
    for j in range(N):
        # the measure dxi/(2 pi i xi) is dy/2pi, i.e. a plain mean over the grid
        integrand = integrand * xi[j] ** m[j]
    for j in range(N):
        for k in range(j + 1, N):
            integrand = integrand * _theta_cap(xi[j] / xi[k], lam, q)
    for j in range(N):
        for k in range(N):
            integrand = integrand * _theta_cap(z[j] / xi[k], -lam, q)
    return complex(np.mean(integrand))


def f_numeric(m, params: ModelParams, ell: EllipticParams | None, z, eps: float,
              quad_points: int = 256, tol: float | None = None) -> complex:
    """f_m(z) by trapezoidal quadrature over the nested circles |xi_j| = e^(eps j).

    With ``tol`` set, the quadrature is repeated with twice the points and
    :class:`NonConvergence` is raised if the two results differ by more.
    """
    m = tuple(m)
    z = np.asarray(z, dtype=complex)
    if len(m) != params.N or z.shape != (params.N,):
        raise InvalidInput("m and z must both have N entries")
    if not np.allclose(np.abs(z), 1.0):
        raise InvalidInput("z must lie on the unit circle")
    q = ell.q if ell is not None and ell.q else 0.0
    if eps <= 0:
        raise ContourViolation("eps must be positive")
    if q and eps >= ell.beta / params.N:
        raise ContourViolation(f"eps={eps} must be below beta/N={ell.beta / params.N}")
    lam = float(params.lam)
    val = _f_numeric_once(m, lam, q, z, eps, quad_points)
    if tol is not None:
        val2 = _f_numeric_once(m, lam, q, z, eps, 2 * quad_points)
        if abs(val2 - val) > tol * max(1.0, abs(val2)):
            raise NonConvergence(f"quadrature changed by {abs(val2 - val):.3e} on doubling")
        val = val2
    return val
