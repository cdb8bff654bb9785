"""Assembly of eigenfunctions and pointwise numerical verification.

The verifier never reuses the series machinery it checks: the Hamiltonian
is applied to Psi = e^{ip sum x} P(z) Psi_0 through exact derivatives of the
plane-wave expansion of P and closed-form log-derivatives of theta.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import QSeries
from .errors import (CoincidentPoints, InvalidInput, MismatchBeyondNormalization,
                     ResidualLaurentSupport, SingularPoint)
from .jack import ModelParams, jack_by_recursion
from .kernel import EllipticParams, f_elliptic, f_trig
from .spectral import (EigenvalueResult, alpha_elliptic, alpha_trig, e0,
                       eigenvalue_fixed_point, s_elliptic)
from .symfunc import SymPoly, is_partition, partitions, sympoly_add, tail_nonneg


# assembly ---------------------------------------------------------------------

@dataclass
class Eigenfunction:
    n: tuple
    P: SymPoly
    eigenvalue: EigenvalueResult
    p_momentum: int = 0
    nonpartition: bool = False
    excluded: list = field(default_factory=list)

    def normalized(self) -> "Eigenfunction":
        """Copy with the coefficient of M_n scaled to exactly 1."""
        c = self.P[self.n]
        if isinstance(c, QSeries):
            c = 1 / c
        else:
            c = 1 / c if c != 0 else None
        if c is None:
            raise InvalidInput(f"M_{self.n} does not occur in P")
        return Eigenfunction(self.n, self.P * c, self.eigenvalue, self.p_momentum,
                             self.nonpartition, self.excluded)

    def to_json_obj(self) -> dict:
        out = {"n": list(self.n), "P": self.P.to_json_obj(),
               "eigenvalue": self.eigenvalue.to_json_obj(), "p": self.p_momentum}
        if self.nonpartition:
            out["nonpartition"] = True
        return out


def assemble_P(n, params: ModelParams, ell: EllipticParams | None = None) -> Eigenfunction:
    """P_n = sum_m alpha_n(m) f_m, trigonometric (ell None) or as q^2-series."""
    n = tuple(n)
    if len(n) != params.N:
        raise InvalidInput(f"{n} does not have {params.N} entries")
    nonpart = not is_partition(n)
    if ell is None:
        table = alpha_trig(n, params)
        P = SymPoly(params.N)
        for m, a in sorted(table.entries.items(), reverse=True):
            if tail_nonneg(m):
                P = sympoly_add(P, f_trig(m, params) * a)
        if not nonpart and P.laurent:
            raise ResidualLaurentSupport(f"negative powers survive in P_{n}")
        ev = EigenvalueResult(n, "trig", e0(n, params))
        return Eigenfunction(n, P, ev, params.p, nonpart)

    ev = eigenvalue_fixed_point(n, params, ell)
    table = alpha_elliptic(n, ev.value, params, ell)
    P = SymPoly(params.N)
    for m, a in sorted(table.entries.items(), reverse=True):
        f = f_elliptic(m, params, ell)
        if not f.is_zero():
            P = sympoly_add(P, f * a)
    return Eigenfunction(n, P, ev, params.p, nonpart, table.excluded)


def shift_poly(P: SymPoly, k: int) -> SymPoly:
    """Multiply by (z_1 ... z_N)^k."""
    return SymPoly(P.N, {tuple(x + k for x in key): c for key, c in P.items()})


def compare_with_jack(n, k: int, params: ModelParams) -> Fraction:
    """Check (z_1..z_N)^k P_{n - k e} against the recursion oracle; return the constant.

    The returned c satisfies (z_1..z_N)^k P_{n - k e} = c J_n with J_n
    normalized to leading coefficient 1.
    """
    n = tuple(n)
    if not is_partition(n):
        raise InvalidInput(f"{n} is not a partition")
    if k < 0 or k > n[-1]:
        raise InvalidInput(f"k must satisfy 0 <= k <= {n[-1]}")
    lowered = tuple(x - k for x in n)
    P = shift_poly(assemble_P(lowered, params).P, k)
    J = jack_by_recursion(n, params).poly
    if P.is_zero():
        raise MismatchBeyondNormalization(f"P_{lowered} vanishes identically")
    c = P[n]
    if c == 0 or P.normalize_leading() != J:
        raise MismatchBeyondNormalization(
            f"(z1..zN)^{k} P_{lowered} is not proportional to J_{n} at lambda={params.lam}")
    return c


# theta, potential -------------------------------------------------------------

def _default_cut(q: float, tol: float = 1e-18) -> int:
    if not q:
        return 0
    return max(1, int(math.ceil(math.log(tol) / (2 * math.log(q)))) + 1)


@dataclass(frozen=True)
class ThetaEval:
    """theta(r) = sin(r/2) prod_m (1 - 2 q^2m cos r + q^4m), product cut at M_cut."""

    q: float = 0.0
    M_cut: int | None = None

    @property
    def mode(self) -> str:
        return "elliptic" if self.q else "trig"

    @property
    def cut(self) -> int:
        return self.M_cut if self.M_cut is not None else _default_cut(self.q)

    @property
    def tail_bound(self) -> float:
        """Size of the first omitted factor's contribution, ~ q^(2(M_cut+1))."""
        return self.q ** (2 * (self.cut + 1)) if self.q else 0.0

    def _us(self, r):
        r = np.asarray(r, dtype=complex)
        ms = np.arange(1, self.cut + 1)
        qm = self.q ** (2 * ms)
        e = np.exp(1j * r)[..., None]
        return qm * e, qm / e

    def value(self, r):
        r = np.asarray(r, dtype=complex)
        out = np.sin(r / 2)
        if self.q:
            u, ub = self._us(r)
            out = out * np.prod((1 - u) * (1 - ub), axis=-1)
        return out

    def log_deriv(self, r):
        """theta'/theta."""
        r = np.asarray(r, dtype=complex)
        out = 0.5 / np.tan(r / 2)
        if self.q:
            u, ub = self._us(r)
            out = out + np.sum(-1j * u / (1 - u) + 1j * ub / (1 - ub), axis=-1)
        return out

    def V(self, r):
        """Pair potential, equal to -(log theta)''."""
        r = np.asarray(r, dtype=complex)
        out = 0.25 / np.sin(r / 2) ** 2
        if self.q:
            u, ub = self._us(r)
            out = out + np.sum(-u / (1 - u) ** 2 - ub / (1 - ub) ** 2, axis=-1)
        return out


def potential_eval(r, q: float = 0.0, M_cut: int | None = None) -> complex:
    """V(r): the trigonometric closed form, or the lattice sum over |m| <= M_cut."""
    r = complex(r)
    if q:
        beta = -2 * math.log(q)
        k = round(r.imag / beta)
        if abs(r - 2 * math.pi * round(r.real / (2 * math.pi)) - 1j * k * beta) < 1e-12:
            raise SingularPoint(f"r={r} is a lattice point")
    elif abs(np.sin(r / 2)) < 1e-14:
        raise SingularPoint(f"r={r} is a multiple of 2 pi")
    cut = M_cut if M_cut is not None else _default_cut(q)
    total = 0.25 / np.sin(r / 2) ** 2
    if q:
        beta = -2 * math.log(q)
        for m in range(1, cut + 1):
            total += 0.25 / np.sin((r + 1j * m * beta) / 2) ** 2
            total += 0.25 / np.sin((r - 1j * m * beta) / 2) ** 2
    return complex(total)


def potential_fourier(r, q: float, tol: float = 1e-18) -> complex:
    """-sum_{nu != 0} S_nu e^{i nu r}, valid for 0 < Im r < beta."""
    r = complex(r)
    beta = -2 * math.log(q) if q else math.inf
    if not 0 < r.imag < beta:
        raise InvalidInput("the Fourier form needs 0 < Im r < beta")
    total = 0j
    nu = 1
    while True:
        up = math.exp(-nu * r.imag)
        down = q ** (2 * nu) * math.exp(nu * r.imag) if q else 0.0
        if nu * max(up, down) < tol and nu > 3:
            break
        qn = q ** (2 * nu)
        total -= nu / (1 - qn) * np.exp(1j * nu * r)
        if q:
            total -= nu * qn / (1 - qn) * np.exp(-1j * nu * r)
        nu += 1
    return complex(total)


def s_numeric(nu: int, q: float) -> float:
    """Numeric S_nu (the series evaluated at q, summed to all orders)."""
    if nu == 0:
        return 0.0
    a = abs(nu)
    qn = q ** (2 * a)
    return a / (1 - qn) if nu > 0 else a * qn / (1 - qn)


# log-derivative machinery -----------------------------------------------------

def _pair_factor_derivs(coords: np.ndarray, factors, theta: ThetaEval):
    """First and diagonal second derivatives of log prod theta(c_a - c_b)^kappa."""
    L1 = np.zeros(coords.shape, dtype=complex)
    L2 = np.zeros(coords.shape, dtype=complex)
    for a, b, kappa in factors:
        r = coords[..., a] - coords[..., b]
        rho = theta.log_deriv(r)
        v = theta.V(r)
        L1[..., a] += kappa * rho
        L1[..., b] -= kappa * rho
        L2[..., a] -= kappa * v
        L2[..., b] -= kappa * v
    return L1, L2


def _check_distinct(coords: np.ndarray, pairs, theta: ThetaEval, tol: float = 1e-8):
    for a, b in pairs:
        r = coords[..., a] - coords[..., b]
        if np.min(np.abs(theta.value(r))) < tol:
            raise CoincidentPoints(f"theta(c{a} - c{b}) vanishes at a sample point")


def groundstate_log_derivatives(x, params: ModelParams, theta: ThetaEval = ThetaEval()):
    """(d_j log Psi_0, d_j^2 log Psi_0) for every coordinate of x (last axis)."""
    x = np.asarray(x, dtype=complex)
    N = x.shape[-1]
    pairs = [(j, k) for j in range(N) for k in range(j + 1, N)]
    _check_distinct(x, pairs, theta)
    lam = float(params.lam)
    return _pair_factor_derivs(x, [(j, k, lam) for j, k in pairs], theta)


def _potential_sum(coords, idx, theta: ThetaEval):
    total = 0
    for i, a in enumerate(idx):
        for b in idx[i + 1:]:
            total = total + theta.V(coords[..., a] - coords[..., b])
    return total


def _hamiltonian_over_f(coords, idx, L1, L2, gamma: float, theta: ThetaEval):
    """(H F)/F restricted to the coordinates idx, given log-derivatives of F."""
    kin = -sum(L1[..., j] ** 2 + L2[..., j] for j in idx)
    return kin + gamma * _potential_sum(coords, idx, theta)


# eigen-equation residual --------------------------------------------------------

def _plane_waves(P: SymPoly, q: float | None):
    if any(isinstance(c, QSeries) for _, c in P.items()):
        if q is None:
            raise InvalidInput("a numeric q is needed to evaluate series coefficients")
        P = P.evaluate_at_q(q)
    explicit = P.to_explicit()
    exps = np.array(list(explicit.keys()), dtype=float).reshape(len(explicit), P.N)
    coeffs = np.array([complex(c) for c in explicit.values()])
    return exps, coeffs


def poly_log_derivatives(P: SymPoly, x, q: float | None = None):
    """P, d_j P / P and d_j^2 P / P in the angle variables x_j (z_j = e^{i x_j})."""
    x = np.asarray(x, dtype=complex)
    exps, coeffs = _plane_waves(P, q)
    phase = np.exp(1j * x @ exps.T)
    val = phase @ coeffs
    d1 = np.stack([phase @ (coeffs * 1j * exps[:, j]) for j in range(P.N)], axis=-1)
    d2 = np.stack([phase @ (coeffs * -exps[:, j] ** 2) for j in range(P.N)], axis=-1)
    return val, d1 / val[..., None], d2 / val[..., None]


def sample_points(P: SymPoly, N: int, count: int, rng: np.random.Generator,
                  q: float | None = None, min_sep: float = 0.2, rel_floor: float = 1e-3):
    """Real sample points away from collisions and from zeros of P."""
    exps, coeffs = _plane_waves(P, q) if not P.is_zero() else (None, None)
    scale = float(np.sum(np.abs(coeffs))) if coeffs is not None else 1.0
    out = []
    while len(out) < count:
        x = rng.uniform(-math.pi, math.pi, N)
        seps = [abs(math.sin((x[j] - x[k]) / 2)) for j in range(N) for k in range(j + 1, N)]
        if seps and min(seps) < math.sin(min_sep / 2):
            continue
        if coeffs is not None:
            val = np.exp(1j * exps @ x) @ coeffs
            if abs(val) < rel_floor * scale:
                continue
        out.append(x)
    return np.array(out)


def residual_eigen(ef: Eigenfunction, params: ModelParams, x, q: float = 0.0,
                   M_cut: int | None = None) -> float:
    """max |H Psi / Psi - E| over the sample points x (rows)."""
    if ef.P.is_zero():
        raise InvalidInput(f"P_{ef.n} vanishes identically")
    x = np.atleast_2d(np.asarray(x, dtype=float))
    theta = ThetaEval(q, M_cut)
    L1, L2 = groundstate_log_derivatives(x, params, theta)
    _, p1, p2 = poly_log_derivatives(ef.P, x, q if q else None)
    A1 = L1 + p1 + 1j * ef.p_momentum
    A2 = L2 + p2 - p1 ** 2
    HPsi = _hamiltonian_over_f(x, list(range(params.N)), A1, A2, float(params.gamma), theta)
    v = ef.eigenvalue.value
    E = v.evaluate(q) if isinstance(v, QSeries) else float(v)
    return float(np.max(np.abs(HPsi - E)))


# functional identities ----------------------------------------------------------

def check_identity_F(x, y, params: ModelParams, q: float = 0.0, M_cut: int | None = None) -> float:
    """max |(H(x) - H(y)) F / F| for the kernel F(x; y) with N = len(x) = len(y)."""
    x = np.atleast_2d(np.asarray(x, dtype=complex))
    y = np.atleast_2d(np.asarray(y, dtype=complex))
    N = x.shape[-1]
    if y.shape[-1] != N:
        raise InvalidInput("x and y must have the same length")
    return _identity(x, y, params, q, M_cut, dual=False, const=0.0)


def check_identity_FNM(x, y, params: ModelParams, dual: bool = False) -> float:
    """Residual of the generalized identities with N = len(x), M = len(y) (trigonometric)."""
    x = np.atleast_2d(np.asarray(x, dtype=complex))
    y = np.atleast_2d(np.asarray(y, dtype=complex))
    N, M = x.shape[-1], y.shape[-1]
    lam = params.lam
    if dual:
        c = (lam ** 2 * N * (N * N - 1) + Fraction(M * (M * M - 1)) / lam
             + 3 * M * N * (lam * N + M)) / 12
    else:
        c = lam ** 2 * (N - M) * ((N - M) ** 2 - 1) / 12
    return _identity(x, y, params, 0.0, None, dual=dual, const=float(c))


def identity_constants(N: int, M: int, lam) -> tuple:
    lam = Fraction(lam)
    c = lam ** 2 * (N - M) * ((N - M) ** 2 - 1) / 12
    ct = (lam ** 2 * N * (N * N - 1) + Fraction(M * (M * M - 1)) / lam
          + 3 * M * N * (lam * N + M)) / 12
    return c, ct


def _identity(x, y, params, q, M_cut, dual: bool, const: float) -> float:
    theta = ThetaEval(q, M_cut)
    N, M = x.shape[-1], y.shape[-1]
    coords = np.concatenate([x, y], axis=-1)
    xs, ys = list(range(N)), list(range(N, N + M))
    lam = float(params.lam)
    yk = 1 / lam if dual else lam
    cross = 1.0 if dual else -lam
    factors = ([(a, b, lam) for i, a in enumerate(xs) for b in xs[i + 1:]]
               + [(a, b, yk) for i, a in enumerate(ys) for b in ys[i + 1:]]
               + [(a, b, cross) for a in xs for b in ys])
    _check_distinct(coords, [(a, b) for a, b, _ in factors], theta)
    L1, L2 = _pair_factor_derivs(coords, factors, theta)
    hx = _hamiltonian_over_f(coords, xs, L1, L2, float(params.gamma), theta)
    if dual:
        gdual = 2 * yk * (yk - 1)
        hy = _hamiltonian_over_f(coords, ys, L1, L2, gdual, theta)
        res = hx + lam * hy - const
    else:
        hy = _hamiltonian_over_f(coords, ys, L1, L2, float(params.gamma), theta)
        res = hx - hy - const
    return float(np.max(np.abs(res)))


# N = 2 Fourier oracle -----------------------------------------------------------

def _g_and_derivative(r, q: float, cut: int):
    """theta'/theta - cot(r/2)/2 and its r-derivative, for real r."""
    g = np.zeros_like(r)
    dg = np.zeros_like(r)
    for m in range(1, cut + 1):
        u = q ** (2 * m) * np.exp(1j * r)
        g = g + 2 * np.imag(u / (1 - u))
        dg = dg + 2 * np.real(u / (1 - u) ** 2)
    return g, dg


def numeric_eigenvalue_n2(n, lam, q: float, basis: int = 60, M_cut: int | None = None,
                          target=None) -> float:
    """Eigenvalue of the two-body problem by diagonalization in a Fourier basis.

    With Psi = e^{i w (x1+x2)/2} theta(r)^lam chi(r/2), r = x1 - x2, the
    relative operator acting on chi is

        -1/2 chi'' - 2 lam (cot(s)/2 + g(2s)) chi' + W(s) chi

    with W = lam^2/2 - 2 lam^2 (cot(s) g(2s) + g(2s)^2 + g'(2s)), whose
    coefficients are regular trigonometric series for integer lam.  chi is
    expanded in cos(k s), k = w mod 2, and the matrix is built by midpoint
    quadrature on (0, pi).  The eigenvalue closest to ``target`` (default
    E0(n)) is returned.
    """
    lam = Fraction(lam)
    if lam.denominator != 1 or lam <= 0:
        raise InvalidInput("the Fourier oracle needs a positive integer lambda")
    n = tuple(n)
    if len(n) != 2:
        raise InvalidInput("the Fourier oracle is for two particles")
    lamf = float(lam)
    w = n[0] + n[1]
    ks = np.arange(w % 2, 2 * basis + w % 2, 2)
    grid = 4 * len(ks) + 8
    s = math.pi * (np.arange(grid) + 0.5) / grid
    g, dg = _g_and_derivative(2 * s, q, M_cut if M_cut is not None else _default_cut(q))
    cot = np.cos(s) / np.sin(s)
    W = lamf ** 2 / 2 - 2 * lamf ** 2 * (cot * g + g * g + dg)
    drift = -2 * lamf * (0.5 * cot + g)
    cosines = np.cos(np.outer(ks, s))
    weights = np.where(ks == 0, 1.0, 2.0) / grid
    A = np.empty((len(ks), len(ks)))
    for col, k in enumerate(ks):
        image = 0.5 * k * k * np.cos(k * s) - drift * k * np.sin(k * s) + W * np.cos(k * s)
        A[:, col] = weights * (cosines @ image)
    ev = np.linalg.eigvals(A).real + w * w / 2
    if target is None:
        target = float(e0(n, ModelParams(2, lam)))
    return float(ev[np.argmin(np.abs(ev - target))])


# verification report ------------------------------------------------------------

@dataclass
class Check:
    name: str
    residual: float
    tolerance: float
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def to_json_obj(self) -> dict:
        return {"name": self.name, "residual": float(self.residual),
                "tolerance": self.tolerance, "passed": self.passed, "seed": self.seed}


def _random_complex(rng, count, size, imag=0.3):
    return rng.uniform(-math.pi, math.pi, (count, size)) + 1j * rng.uniform(-imag, imag, (count, size))


def suite_identities(seed: int = 0, points: int = 100) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = []
    for lam, q in ((Fraction(3, 2), 0.0), (Fraction(2), 0.0), (Fraction(3, 2), 0.2)):
        p = ModelParams(2, lam)
        x, y = _random_complex(rng, points, 2), _random_complex(rng, points, 2)
        checks.append(Check(f"identity_F N=2 lambda={lam} q={q}",
                            check_identity_F(x, y, p, q), 1e-8, seed))
    for N, M in ((2, 0), (2, 1), (3, 1)):
        p = ModelParams(max(N, 1), Fraction(2))
        x, y = _random_complex(rng, points, N), _random_complex(rng, points, M)
        checks.append(Check(f"identity_FNM N={N} M={M}", check_identity_FNM(x, y, p), 1e-8, seed))
    p = ModelParams(2, Fraction(3, 2))
    x, y = _random_complex(rng, points, 2), _random_complex(rng, points, 1)
    checks.append(Check("identity_FNM dual N=2 M=1", check_identity_FNM(x, y, p, dual=True), 1e-8, seed))
    return checks


def suite_jack(seed: int = 0, max_weight: int = 4) -> list[Check]:
    checks = []
    for N in (2, 3):
        for lam in (Fraction(1, 2), Fraction(1), Fraction(2)):
            p = ModelParams(N, lam)
            for w in range(max_weight + 1):
                for n in partitions(w, N):
                    try:
                        compare_with_jack(n, 0, p)
                        bad = 0.0
                    except MismatchBeyondNormalization:
                        bad = 1.0
                    checks.append(Check(f"jack N={N} lambda={lam} n={list(n)}", bad, 0.0, seed))
    return checks


def suite_residuals(seed: int = 0, points: int = 20) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = []
    for N, lam, n in ((2, Fraction(3, 2), (2, 0)), (3, Fraction(2), (2, 1, 0)), (2, Fraction(2), (0, 0))):
        p = ModelParams(N, lam)
        ef = assemble_P(n, p)
        x = sample_points(ef.P, N, points, rng)
        checks.append(Check(f"residual trig N={N} lambda={lam} n={list(n)}",
                            residual_eigen(ef, p, x), 1e-10 * max(1.0, float(ef.eigenvalue.value)), seed))
    # The truncation error of the series is C q^(2(K+1)) with C of a few
    # hundred to ~1e3 for this state (next-order coefficients times energy
    # gaps of ~36), so the bound uses ELLIPTIC_RESIDUAL_FACTOR and the q^(2(K+1))
    # scaling is checked separately by halving q.
    K = 2
    p = ModelParams(2, 2)
    ef = assemble_P((1, 0), p, EllipticParams(K)).normalized()
    res = {}
    for q in (0.1, 0.05):
        x = sample_points(ef.P, 2, points, np.random.default_rng(seed), q)
        res[q] = residual_eigen(ef, p, x, q)
        checks.append(Check(f"residual elliptic N=2 lambda=2 n=[1, 0] q={q} K=2",
                            res[q], ELLIPTIC_RESIDUAL_FACTOR * q ** (2 * (K + 1)), seed))
    ratio = res[0.1] / res[0.05]
    checks.append(Check("residual elliptic scaling ratio |r(0.1)/r(0.05) / 64 - 1|",
                        abs(ratio / 64 - 1), 0.2, seed))
    return checks


ELLIPTIC_RESIDUAL_FACTOR = 2000.0

SUITES = {"identities": suite_identities, "jack": suite_jack, "residuals": suite_residuals}


def verification_report(suite: str = "all", seed: int = 0) -> dict:
    if suite != "all" and suite not in SUITES:
        raise InvalidInput(f"unknown suite {suite!r}")
    names = list(SUITES) if suite == "all" else [suite]
    checks = []
    for name in names:
        checks.extend(SUITES[name](seed))
    return {"suite": suite, "seed": seed, "passed": all(c.passed for c in checks),
            "checks": [c.to_json_obj() for c in checks]}


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)
