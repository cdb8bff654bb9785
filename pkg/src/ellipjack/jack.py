"""Reference Jack polynomials from the triangular eigen-recursion of D.

D = (1/2lam) sum_j z_j^2 d_j^2 + sum_{j != k} z_j^2/(z_j - z_k) d_j

The expansion coefficients of D M_m are computed, never tabulated, and the
eigenvector with leading coefficient 1 is solved for by back substitution in
a linear extension of dominance order.  This module deliberately shares no
code with the contour-integral engine it is used to check.
"""
from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from . import polydict
from .arith import as_rational
from .errors import DegenerateRecursion, InvalidInput, NonSymmetricInput
from .symfunc import SymPoly, dominance_leq, dominated_partitions, is_partition, monomial_sym


@dataclass(frozen=True)
class ModelParams:
    N: int
    lam: Fraction
    p: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rational(self.lam))
        if self.N < 1:
            raise InvalidInput("N must be positive")
        if self.lam <= 0:
            raise InvalidInput("lambda must be a positive rational")

    @property
    def gamma(self) -> Fraction:
        return 2 * self.lam * (self.lam - 1)

    @property
    def ground_energy(self) -> Fraction:
        return self.lam ** 2 * self.N * (self.N ** 2 - 1) / 12


def _apply_D_explicit(poly: dict, N: int, lam: Fraction) -> dict:
    out = {}
    # (1/2lam) z_j^2 d_j^2 on z^e gives e_j (e_j - 1)/(2 lam) z^e
    for e, c in poly.items():
        s = sum(x * (x - 1) for x in e)
        if s:
            out[e] = out.get(e, 0) + c * Fraction(s) / (2 * lam)
    for j in range(N):
        for k in range(j + 1, N):
            num = {}
            for e, c in poly.items():
                for idx in (j, k):
                    if e[idx] == 0:
                        continue
                    f = list(e)
                    f[idx] += 1
                    f = tuple(f)
                    sign = 1 if idx == j else -1
                    num[f] = num.get(f, 0) + sign * e[idx] * c
            num = {e: c for e, c in num.items() if c != 0}
            q = polydict.divide_by_difference(num, j, k)
            if q is None:
                raise NonSymmetricInput(
                    f"(z{j+1}^2 d{j+1} - z{k+1}^2 d{k+1}) p is not divisible by z{j+1} - z{k+1}")
            out = polydict.padd(out, q)
    return {e: c for e, c in out.items() if c != 0}


def apply_D(p: SymPoly, params: ModelParams) -> SymPoly:
    if p.laurent:
        raise InvalidInput("apply_D needs a polynomial (no negative exponents)")
    explicit = _apply_D_explicit(p.to_explicit(), p.N, params.lam)
    result = SymPoly.from_explicit(p.N, explicit)
    # the read-off above ignores unsorted exponents; make sure nothing asymmetric slipped in
    if polydict.padd(result.to_explicit(), explicit, -1):
        raise NonSymmetricInput("D p is not symmetric")
    return result


class _DCache:
    """Thread-safe memo of D M_m keyed by (m, lam)."""

    def __init__(self):
        self._lock = threading.Lock()
        self._data: dict = {}

    def get(self, m: tuple, params: ModelParams) -> SymPoly:
        key = (m, params.lam)
        with self._lock:
            hit = self._data.get(key)
        if hit is not None:
            return hit
        val = apply_D(monomial_sym(m), params)
        with self._lock:
            self._data.setdefault(key, val)
        return val

    def clear(self):
        with self._lock:
            self._data.clear()


D_CACHE = _DCache()


@dataclass
class JackResult:
    n: tuple
    poly: SymPoly
    eigenvalue: Fraction
    order: list = field(default_factory=list)


def _linear_extension(parts: list[tuple], rng: random.Random | None) -> list[tuple]:
    """A random (or the lexicographic) linear extension of dominance, largest first."""
    if rng is None:
        return list(parts)
    remaining = list(parts)
    out = []
    while remaining:
        maximal = [m for m in remaining
                   if not any(o != m and dominance_leq(m, o) for o in remaining)]
        pick = rng.choice(maximal)
        out.append(pick)
        remaining.remove(pick)
    return out


def jack_by_recursion(n, params: ModelParams, *, seed: int | None = None,
                      use_cache: bool = True) -> JackResult:
    """Jack polynomial J_n normalized to v_{n,n} = 1.

    ``seed`` selects a random linear extension of dominance order for the
    back substitution (the result must not depend on it).
    """
    n = tuple(n)
    if len(n) != params.N or not is_partition(n):
        raise InvalidInput(f"{n} is not a partition with {params.N} parts")
    rng = random.Random(seed) if seed is not None else None
    order = _linear_extension(dominated_partitions(n), rng)

    def DM(m):
        return D_CACHE.get(m, params) if use_cache else apply_D(monomial_sym(m), params)

    b_nn = DM(n)[n]
    v = {n: Fraction(1)}
    for mp in order:
        if mp == n:
            continue
        rhs = Fraction(0)
        for m, vm in v.items():
            rhs += vm * DM(m)[mp]
        denom = b_nn - DM(mp)[mp]
        if denom == 0:
            raise DegenerateRecursion(
                f"b_nn - b_mm vanishes for n={n}, m={mp}, lambda={params.lam}")
        v[mp] = rhs / denom
    return JackResult(n, SymPoly(params.N, v), b_nn, order)
