"""Integer vectors, partitions, dominance order and symmetric polynomials.

Vectors are plain tuples of ints.  A :class:`SymPoly` stores coefficients in
the monomial basis ``M_m = sum over all N! permutations P of z**(m_P)``; note
that this is the full-group sum, so ``M_(1,1) = 2 z1 z2`` for two variables.
Keys are weakly decreasing tuples.  Negative entries (Laurent support) are
allowed; :attr:`SymPoly.laurent` flags them.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter
from fractions import Fraction
from math import factorial, prod
from typing import Iterator, Mapping

from .arith import QSeries, as_rational, format_rational
from .errors import InvalidInput, NoUniqueLeading

IntVector = tuple


def as_vector(v) -> tuple:
    if isinstance(v, str):
        v = [int(x) for x in v.replace(" ", "").split(",") if x]
    return tuple(int(x) for x in v)


def weight(m) -> int:
    return sum(m)


def is_partition(m) -> bool:
    return all(m[i] >= m[i + 1] for i in range(len(m) - 1)) and (not m or m[-1] >= 0)


def prefix_sums(m) -> list[int]:
    return list(itertools.accumulate(m))


def tails(m) -> list[int]:
    """[m_j + ... + m_N for j = 1..N]."""
    out = list(itertools.accumulate(reversed(m)))
    out.reverse()
    return out


def tail_nonneg(m) -> bool:
    return all(t >= 0 for t in tails(m))


def dominance_leq(m, n) -> bool:
    if len(m) != len(n):
        raise InvalidInput(f"length mismatch: {len(m)} vs {len(n)}")
    if sum(m) != sum(n):
        return False
    return all(a <= b for a, b in zip(prefix_sums(m), prefix_sums(n)))


def stabilizer_order(m) -> int:
    return prod(factorial(c) for c in Counter(m).values())


def sort_desc(m) -> tuple:
    return tuple(sorted(m, reverse=True))


def partitions(w: int, N: int, max_part: int | None = None) -> Iterator[tuple]:
    """Partitions of ``w`` with at most ``N`` parts, padded with zeros."""
    if max_part is None:
        max_part = w
    if N == 0:
        if w == 0:
            yield ()
        return
    if w == 0:
        yield (0,) * N
        return
    for first in range(min(w, max_part), 0, -1):
        if first * N < w:
            break
        for rest in partitions(w - first, N - 1, first):
            yield (first,) + rest


def dominated_partitions(n) -> list[tuple]:
    """All partitions m <= n (same length), in decreasing lexicographic order.

    Decreasing lexicographic order is a linear extension of dominance, so
    every m appears after everything that dominates it.
    """
    return [m for m in partitions(sum(n), len(n)) if dominance_leq(m, n)]


def distinct_permutations(m) -> Iterator[tuple]:
    return iter(set(itertools.permutations(m)))


def _is_zero(c) -> bool:
    return c == 0


class SymPoly:
    """Symmetric (Laurent) polynomial in the monomial basis.

    ``coeffs`` maps weakly decreasing integer tuples to Fractions or
    :class:`QSeries`.  Zero coefficients are dropped on construction.
    """

    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs: Mapping | None = None):
        self.N = N
        cs = {}
        for k, c in (coeffs or {}).items():
            k = tuple(k)
            if len(k) != N:
                raise InvalidInput(f"key {k} has length {len(k)}, expected {N}")
            if not all(k[i] >= k[i + 1] for i in range(N - 1)):
                raise InvalidInput(f"key {k} is not weakly decreasing")
            if isinstance(c, int):
                c = Fraction(c)
            if not _is_zero(c):
                cs[k] = c
        self.coeffs = cs

    # basic queries
    @property
    def laurent(self) -> bool:
        return any(k and k[-1] < 0 for k in self.coeffs)

    @property
    def degree(self) -> int | None:
        """Common weight of all keys, or None if inhomogeneous or zero."""
        ws = {sum(k) for k in self.coeffs}
        return ws.pop() if len(ws) == 1 else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, key):
        return self.coeffs.get(tuple(key), Fraction(0))

    def keys(self):
        return self.coeffs.keys()

    def items(self):
        return self.coeffs.items()

    def __eq__(self, other):
        if not isinstance(other, SymPoly):
            return NotImplemented
        if self.N != other.N:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self[k] == other[k] for k in keys)

    __hash__ = None

    def __repr__(self):
        return f"SymPoly(N={self.N}, {self.render()})"

    # ring-ish operations
    def __add__(self, other: "SymPoly") -> "SymPoly":
        return sympoly_add(self, other)

    def __neg__(self):
        return sympoly_scale(self, -1)

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return sympoly_add(self, sympoly_scale(other, -1))

    def __mul__(self, c):
        return sympoly_scale(self, c)

    __rmul__ = __mul__

    def map_coeffs(self, fn) -> "SymPoly":
        return SymPoly(self.N, {k: fn(c) for k, c in self.coeffs.items()})

    def leading_keys(self) -> list[tuple]:
        """Dominance-maximal keys of the support."""
        keys = list(self.coeffs)
        return [k for k in keys
                if not any(o != k and sum(o) == sum(k) and dominance_leq(k, o) for o in keys)]

    def leading(self) -> tuple:
        lead = self.leading_keys()
        if len(lead) != 1:
            raise NoUniqueLeading(f"no unique dominance-maximal key among {lead}")
        return lead[0]

    def normalize_leading(self) -> "SymPoly":
        return sympoly_normalize_leading(self)

    # conversion to and from explicit exponent dictionaries
    def to_explicit(self) -> dict[tuple, object]:
        """Expand into ``{exponent tuple: coefficient}`` over all monomials."""
        out = {}
        for k, c in self.coeffs.items():
            mult = stabilizer_order(k)
            for perm in distinct_permutations(k):
                out[perm] = c * mult
        return out

    @classmethod
    def from_explicit(cls, N: int, poly: Mapping[tuple, object]) -> "SymPoly":
        """Read off monomial-basis coefficients from a symmetric exponent dict.

        Only the weakly decreasing exponents are inspected; symmetry of the
        input is the caller's responsibility.
        """
        out = {}
        for e, c in poly.items():
            if all(e[i] >= e[i + 1] for i in range(N - 1)):
                out[e] = c / stabilizer_order(e)
        return cls(N, out)

    def evaluate(self, z):
        """Evaluate at a point (sequence of numbers) or at the rows of an array."""
        import numpy as np

        z = np.asarray(z, dtype=complex)
        total = np.zeros(z.shape[:-1], dtype=complex)
        for e, c in self.to_explicit().items():
            cv = complex(c) if not isinstance(c, QSeries) else None
            if cv is None:
                raise TypeError("evaluate a QSeries-coefficient polynomial via evaluate_at_q")
            total = total + cv * np.prod(z ** np.array(e), axis=-1)
        return total

    def evaluate_at_q(self, q: float) -> "SymPoly":
        """Replace every QSeries coefficient by its float value at ``q``."""
        return SymPoly(self.N, {
            k: (c.evaluate(q) if isinstance(c, QSeries) else float(c))
            for k, c in self.coeffs.items()})

    def coefficient_order(self, d: int) -> "SymPoly":
        """Polynomial formed by the q**(2d) coefficients."""
        return SymPoly(self.N, {
            k: (c[d] if isinstance(c, QSeries) else (c if d == 0 else Fraction(0)))
            for k, c in self.coeffs.items()})

    # serialization
    def to_json_obj(self) -> dict:
        terms = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            coeff = c.to_json() if isinstance(c, QSeries) else format_rational(c)
            terms.append({"partition": list(k), "coeff": coeff})
        return {"N": self.N, "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "SymPoly":
        coeffs = {}
        for t in obj["terms"]:
            c = t["coeff"]
            coeffs[tuple(t["partition"])] = (
                QSeries.from_json(c) if isinstance(c, list) else as_rational(c))
        return cls(int(obj["N"]), coeffs)

    @classmethod
    def from_json(cls, text: str) -> "SymPoly":
        return cls.from_json_obj(json.loads(text))

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            cs = f"({c!r})" if isinstance(c, QSeries) else str(c)
            parts.append(f"{cs}*M{list(k)}")
        return " + ".join(parts)


def monomial_sym(m, N: int | None = None) -> SymPoly:
    """M_m as a SymPoly (full S_N sum, so the stored coefficient is 1)."""
    m = tuple(m)
    return SymPoly(N or len(m), {sort_desc(m): Fraction(1)})


def sympoly_add(a: SymPoly, b: SymPoly) -> SymPoly:
    if a.N != b.N:
        raise InvalidInput(f"variable counts differ: {a.N} vs {b.N}")
    out = dict(a.coeffs)
    for k, c in b.coeffs.items():
        out[k] = out[k] + c if k in out else c
    return SymPoly(a.N, out)


def sympoly_scale(p: SymPoly, c) -> SymPoly:
    return SymPoly(p.N, {k: v * c for k, v in p.coeffs.items()})


def sympoly_normalize_leading(p: SymPoly) -> SymPoly:
    lead = p.leading()
    c = p.coeffs[lead]
    if isinstance(c, QSeries):
        inv = 1 / c
        return SymPoly(p.N, {k: v * inv for k, v in p.coeffs.items()})
    return SymPoly(p.N, {k: v / c for k, v in p.coeffs.items()})
