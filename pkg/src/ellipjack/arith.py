"""Exact coefficient arithmetic.

Rationals are :class:`fractions.Fraction`.  :class:`QSeries` is a truncated
power series in ``q**2``; entry ``d`` of ``coeffs`` multiplies ``q**(2*d)``.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Number
from typing import Iterable, Sequence

from .errors import OrderMismatch, ZeroConstantTerm

Rational = Fraction


def as_rational(x) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def gen_binomial(a, k: int) -> Fraction:
    """a(a-1)...(a-k+1)/k! for rational ``a``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    a = as_rational(a)
    out = Fraction(1)
    for i in range(k):
        out = out * (a - i) / (i + 1)
    return out


def rising_over_factorial(a, k: int) -> Fraction:
    """(a)_k / k!, i.e. binom(-a, k) * (-1)**k."""
    a = as_rational(a)
    out = Fraction(1)
    for i in range(k):
        out = out * (a + i) / (i + 1)
    return out


class QSeries:
    """Truncated series ``sum_d coeffs[d] q**(2d)``, ``d <= order``.

    Coefficients are normally Fractions; floats and complex numbers are
    accepted too so the same walk sums can be evaluated in floating point.
    Mixing two series of different order raises :class:`OrderMismatch`.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = list(coeffs)
        if order is not None:
            if order < 0:
                raise ValueError("truncation order must be >= 0")
            cs = cs[: order + 1] + [0] * (order + 1 - len(cs))
        if not cs:
            raise ValueError("a QSeries needs at least one coefficient")
        self.coeffs = tuple(Fraction(c) if isinstance(c, int) else c for c in cs)

    # construction helpers
    @classmethod
    def constant(cls, c, order: int) -> "QSeries":
        return cls([c], order)

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls([1], order)

    @classmethod
    def monomial(cls, c, degree: int, order: int) -> "QSeries":
        cs = [0] * (order + 1)
        if degree <= order:
            cs[degree] = c
        return cls(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, d):
        return self.coeffs[d]

    def __iter__(self):
        return iter(self.coeffs)

    def valuation(self) -> int | None:
        """Index of the first non-zero coefficient, or None for zero."""
        for d, c in enumerate(self.coeffs):
            if c != 0:
                return d
        return None

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            if other.order != self.order:
                raise OrderMismatch(
                    f"series orders differ: {self.order} vs {other.order}")
            return other
        if isinstance(other, Number):
            return QSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSeries(a + b for a, b in zip(self.coeffs, o.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return QSeries(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSeries(a - b for a, b in zip(self.coeffs, o.coeffs))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return QSeries(c * other for c in self.coeffs)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return qseries_mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return QSeries(c / other for c in self.coeffs)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return qseries_mul(self, qseries_inv(o))

    def __rtruediv__(self, other):
        return qseries_inv(self) * other

    def __pow__(self, k: int):
        if k < 0:
            return qseries_inv(self) ** (-k)
        out = QSeries.one(self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QSeries):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, Number):
            return self.coeffs[0] == other and all(c == 0 for c in self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        return hash(("QSeries", self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def truncate(self, order: int) -> "QSeries":
        return QSeries(self.coeffs, order)

    def evaluate(self, q):
        """Numeric value at a concrete nome ``q`` (series variable is q**2)."""
        q2 = q * q
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * q2 + (c if isinstance(c, complex) else float(c))
        return acc

    def map(self, fn) -> "QSeries":
        return QSeries(fn(c) for c in self.coeffs)

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "QSeries":
        return cls(as_rational(c) for c in data)

    def __repr__(self):
        terms = []
        for d, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"{c}" if d == 0 else f"{c}*q^{2 * d}")
        body = " + ".join(terms) if terms else "0"
        return f"QSeries({body}; K={self.order})"


def qseries_mul(a: QSeries, b: QSeries) -> QSeries:
    if a.order != b.order:
        raise OrderMismatch(f"series orders differ: {a.order} vs {b.order}")
    K = a.order
    ac, bc = a.coeffs, b.coeffs
    out = [0] * (K + 1)
    for i, x in enumerate(ac):
        if x == 0:
            continue
        for j in range(K + 1 - i):
            y = bc[j]
            if y != 0:
                out[i + j] += x * y
    return QSeries(out)


def qseries_inv(a: QSeries) -> QSeries:
    c0 = a.coeffs[0]
    if c0 == 0:
        raise ZeroConstantTerm("cannot invert a series with zero constant term")
    K = a.order
    inv0 = Fraction(1) / c0 if isinstance(c0, (int, Fraction)) else 1 / c0
    out = [inv0] + [0] * K
    for d in range(1, K + 1):
        acc = 0
        for i in range(1, d + 1):
            acc += a.coeffs[i] * out[d - i]
        out[d] = -acc * inv0
    return QSeries(out)


def as_series(x, order: int) -> QSeries:
    """Embed a scalar as a constant series, or check a series' order."""
    if isinstance(x, QSeries):
        if x.order != order:
            raise OrderMismatch(f"series orders differ: {x.order} vs {order}")
        return x
    return QSeries.constant(x, order)
