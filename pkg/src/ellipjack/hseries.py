"""Truncated power series in an auxiliary variable h (used for Taylor shifts)."""
from __future__ import annotations

from fractions import Fraction
from numbers import Number


class HSeries:
    __slots__ = ("c",)

    def __init__(self, coeffs, length: int):
        cs = list(coeffs)[:length]
        cs += [Fraction(0)] * (length - len(cs))
        self.c = tuple(cs)

    @property
    def length(self) -> int:
        return len(self.c)

    def _lift(self, other):
        if isinstance(other, HSeries):
            return other
        if isinstance(other, Number):
            return HSeries([other], self.length)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return HSeries([a + b for a, b in zip(self.c, o.c)], self.length)

    __radd__ = __add__

    def __neg__(self):
        return HSeries([-a for a in self.c], self.length)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return HSeries([a - b for a, b in zip(self.c, o.c)], self.length)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return HSeries([a * other for a in self.c], self.length)
        if not isinstance(other, HSeries):
            return NotImplemented
        L = self.length
        out = [Fraction(0)] * L
        for i, x in enumerate(self.c):
            if x == 0:
                continue
            for j in range(L - i):
                y = other.c[j]
                if y != 0:
                    out[i + j] += x * y
        return HSeries(out, L)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return HSeries([a / other for a in self.c], self.length)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def inverse(self) -> "HSeries":
        c0 = self.c[0]
        if c0 == 0:
            raise ZeroDivisionError("h-series with zero constant term")
        L = self.length
        out = [Fraction(1) / c0] + [Fraction(0)] * (L - 1)
        for d in range(1, L):
            acc = sum(self.c[i] * out[d - i] for i in range(1, d + 1))
            out[d] = -acc / c0
        return HSeries(out, L)

    def __eq__(self, other):
        if isinstance(other, HSeries):
            return self.c == other.c
        if isinstance(other, Number):
            return self.c[0] == other and all(a == 0 for a in self.c[1:])
        return NotImplemented

    __hash__ = None

    def __getitem__(self, i):
        return self.c[i]

    def __repr__(self):
        return f"HSeries({list(self.c)})"
