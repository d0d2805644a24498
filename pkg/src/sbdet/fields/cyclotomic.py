"""Elements a + b*omega of Q(omega), omega a primitive cube root of unity."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

import flint


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, flint.fmpz):
        return Fraction(int(x))
    return Fraction(x)


class Cyclotomic:
    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = _frac(a)
        self.b = _frac(b)

    @classmethod
    def omega(cls) -> "Cyclotomic":
        return cls(0, 1)

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            return other
        if isinstance(other, (int, Fraction, flint.fmpq, flint.fmpz)):
            return Cyclotomic(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyclotomic(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(-self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyclotomic(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        # omega^2 = -1 - omega
        a, b, c, d = self.a, self.b, o.a, o.b
        return Cyclotomic(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def conjugate(self) -> "Cyclotomic":
        """Image under omega -> omega^2."""
        return Cyclotomic(self.a - self.b, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self) -> "Cyclotomic":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in Q(omega)")
        c = self.conjugate()
        return Cyclotomic(c.a / n, c.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return Cyclotomic(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = Cyclotomic(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Cyclotomic({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*omega"
        return f"({self.a} + {self.b}*omega)"


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def cyclotomic_root(c: Cyclotomic, n: int):
    """Return some r in Q(omega) with r**n == c, or None.

    Any root lies in a field of degree <= 2 over Q, so it is a root of a
    factor of degree 1 or 2 of (X^n - c)(X^n - conj(c)) over Q.
    """
    if c.is_zero():
        return Cyclotomic(0)
    tr = 2 * c.a - c.b
    nm = c.norm()
    coeffs = [0] * (2 * n + 1)
    coeffs[0] = nm
    coeffs[n] = -tr
    coeffs[2 * n] = 1
    poly = flint.fmpq_poly([flint.fmpq(x.numerator, x.denominator) if isinstance(x, Fraction) else x for x in coeffs])
    _, factors = poly.factor()
    for f, _mult in factors:
        deg = f.degree()
        cands = []
        if deg == 1:
            a1, a0 = _frac(f[1]), _frac(f[0])
            cands.append(Cyclotomic(-a0 / a1))
        elif deg == 2:
            a2, a1, a0 = _frac(f[2]), _frac(f[1]), _frac(f[0])
            p, q = a1 / a2, a0 / a2
            disc = p * p - 4 * q
            s = _rational_sqrt(disc / -3)
            if s is not None:
                sq = Cyclotomic(s, 2 * s)  # s * sqrt(-3), sqrt(-3) = 1 + 2 omega
                cands.append((Cyclotomic(-p) + sq) / 2)
                cands.append((Cyclotomic(-p) - sq) / 2)
        for r in cands:
            if r ** n == c:
                return r
    return None
