"""Exact scalars: rationals (gmpy2.mpq) and elements of a real quadratic field."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import gmpy2
from gmpy2 import mpq, mpz

RAT_TYPES = (int, type(mpz(0)), type(mpq(0)), Fraction)


def to_rat(value) -> mpq:
    """Coerce ints, Fractions, mpq and "num/den" strings to an exact mpq."""
    if isinstance(value, type(mpq(0))):
        return value
    if isinstance(value, (int, type(mpz(0)))):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip().replace(" ", "")
        try:
            if "/" in text:
                num, den = text.split("/")
                if not den or int(den) == 0:
                    raise ValueError
                return mpq(int(num), int(den))
            return mpq(int(text))
        except ValueError:
            raise ValueError(f"not an exact rational: {value!r}") from None
    if isinstance(value, Rational):
        return mpq(value.numerator, value.denominator)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def rat_str(c: mpq) -> str:
    c = to_rat(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def is_squarefree(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def split_square(n: int) -> tuple[int, int]:
    """n = k^2 * d with d square-free."""
    k, d = 1, 1
    f = 2
    m = n
    while f * f <= m:
        while m % (f * f) == 0:
            m //= f * f
            k *= f
        f += 1
    d = m
    return k, d


def rational_sqrt(c) -> mpq | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    c = to_rat(c)
    if c < 0:
        return None
    n, d = mpz(c.numerator), mpz(c.denominator)
    rn, en = gmpy2.isqrt_rem(n)
    rd, ed = gmpy2.isqrt_rem(d)
    if en or ed:
        return None
    return mpq(rn, rd)


class QuadExt:
    """The number a + b*sqrt(d) with a, b rational and d a square-free integer >= 2."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        d = int(d)
        if not is_squarefree(d):
            raise ValueError(f"radicand must be square-free and >= 2, got {d}")
        self.a = to_rat(a)
        self.b = to_rat(b)
        self.d = d

    @classmethod
    def sqrt(cls, d: int) -> "QuadExt":
        return cls(0, 1, d)

    def _lift(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError(f"mixed radicals sqrt({self.d}) and sqrt({other.d})")
            return other
        if isinstance(other, RAT_TYPES):
            return QuadExt(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> mpq:
        """a^2 - d*b^2, i.e. self times its conjugate."""
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        return QuadExt(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadExt(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d) or (
                self.b == 0 and other.b == 0 and self.a == other.a)
        if isinstance(other, RAT_TYPES):
            return self.b == 0 and self.a == to_rat(other)
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with d*b^2
        diff = self.a * self.a - self.d * self.b * self.b
        return sa if diff > 0 else (-sa if diff < 0 else 0)

    def to_mpmath(self):
        import mpmath
        return mpmath.mpf(self.a.numerator) / self.a.denominator + (
            mpmath.mpf(self.b.numerator) / self.b.denominator) * mpmath.sqrt(self.d)

    def __float__(self):
        return float(self.a) + float(self.b) * self.d ** 0.5

    def __repr__(self):
        return f"QuadExt({rat_str(self.a)}, {rat_str(self.b)}, {self.d})"

    def __str__(self):
        if self.b == 0:
            return rat_str(self.a)
        b = f"{rat_str(self.b)}*sqrt({self.d})"
        if self.a == 0:
            return b
        return f"{rat_str(self.a)} + {b}" if self.b > 0 else f"{rat_str(self.a)} - {rat_str(-self.b)}*sqrt({self.d})"
