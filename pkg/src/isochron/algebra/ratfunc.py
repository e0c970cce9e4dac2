"""Quotients of polynomials, kept unreduced apart from constant denominators."""

from __future__ import annotations

from typing import Mapping

from .numbers import RAT_TYPES, to_rat
from .poly import Poly, pack, unpack


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if isinstance(num, RAT_TYPES):
            num = Poly.constant(num)
        if den is None:
            den = Poly.constant(1)
        elif isinstance(den, RAT_TYPES):
            den = Poly.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if den.is_constant():
            c = den.constant_value()
            num, den = num.scale(1 / c), Poly.constant(1)
        elif num.terms:
            num, den = _cancel_monomial(num, den)
        self.num = num
        self.den = den

    @classmethod
    def lift(cls, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, Poly):
            return cls(value)
        if isinstance(value, RAT_TYPES):
            return cls(Poly.constant(value))
        raise TypeError(f"cannot lift {type(value).__name__} to a rational function")

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError("not a polynomial")
        return self.num

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        try:
            o = RationalFunction.lift(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        try:
            o = RationalFunction.lift(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = RationalFunction.lift(other)
        except TypeError:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = RationalFunction.lift(other)
        except TypeError:
            return NotImplemented
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RationalFunction.lift(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return RationalFunction(self.den ** (-k), self.num ** (-k))
        return RationalFunction(self.num ** k, self.den ** k)

    def __eq__(self, other):
        try:
            o = RationalFunction.lift(other)
        except TypeError:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den)) if self.is_polynomial() else id(self)

    def diff(self, var: str) -> "RationalFunction":
        if self.is_polynomial():
            return RationalFunction(self.num.diff(var))
        return RationalFunction(self.num.diff(var) * self.den - self.num * self.den.diff(var), self.den * self.den)

    def subs(self, mapping: Mapping[str, object]) -> "RationalFunction":
        return _subs_any(self.num, mapping) / _subs_any(self.den, mapping)

    def evaluate(self, values):
        return self.num.evaluate(values) / self.den.evaluate(values)

    def used_vars(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.num.used_vars()) | set(self.den.used_vars())))

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


def _cancel_monomial(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Divide out the largest monomial dividing both numerator and denominator."""
    vars, (a, b) = Poly.unify(num, den)
    n = len(vars)
    low = None
    for e in list(a) + list(b):
        ex = unpack(e, n)
        low = ex if low is None else tuple(min(u, v) for u, v in zip(low, ex))
        if not any(low):
            return num, den
    g = pack(low)
    return Poly(vars, {e - g: c for e, c in a.items()}), Poly(vars, {e - g: c for e, c in b.items()})


def _subs_any(p: Poly, mapping: Mapping[str, object]) -> RationalFunction:
    """Substitute rationals, polynomials or rational functions into a polynomial."""
    rf_vars = {v: RationalFunction.lift(val) for v, val in mapping.items()
               if v in p.vars and isinstance(val, RationalFunction) and not val.is_polynomial()}
    plain = {v: (val.num if isinstance(val, RationalFunction) else val)
             for v, val in mapping.items() if v in p.vars and v not in rf_vars}
    q = p.subs(plain) if plain else p
    if not rf_vars:
        return RationalFunction(q)
    # clear the denominators: p(n/d) = sum_k c_k n^k d^(K-k) / d^K per variable
    expanded = {(): q}
    keys = list(rf_vars)
    top = [q.degree(v) for v in keys]
    for v in keys:
        nxt = {}
        for path, poly in expanded.items():
            for k, c in poly.coefficients_in(v).items():
                nxt[path + (k,)] = c
        expanded = nxt
    num = Poly.constant(0)
    pw: dict = {}

    def power(v, which, k):
        if (v, which, k) not in pw:
            base = rf_vars[v].num if which == 0 else rf_vars[v].den
            pw[(v, which, k)] = base ** k
        return pw[(v, which, k)]

    for path, coeff in expanded.items():
        term = coeff
        for v, k, kmax in zip(keys, path, top):
            term = term * power(v, 0, k) * power(v, 1, kmax - k)
        num = num + term
    den = Poly.constant(1)
    for v, kmax in zip(keys, top):
        den = den * power(v, 1, kmax)
    return RationalFunction(num, den)


def to_rational_function(value) -> RationalFunction:
    return RationalFunction.lift(value)


__all__ = ["RationalFunction", "to_rational_function", "to_rat"]
