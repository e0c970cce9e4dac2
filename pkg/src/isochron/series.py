"""Truncated power series with polynomial coefficients.

A :class:`PSeries` in ``x`` stores the coefficients of x^0 .. x^N, where N is
the truncation order; everything above N is unknown, never zero.  Binary
operations keep the smaller order.  All coefficients of one series live in
the same parameter ring so the inner loops work on raw term dicts.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from gmpy2 import mpq

from .algebra.numbers import RAT_TYPES, rational_sqrt, to_rat
from .algebra.orders import sort_vars
from .algebra.poly import BITS, FIELD, Poly, addmul_terms, clean, repack
from .algebra.ratfunc import RationalFunction


class SeriesError(ValueError):
    pass


def _ring_of(polys: Iterable[Poly]) -> tuple[str, ...]:
    names: set[str] = set()
    for p in polys:
        names.update(p.used_vars())
    return sort_vars(names)


def _scaled(t: dict, c) -> dict:
    return {e: v * c for e, v in t.items()} if c != 1 else t


def _unit_value(t: dict):
    """The rational value of a constant coefficient, or None."""
    if not t:
        return mpq(0)
    if len(t) == 1 and 0 in t:
        return t[0]
    return None


class PSeries:
    __slots__ = ("var", "ring", "_t", "order", "_val")

    def __init__(self, coeffs: Sequence, order: int | None = None, var: str = "x",
                 ring: tuple[str, ...] | None = None):
        polys = [c if isinstance(c, Poly) else Poly.constant(c) for c in coeffs]
        if order is None:
            order = len(polys) - 1
        if order < -1:
            raise SeriesError("truncation order must be >= -1")
        polys = polys[: order + 1]
        if ring is None:
            ring = _ring_of(polys)
        self.var = var
        self.ring = ring
        self._t = [repack(p.trim().terms, p.trim().vars, ring) if p.vars != ring else p.terms for p in polys]
        self._t += [{} for _ in range(order + 1 - len(self._t))]
        self.order = order
        self._val = None

    @classmethod
    def _raw(cls, terms: list[dict], order: int, var: str, ring: tuple[str, ...]) -> "PSeries":
        s = cls.__new__(cls)
        s.var, s.ring, s.order, s._val = var, ring, order, None
        s._t = terms[: order + 1] + [{} for _ in range(order + 1 - len(terms))]
        return s

    @classmethod
    def constant(cls, c, order: int, var: str = "x") -> "PSeries":
        return cls([c], order, var)

    @classmethod
    def identity(cls, order: int, var: str = "x") -> "PSeries":
        return cls([0, 1], order, var)

    @classmethod
    def from_poly(cls, p: Poly, var: str, order: int) -> "PSeries":
        """Expand a polynomial in ``var`` (other variables become parameters)."""
        coeffs = p.coefficients_in(var)
        out = [coeffs.get(k, Poly.zero()) for k in range(order + 1)]
        return cls(out, order, var)

    @classmethod
    def from_ratfunc(cls, rf: RationalFunction | Poly, var: str, order: int) -> "PSeries":
        rf = RationalFunction.lift(rf)
        num = cls.from_poly(rf.num, var, order)
        if rf.is_polynomial():
            return num
        den = cls.from_poly(rf.den, var, order)
        return num * den.reciprocal()

    # ------------------------------------------------------------------ access
    @property
    def coeffs(self) -> list[Poly]:
        return [Poly(self.ring, t).trim() for t in self._t]

    def __getitem__(self, k: int) -> Poly:
        if k < 0:
            raise IndexError(k)
        if k > self.order:
            raise SeriesError(f"coefficient {k} is beyond the truncation order {self.order}")
        return Poly(self.ring, self._t[k]).trim()

    def terms(self, k: int) -> dict:
        return self._t[k]

    @property
    def valuation(self) -> int | None:
        """Lowest index with a nonzero coefficient (None if all known ones vanish)."""
        if self._val is None:
            self._val = next((k for k, t in enumerate(self._t) if t), -1)
        return None if self._val < 0 else self._val

    def truncate(self, order: int) -> "PSeries":
        if order > self.order:
            raise SeriesError(f"cannot extend order {self.order} to {order}")
        return PSeries._raw(self._t, order, self.var, self.ring)

    def in_ring(self, ring: tuple[str, ...]) -> "PSeries":
        if ring == self.ring:
            return self
        return PSeries._raw([repack(t, self.ring, ring) for t in self._t], self.order, self.var, ring)

    def _align(self, other: "PSeries") -> tuple["PSeries", "PSeries"]:
        if other.var != self.var:
            raise SeriesError(f"series variables differ: {self.var} vs {other.var}")
        if self.ring == other.ring:
            return self, other
        ring = sort_vars(set(self.ring) | set(other.ring))
        return self.in_ring(ring), other.in_ring(ring)

    def _lift(self, other) -> "PSeries | None":
        if isinstance(other, PSeries):
            return other
        if isinstance(other, (Poly, *RAT_TYPES)):
            return PSeries([other], self.order, self.var)
        return None

    # ------------------------------------------------------------------ arithmetic
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self._align(o)
        n = min(a.order, b.order)
        out = []
        for k in range(n + 1):
            x, y = a._t[k], b._t[k]
            if not y:
                out.append(x)
            elif not x:
                out.append(y)
            else:
                r = dict(x)
                for e, c in y.items():
                    r[e] = r.get(e, 0) + c
                out.append(clean(r))
        return PSeries._raw(out, n, a.var, a.ring)

    __radd__ = __add__

    def __neg__(self):
        return PSeries._raw([{e: -c for e, c in t.items()} for t in self._t], self.order, self.var, self.ring)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "PSeries":
        if isinstance(c, Poly):
            return self * c
        c = to_rat(c)
        return PSeries._raw([_scaled(t, c) if c else {} for t in self._t], self.order, self.var, self.ring)

    def __mul__(self, other):
        if isinstance(other, RAT_TYPES):
            return self.scale(other)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self._align(o)
        n = min(a.order, b.order)
        out = []
        for k in range(n + 1):
            r: dict = {}
            for i in range(max(0, k - b.order), min(k, a.order) + 1):
                if a._t[i] and b._t[k - i]:
                    addmul_terms(r, a._t[i], b._t[k - i])
            out.append(clean(r))
        return PSeries._raw(out, n, a.var, a.ring)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RAT_TYPES):
            return self.scale(1 / to_rat(other))
        if isinstance(other, PSeries):
            return self * other.reciprocal()
        return NotImplemented

    def __pow__(self, k):
        if isinstance(k, int):
            if k < 0:
                return self.reciprocal() ** (-k)
            result = PSeries([1], self.order, self.var, self.ring)
            base = self
            while k:
                if k & 1:
                    result = result * base
                k >>= 1
                if k:
                    base = base * base
            return result
        return self.power(k)

    def shift(self, k: int) -> "PSeries":
        """Multiply by var^k (k >= 0) or divide by var^-k when the low terms vanish."""
        if k >= 0:
            return PSeries._raw([{}] * k + self._t, self.order + k, self.var, self.ring)
        if any(self._t[i] for i in range(min(-k, self.order + 1))):
            raise SeriesError(f"cannot divide by {self.var}^{-k}: low-order terms present")
        return PSeries._raw(self._t[-k:], self.order + k, self.var, self.ring)

    def reciprocal(self) -> "PSeries":
        c0 = _unit_value(self._t[0]) if self.order >= 0 else None
        if not c0:
            raise SeriesError("reciprocal needs a nonzero rational constant term")
        inv = 1 / c0
        out = [{0: inv}]
        for n in range(1, self.order + 1):
            r: dict = {}
            for k in range(1, n + 1):
                if self._t[k] and out[n - k]:
                    addmul_terms(r, self._t[k], out[n - k])
            out.append(clean({e: -c * inv for e, c in r.items()}))
        return PSeries._raw(out, self.order, self.var, self.ring)

    # ------------------------------------------------------------------ calculus
    def differentiate(self) -> "PSeries":
        out = [_scaled(self._t[k], k) for k in range(1, self.order + 1)]
        return PSeries._raw(out, self.order - 1, self.var, self.ring)

    def integrate(self) -> "PSeries":
        """Antiderivative vanishing at 0."""
        out = [{}] + [_scaled(self._t[k], mpq(1, k + 1)) for k in range(self.order + 1)]
        return PSeries._raw(out, self.order + 1, self.var, self.ring)

    def exp(self) -> "PSeries":
        if self.order >= 0 and self._t[0]:
            raise SeriesError("exp needs valuation >= 1")
        d = [_scaled(self._t[k], k) for k in range(self.order + 1)]  # k*s_k
        out = [{0: mpq(1)}]
        for n in range(1, self.order + 1):
            r: dict = {}
            for k in range(1, n + 1):
                if d[k] and out[n - k]:
                    addmul_terms(r, d[k], out[n - k])
            out.append(clean({e: c / n for e, c in r.items()}))
        return PSeries._raw(out, self.order, self.var, self.ring)

    def log(self) -> "PSeries":
        if _unit_value(self._t[0]) != 1:
            raise SeriesError("log needs constant term 1")
        return (self.differentiate() * self.reciprocal().truncate(self.order - 1)).integrate()

    def power(self, alpha) -> "PSeries":
        """s^alpha for rational alpha; the constant term must be 1."""
        alpha = to_rat(alpha)
        if _unit_value(self._t[0]) != 1:
            raise SeriesError("rational power needs constant term 1")
        out = [{0: mpq(1)}]
        for n in range(1, self.order + 1):
            r: dict = {}
            for k in range(1, n + 1):
                if self._t[k] and out[n - k]:
                    addmul_terms(r, self._t[k], out[n - k], (alpha + 1) * k - n)
            out.append(clean({e: c / n for e, c in r.items()}))
        return PSeries._raw(out, self.order, self.var, self.ring)

    def sqrt_valuation2(self) -> "PSeries":
        """Positive-branch square root of a series x^2*(c + ...) with c a rational square."""
        v = self.valuation
        if v != 2:
            raise SeriesError(f"sqrt_valuation2 needs valuation exactly 2, got {v}")
        c = _unit_value(self._t[2])
        if c is None or c <= 0:
            raise SeriesError("leading coefficient must be a positive rational")
        r = rational_sqrt(c)
        if r is None:
            raise SeriesError(f"leading coefficient {c} is not a rational square")
        u = self.shift(-2).scale(1 / c)
        return u.power(mpq(1, 2)).scale(r).shift(1)

    def compose(self, t: "PSeries") -> "PSeries":
        """self(t(x)); t must have zero constant term."""
        a, t = self._align(t)
        if t.order >= 0 and t._t[0]:
            raise SeriesError("composition needs an inner series with zero constant term")
        v = t.valuation or (t.order + 1)
        order = min(t.order, (a.order + 1) * v - 1)
        tt = t.truncate(min(order, t.order))
        result = PSeries._raw([a._t[a.order]], order, a.var, a.ring)
        for k in range(a.order - 1, -1, -1):
            result = (result * tt).truncate(order) + PSeries._raw([a._t[k]], order, a.var, a.ring)
        return result

    def revert(self) -> "PSeries":
        """Compositional inverse via Lagrange inversion."""
        if self.valuation != 1:
            raise SeriesError(f"reversion needs valuation exactly 1, got {self.valuation}")
        c1 = _unit_value(self._t[1])
        if not c1:
            raise SeriesError("reversion needs a nonzero rational linear coefficient")
        N = self.order
        q = self.shift(-1).reciprocal()  # x / s(x)
        out = [{}]
        qn = PSeries([1], N - 1, self.var, self.ring)
        for n in range(1, N + 1):
            qn = (qn * q).truncate(N - 1)
            out.append(_scaled(qn._t[n - 1], mpq(1, n)))
        return PSeries._raw(out, N, self.var, self.ring)

    # ------------------------------------------------------------------ comparison / output
    def substitute(self, mapping) -> "PSeries":
        return PSeries([c.subs(mapping) for c in self.coeffs], self.order, self.var)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self._align(o)
        n = min(a.order, b.order)
        return all(a._t[k] == b._t[k] for k in range(n + 1))

    def agrees_with(self, other: "PSeries", order: int) -> bool:
        a, b = self._align(other)
        if order > min(a.order, b.order):
            raise SeriesError("comparison beyond known order")
        return all(a._t[k] == b._t[k] for k in range(order + 1))

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({self.var}^{self.order + 1})"

    __repr__ = __str__


class BiSeries:
    """Series in two state variables truncated by total degree.

    Stored as one polynomial over (parameters, x, y); terms of (x, y)-degree
    above ``order`` are dropped after every operation.
    """

    __slots__ = ("poly", "order", "xv", "yv")

    def __init__(self, poly: Poly, order: int, xv: str = "x", yv: str = "y"):
        self.xv, self.yv, self.order = xv, yv, order
        self.poly = _truncate_xy(poly.with_vars((xv, yv)), xv, yv, order)

    @classmethod
    def lift(cls, value, order: int, xv="x", yv="y") -> "BiSeries":
        if isinstance(value, BiSeries):
            return value
        if isinstance(value, RAT_TYPES):
            value = Poly.constant(value)
        return cls(value, order, xv, yv)

    def _bin(self, other):
        o = BiSeries.lift(other, self.order, self.xv, self.yv)
        return o, min(self.order, o.order)

    def __add__(self, other):
        o, n = self._bin(other)
        return BiSeries(self.poly + o.poly, n, self.xv, self.yv)

    __radd__ = __add__

    def __neg__(self):
        return BiSeries(-self.poly, self.order, self.xv, self.yv)

    def __sub__(self, other):
        o, n = self._bin(other)
        return BiSeries(self.poly - o.poly, n, self.xv, self.yv)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o, n = self._bin(other)
        a = _truncate_xy(self.poly, self.xv, self.yv, n)
        b = _truncate_xy(o.poly, self.xv, self.yv, n)
        vars, (ta, tb) = Poly.unify(a, b)
        return BiSeries(Poly(vars, _mul_trunc(ta, tb, vars, self.xv, self.yv, n)), n, self.xv, self.yv)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = BiSeries(Poly.constant(1), self.order, self.xv, self.yv)
        for _ in range(k):
            out = out * self
        return out

    def constant_term(self) -> Poly:
        """Part of the series free of x and y (a polynomial in the parameters)."""
        return self.poly.subs({self.xv: 0, self.yv: 0})

    def reciprocal(self) -> "BiSeries":
        """1/s for s = c*(1 + w) with c a nonzero rational and w vanishing at the origin."""
        c0 = self.constant_term()
        if not c0.is_constant() or c0.is_zero():
            raise SeriesError("reciprocal needs a nonzero rational constant term")
        c = c0.constant_value()
        w = BiSeries(self.poly.scale(1 / c) - 1, self.order, self.xv, self.yv)
        return _geometric(w, self.order, lambda k: (-1) ** k).scale(1 / c)

    def power(self, alpha) -> "BiSeries":
        """(1 + w)^alpha by the binomial series; constant term must be 1."""
        alpha = to_rat(alpha)
        c0 = self.constant_term()
        if c0 != 1:
            raise SeriesError("rational power needs constant term 1")
        w = BiSeries(self.poly - 1, self.order, self.xv, self.yv)
        coef = [mpq(1)]
        for k in range(1, self.order + 1):
            coef.append(coef[-1] * (alpha - k + 1) / k)
        return _geometric(w, self.order, lambda k: coef[k])

    def scale(self, c) -> "BiSeries":
        return BiSeries(self.poly.scale(c), self.order, self.xv, self.yv)

    def diff(self, var: str) -> "BiSeries":
        n = self.order - 1 if var in (self.xv, self.yv) else self.order
        return BiSeries(self.poly.diff(var), n, self.xv, self.yv)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def low_degree(self) -> int | None:
        """Smallest (x, y)-degree carrying a nonzero term."""
        if self.poly.is_zero():
            return None
        ix, iy = self.poly.vars.index(self.xv), self.poly.vars.index(self.yv)
        return min(ex[ix] + ex[iy] for ex, _ in self.poly.items())

    def __repr__(self):
        return f"BiSeries({self.poly} + O({self.order + 1}))"


def _shifts(vars, xv, yv):
    n = len(vars)
    return BITS * (n - 1 - vars.index(xv)), BITS * (n - 1 - vars.index(yv))


def _truncate_xy(p: Poly, xv: str, yv: str, order: int) -> Poly:
    sx, sy = _shifts(p.vars, xv, yv)
    return Poly(p.vars, {e: c for e, c in p.terms.items() if ((e >> sx) & FIELD) + ((e >> sy) & FIELD) <= order})


def _mul_trunc(a: dict, b: dict, vars, xv, yv, order) -> dict:
    sx, sy = _shifts(vars, xv, yv)

    def buckets(t):
        out: dict[int, dict] = {}
        for e, c in t.items():
            out.setdefault(((e >> sx) & FIELD) + ((e >> sy) & FIELD), {})[e] = c
        return out

    ba, bb = buckets(a), buckets(b)
    r: dict = {}
    for da, ta in ba.items():
        for db, tb in bb.items():
            if da + db <= order:
                addmul_terms(r, ta, tb)
    return clean(r)


def _geometric(w: BiSeries, order: int, coef) -> BiSeries:
    """sum_k coef(k) w^k with w vanishing at the origin."""
    acc = BiSeries(Poly.constant(coef(0)), order, w.xv, w.yv)
    wk = BiSeries(Poly.constant(1), order, w.xv, w.yv)
    low = w.low_degree() or order + 1
    k = 1
    while k * low <= order:
        wk = wk * w
        acc = acc + wk.scale(coef(k))
        k += 1
    return acc


__all__ = ["PSeries", "BiSeries", "SeriesError"]
