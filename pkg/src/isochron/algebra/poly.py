"""Sparse multivariate polynomials over Q with named variables.

Exponent vectors are packed into one Python int, ``BITS`` bits per variable,
first variable in the most significant field.  Monomial multiplication is
then integer addition, which is what makes the series and Groebner code
usable in pure Python.  Exponents must stay below ``MAX_EXP``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import gmpy2
from gmpy2 import mpq

from .numbers import RAT_TYPES, QuadExt, rat_str, to_rat
from .orders import DEGREVLEX, WeightedOrder, sort_vars

BITS = 16
FIELD = (1 << BITS) - 1
MAX_EXP = (1 << (BITS - 1)) - 1
_ZERO = mpq(0)
_MPQ = type(_ZERO)


class VariableMismatch(ValueError):
    pass


def pack(exps: Iterable[int]) -> int:
    r = 0
    for e in exps:
        if e < 0 or e > MAX_EXP:
            raise OverflowError(f"exponent {e} out of range")
        r = (r << BITS) | e
    return r


def unpack(p: int, n: int) -> tuple[int, ...]:
    return tuple((p >> (BITS * (n - 1 - i))) & FIELD for i in range(n))


def guard_mask(n: int) -> int:
    """Mask of the top bit of every field; used for divisibility tests."""
    m = 0
    for _ in range(n):
        m = (m << BITS) | (1 << (BITS - 1))
    return m


@lru_cache(maxsize=4096)
def _repack_plan(old: tuple[str, ...], new: tuple[str, ...]):
    n, k = len(old), len(new)
    pos = {v: i for i, v in enumerate(new)}
    # variables absent from ``new`` must carry zero exponents; callers ensure it
    return tuple((BITS * (n - 1 - i), BITS * (k - 1 - pos[v])) for i, v in enumerate(old) if v in pos)


def repack(terms: dict, old: tuple[str, ...], new: tuple[str, ...]) -> dict:
    if old == new:
        return terms
    plan = _repack_plan(old, new)
    out = {}
    for e, c in terms.items():
        r = 0
        for so, sn in plan:
            r |= ((e >> so) & FIELD) << sn
        out[r] = c
    return out


@dataclass(frozen=True)
class WeightedDegree:
    homogeneous: bool
    degree: int | None
    degrees: tuple[int, ...]


class Poly:
    """Immutable sparse polynomial; ``terms`` maps packed exponents to nonzero mpq."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: tuple[str, ...] = (), terms: dict | None = None):
        self.vars = vars
        self.terms = terms if terms is not None else {}

    # ---------------------------------------------------------------- construction
    @classmethod
    def zero(cls, vars: Iterable[str] = ()) -> "Poly":
        return cls(sort_vars(vars), {})

    @classmethod
    def constant(cls, c, vars: Iterable[str] = ()) -> "Poly":
        c = to_rat(c)
        return cls(sort_vars(vars), {0: c} if c else {})

    @classmethod
    def variable(cls, name: str) -> "Poly":
        return cls((name,), {1: mpq(1)})

    @classmethod
    def variables(cls, *names: str) -> list["Poly"]:
        return [cls.variable(n) for n in names]

    @classmethod
    def from_terms(cls, items: Mapping[tuple[int, ...], object] | Iterable, vars: Iterable[str]) -> "Poly":
        """Build from {exponent tuple: coefficient} laid out in the order of ``vars``."""
        vars = tuple(vars)
        canon = sort_vars(vars)
        if len(canon) != len(vars):
            raise VariableMismatch(f"duplicate variable names in {vars}")
        pairs = items.items() if isinstance(items, Mapping) else items
        terms: dict[int, mpq] = {}
        for exps, c in pairs:
            if len(exps) != len(vars):
                raise VariableMismatch(f"exponent vector {exps} does not match variables {vars}")
            p = pack(exps)
            terms[p] = terms.get(p, _ZERO) + to_rat(c)
        terms = {k: v for k, v in terms.items() if v}
        return cls(vars, terms)._in(canon) if vars != canon else cls(vars, terms)

    @classmethod
    def parse(cls, text: str) -> "Poly":
        from .parse import parse_poly
        return parse_poly(text)

    # ---------------------------------------------------------------- ring plumbing
    def _in(self, vars: tuple[str, ...]) -> "Poly":
        if vars == self.vars:
            return self
        missing = set(self.used_vars()) - set(vars)
        if missing:
            raise VariableMismatch(f"variables {sorted(missing)} not in target ring")
        trimmed = self.trim()
        return Poly(vars, repack(trimmed.terms, trimmed.vars, vars))

    def with_vars(self, vars: Iterable[str]) -> "Poly":
        """Same polynomial laid out over the (sorted) union of its ring and ``vars``."""
        return self._in(sort_vars(set(self.vars) | set(vars)))

    @staticmethod
    def unify(*polys: "Poly") -> tuple[tuple[str, ...], list[dict]]:
        vars = polys[0].vars
        if all(p.vars == vars for p in polys):
            return vars, [p.terms for p in polys]
        vars = sort_vars(set().union(*(p.vars for p in polys)))
        return vars, [repack(p.terms, p.vars, vars) for p in polys]

    def used_vars(self) -> tuple[str, ...]:
        n = len(self.vars)
        acc = 0
        for e in self.terms:
            acc |= e
        return tuple(v for i, v in enumerate(self.vars) if (acc >> (BITS * (n - 1 - i))) & FIELD)

    def trim(self) -> "Poly":
        used = self.used_vars()
        if used == self.vars:
            return self
        return Poly(used, repack(self.terms, self.vars, used))

    # ---------------------------------------------------------------- inspection
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_term(self) -> mpq:
        return self.terms.get(0, _ZERO)

    def constant_value(self) -> mpq:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.terms.get(0, _ZERO)

    def __len__(self):
        return len(self.terms)

    def items(self):
        """(exponent tuple, coefficient) pairs, layout given by ``self.vars``."""
        n = len(self.vars)
        return [(unpack(e, n), c) for e, c in self.terms.items()]

    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        n = len(self.vars)
        if var is None:
            return max(sum(unpack(e, n)) for e in self.terms)
        if var not in self.vars:
            return 0
        s = BITS * (n - 1 - self.vars.index(var))
        return max((e >> s) & FIELD for e in self.terms)

    def weighted_degree(self, weights: Mapping[str, int]) -> WeightedDegree:
        """Per-term weighted degrees and whether they all agree."""
        used = self.used_vars()
        missing = [v for v in used if v not in weights]
        if missing:
            raise KeyError(f"no weight for variable(s) {missing}")
        w = [weights.get(v, 0) for v in self.vars]
        degs = sorted({sum(wi * ei for wi, ei in zip(w, ex)) for ex, _ in self.items()})
        if not degs:
            return WeightedDegree(True, None, ())
        return WeightedDegree(len(degs) == 1, degs[0] if len(degs) == 1 else None, tuple(degs))

    def coefficients_in(self, var: str) -> dict[int, "Poly"]:
        """Write self as sum_k c_k * var^k; returns {k: c_k} with c_k free of var."""
        if var not in self.vars:
            return {0: self} if self.terms else {}
        n = len(self.vars)
        s = BITS * (n - 1 - self.vars.index(var))
        mask = FIELD << s
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            out.setdefault((e >> s) & FIELD, {})[e & ~mask] = c
        return {k: Poly(self.vars, t).trim() for k, t in out.items()}

    def leading_term(self, order: WeightedOrder = DEGREVLEX) -> tuple[tuple[int, ...], mpq]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = order.key_for(self.vars)
        return max(self.items(), key=lambda t: key(t[0]))

    def leading_coefficient(self, order: WeightedOrder = DEGREVLEX) -> mpq:
        return self.leading_term(order)[1]

    # ---------------------------------------------------------------- arithmetic
    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, RAT_TYPES):
            c = to_rat(other)
            return Poly(self.vars, {0: c} if c else {})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        vars, (a, b) = Poly.unify(self, o)
        if len(a) < len(b):
            a, b = b, a
        r = dict(a)
        for e, c in b.items():
            v = r.get(e)
            if v is None:
                r[e] = c
            else:
                v = v + c
                if v:
                    r[e] = v
                else:
                    del r[e]
        return Poly(vars, r)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = to_rat(c)
        if not c:
            return Poly(self.vars, {})
        return Poly(self.vars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, RAT_TYPES):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.is_constant():
            return self.scale(other.constant_term())
        if self.is_constant():
            return other.scale(self.constant_term())
        vars, (a, b) = Poly.unify(self, other)
        return Poly(vars, mul_terms(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RAT_TYPES):
            return self.scale(1 / to_rat(other))
        if isinstance(other, Poly) and other.is_constant():
            return self.scale(1 / other.constant_value())
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Poly(self.vars, {0: mpq(1)})
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        _, (a, b) = Poly.unify(self, o)
        return a == b

    def __hash__(self):
        t = self.trim()
        return hash((t.vars, frozenset(t.terms.items())))

    # ---------------------------------------------------------------- calculus & substitution
    def diff(self, var: str) -> "Poly":
        if var not in self.vars:
            return Poly(self.vars, {})
        n = len(self.vars)
        s = BITS * (n - 1 - self.vars.index(var))
        one = 1 << s
        out = {}
        for e, c in self.terms.items():
            k = (e >> s) & FIELD
            if k:
                out[e - one] = c * k
        return Poly(self.vars, out)

    def subs(self, mapping: Mapping[str, object]) -> "Poly":
        """Substitute polynomials or rationals for variables."""
        keys = [v for v in self.vars if v in mapping]
        if not keys:
            return self
        vals = {}
        for v in keys:
            val = mapping[v]
            if isinstance(val, Poly):
                vals[v] = val
            elif isinstance(val, RAT_TYPES):
                vals[v] = Poly.constant(val)
            else:
                raise TypeError(f"cannot substitute {type(val).__name__} for {v}; use evaluate()")
        kept = tuple(v for v in self.vars if v not in mapping)
        sub_idx = [self.vars.index(v) for v in keys]
        groups: dict[tuple, list] = {}
        for ex, c in self.items():
            sk = tuple(ex[i] for i in sub_idx)
            rest = tuple(e for i, e in enumerate(ex) if self.vars[i] not in mapping)
            groups.setdefault(sk, []).append((rest, c))
        power_cache: dict[tuple[str, int], Poly] = {}

        def power(v, k):
            if (v, k) not in power_cache:
                power_cache[(v, k)] = vals[v] ** k
            return power_cache[(v, k)]

        result = Poly(kept, {})
        for sk, rest_terms in sorted(groups.items()):
            base = Poly.from_terms(rest_terms, kept)
            factor = Poly.constant(1)
            for v, k in zip(keys, sk):
                if k:
                    factor = factor * power(v, k)
            result = result + base * factor
        return result

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at a point; values may be rationals, QuadExt, floats or mpmath numbers."""
        missing = [v for v in self.used_vars() if v not in values]
        if missing:
            raise VariableMismatch(f"unbound variable(s) {missing}")
        vals = [values.get(v, 0) for v in self.vars]
        sample = next((v for v in vals if not isinstance(v, RAT_TYPES)), None)
        if sample is None:
            conv = to_rat
            vals = [to_rat(v) for v in vals]
        elif isinstance(sample, QuadExt):
            d = sample.d
            conv = lambda c: QuadExt(c, 0, d)  # noqa: E731
        elif isinstance(sample, float):
            conv = float
        else:
            import mpmath
            conv = lambda c: mpmath.mpf(int(c.numerator)) / int(c.denominator)  # noqa: E731
        n = len(self.vars)
        total = conv(mpq(0))
        cache: dict[tuple[int, int], object] = {}
        for ex, c in self.items():
            t = conv(c)
            for i in range(n):
                k = ex[i]
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = vals[i] ** k
                    t = t * cache[(i, k)]
            total = total + t
        return total

    # ---------------------------------------------------------------- normalization
    def primitive(self, order: WeightedOrder = DEGREVLEX, fix_sign: bool = True) -> tuple["Poly", mpq]:
        """Return (q, s) with self == s*q, q integral, content-free, positive leading coefficient."""
        if not self.terms:
            return self, mpq(1)
        den = 1
        for c in self.terms.values():
            den = gmpy2.lcm(den, c.denominator)
        g = 0
        for c in self.terms.values():
            g = gmpy2.gcd(g, c.numerator * (den // c.denominator))
        s = mpq(g, den)
        if fix_sign and self.leading_coefficient(order) < 0:
            s = -s
        return Poly(self.vars, {e: c / s for e, c in self.terms.items()}), s

    # ---------------------------------------------------------------- text
    def to_str(self, order: WeightedOrder | None = None) -> str:
        if not self.terms:
            return "0"
        order = order or DEGREVLEX
        key = order.key_for(self.vars)
        items = sorted(self.items(), key=lambda t: key(t[0]), reverse=True)
        out = []
        for k, (ex, c) in enumerate(items):
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, ex) if e)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = rat_str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{rat_str(a)}*{mono}"
            if k == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.to_str()!r})"


def mul_terms(a: dict, b: dict) -> dict:
    """Product of two packed term dicts over the same ring."""
    if len(a) < len(b):
        a, b = b, a
    r: dict = {}
    get = r.get
    for e2, c2 in b.items():
        for e1, c1 in a.items():
            e = e1 + e2
            v = get(e)
            r[e] = c1 * c2 if v is None else v + c1 * c2
    return {e: c for e, c in r.items() if c}


def addmul_terms(r: dict, a: dict, b: dict, scale=None) -> None:
    """In-place r += scale*a*b (zeros may be left behind; callers clean up)."""
    if not a or not b:
        return
    if len(a) < len(b):
        a, b = b, a
    get = r.get
    if scale is not None and scale != 1:
        b = {e: c * scale for e, c in b.items()}
    for e2, c2 in b.items():
        for e1, c1 in a.items():
            e = e1 + e2
            v = get(e)
            r[e] = c1 * c2 if v is None else v + c1 * c2


def clean(r: dict) -> dict:
    return {e: c for e, c in r.items() if c}


def var(name: str) -> Poly:
    return Poly.variable(name)
