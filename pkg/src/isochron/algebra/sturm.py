"""Dense univariate polynomials over Q: Sturm counting and exact real roots.

Root extraction is deliberately limited to rational roots plus one
remaining quadratic factor; anything else is returned unresolved.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from .numbers import QuadExt, rational_sqrt, split_square, to_rat
from .poly import Poly


class UPoly:
    """Coefficients lowest degree first, trailing zeros stripped."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence):
        c = [to_rat(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = c

    @classmethod
    def from_poly(cls, p: Poly) -> "UPoly":
        used = p.used_vars()
        if len(used) > 1:
            raise ValueError(f"not univariate: variables {used}")
        if not used:
            return cls([p.constant_term()])
        var = used[0]
        coeffs = p.coefficients_in(var)
        deg = max(coeffs)
        return cls([coeffs[k].constant_value() if k in coeffs else 0 for k in range(deg + 1)])

    def to_poly(self, var: str) -> Poly:
        return Poly.from_terms({(k,): v for k, v in enumerate(self.c) if v}, (var,))

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lc(self) -> mpq:
        return self.c[-1]

    def __call__(self, x):
        acc = mpq(0)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def derivative(self) -> "UPoly":
        return UPoly([k * a for k, a in enumerate(self.c)][1:])

    def monic(self) -> "UPoly":
        lc = self.lc()
        return UPoly([a / lc for a in self.c])

    def __neg__(self):
        return UPoly([-a for a in self.c])

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.c == other.c

    def divmod(self, other: "UPoly") -> tuple["UPoly", "UPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        q = [mpq(0)] * max(len(r) - len(other.c) + 1, 0)
        lc = other.lc()
        dv = other.degree
        for k in range(len(r) - 1, dv - 1, -1):
            if not r[k]:
                continue
            f = r[k] / lc
            q[k - dv] = f
            for j, b in enumerate(other.c):
                r[k - dv + j] -= f * b
        return UPoly(q), UPoly(r[:dv] if dv > 0 else [])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __repr__(self):
        return f"UPoly({[str(a) for a in self.c]})"


def gcd(a: UPoly, b: UPoly) -> UPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def squarefree_part(p: UPoly) -> UPoly:
    g = gcd(p, p.derivative())
    if g.degree <= 0:
        return p.monic()
    return (p // g).monic()


def sturm_sequence(p: UPoly) -> list[UPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return seq


def _sign_changes(values) -> int:
    signs = [v for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def _at_infinity(seq: list[UPoly], sign: int) -> int:
    vals = []
    for q in seq:
        s = 1 if q.lc() > 0 else -1
        if sign < 0 and q.degree % 2:
            s = -s
        vals.append(s)
    return _sign_changes(vals)


def _is_inf(v, sign):
    if v is None:
        return True
    return isinstance(v, float) and v == sign * float("inf")


def sturm_real_roots(p, lo=None, hi=None) -> int:
    """Number of distinct real roots of ``p`` in the open interval (lo, hi).

    ``lo``/``hi`` are rationals, or None / +-inf for unbounded ends.
    """
    if isinstance(p, Poly):
        p = UPoly.from_poly(p)
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    if p.degree == 0:
        return 0
    p = squarefree_part(p)
    seq = sturm_sequence(p)
    va = _at_infinity(seq, -1) if _is_inf(lo, -1) else _sign_changes([q(to_rat(lo)) for q in seq])
    if _is_inf(hi, 1):
        vb, hi_root = _at_infinity(seq, 1), 0
    else:
        h = to_rat(hi)
        vb, hi_root = _sign_changes([q(h) for q in seq]), int(p(h) == 0)
    if not _is_inf(lo, -1) and not _is_inf(hi, 1) and to_rat(lo) >= to_rat(hi):
        return 0
    return va - vb - hi_root


def root_bound(p: UPoly) -> mpq:
    """Cauchy bound: every real root lies in [-B, B]."""
    lc = abs(p.lc())
    return 1 + max((abs(a) / lc for a in p.c[:-1]), default=mpq(0))


def isolate_real_roots(p: UPoly, width) -> list[tuple[mpq, mpq]]:
    """Disjoint intervals [a, b] (b - a <= width) each holding exactly one root of p."""
    p = squarefree_part(p)
    seq = sturm_sequence(p)
    width = to_rat(width)

    def count(a, b):  # roots in (a, b]
        return _sign_changes([q(a) for q in seq]) - _sign_changes([q(b) for q in seq])

    B = root_bound(p)
    out = []
    stack = [(-B, B)]
    while stack:
        a, b = stack.pop()
        n = count(a, b)
        if n == 0:
            continue
        if n == 1 and b - a <= width:
            out.append((a, b))
            continue
        m = (a + b) / 2
        stack.append((m, b))
        stack.append((a, m))
    return sorted(out)


def exact_real_roots(p) -> tuple[list, UPoly]:
    """Real roots that are rational or come from a final quadratic factor.

    Returns (roots, unresolved cofactor).  Roots are mpq or QuadExt values.
    """
    if isinstance(p, Poly):
        p = UPoly.from_poly(p)
    p = squarefree_part(p)
    # clear denominators so the leading coefficient bounds root denominators
    den = 1
    for a in p.c:
        den = den * a.denominator // _gcd(den, a.denominator)
    ip = UPoly([a * den for a in p.c])
    lc = abs(int(ip.lc()))
    roots: list = []
    rest = p
    if rest.degree >= 1:
        for a, b in isolate_real_roots(p, mpq(1, 4 * lc * lc)):
            guess = Fraction(int((a + b).numerator), int((a + b).denominator) * 2).limit_denominator(lc)
            r = mpq(guess.numerator, guess.denominator)
            if a <= r <= b and p(r) == 0:
                roots.append(r)
                rest = rest // UPoly([-r, 1])
    if rest.degree == 2:
        c0, c1, c2 = rest.c
        disc = c1 * c1 - 4 * c2 * c0
        if disc >= 0:
            s = rational_sqrt(disc)
            if s is not None:
                roots += [(-c1 - s) / (2 * c2), (-c1 + s) / (2 * c2)]
            else:
                num, den2 = _squarefree_split(disc)
                # sqrt(disc) = num_k*sqrt(d)/den
                k, d = num
                roots += [QuadExt(-c1 / (2 * c2), -mpq(k, den2) / (2 * c2), d),
                          QuadExt(-c1 / (2 * c2), mpq(k, den2) / (2 * c2), d)]
            rest = UPoly([1])
    elif rest.degree <= 0:
        rest = UPoly([1])
    roots.sort(key=lambda r: float(r))
    return roots, rest


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _squarefree_split(q: mpq) -> tuple[tuple[int, int], int]:
    """sqrt(q) = k*sqrt(d)/den with d square-free; returns ((k, d), den)."""
    n, m = int(q.numerator), int(q.denominator)
    # sqrt(n/m) = sqrt(n*m)/m
    k, d = split_square(n * m)
    return (k, d), m
