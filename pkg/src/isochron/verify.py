"""Sufficiency-side certificates for a proposed isochronous family.

Every check returns a small result record instead of a bare bool so that
reports can show residuals and the orders that were used.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping

import mpmath
from gmpy2 import mpq

from .algebra.numbers import rat_str
from .algebra.parse import parse_expr, reduce_radicals
from .algebra.poly import Poly
from .algebra.ratfunc import RationalFunction
from .algebra.sturm import UPoly, gcd
from .conditions import ConditionSet, compute_series_triple, urabe_extract
from .expr import AlgebraicExpr, ExprError
from .series import BiSeries, PSeries
from .systems import AbelSystem, FamilyRecord, LienardPair, PlanarSystem, cn_names, abel_names

log = logging.getLogger(__name__)

NUMERIC_DPS = 60
NUMERIC_THRESHOLD = mpmath.mpf(10) ** -40


class VerifyError(ValueError):
    pass


def _is_zero(rf: RationalFunction, radicals=()) -> bool:
    num = rf.num
    if radicals:
        num = reduce_radicals(num, radicals)
    return num.trim().is_zero()


def _reduced(rf: RationalFunction, radicals=()) -> RationalFunction:
    if not radicals:
        return rf
    return RationalFunction(reduce_radicals(rf.num, radicals), reduce_radicals(rf.den, radicals))


# ---------------------------------------------------------------------- g' + f g = 1
@dataclass
class ZeroUrabeResult:
    holds: bool
    residual: RationalFunction


def check_zero_urabe(lp: LienardPair, radicals=()) -> ZeroUrabeResult:
    """Exact test of g' + f g = 1, the zero-Urabe criterion."""
    r = lp.g.diff(lp.var) + lp.f * lp.g - 1
    r = _reduced(r, radicals)
    return ZeroUrabeResult(_is_zero(r), r)


# ---------------------------------------------------------------------- first integrals
@dataclass
class FirstIntegralResult:
    holds: bool
    method: str                     # "exact" or "series"
    order: int | None = None
    lowest_residual_degree: int | None = None
    residual: str = ""


def _as_expr(H) -> AlgebraicExpr:
    if isinstance(H, AlgebraicExpr):
        return H
    if isinstance(H, (RationalFunction, Poly)):
        return AlgebraicExpr.from_ratfunc(H)
    return AlgebraicExpr.parse(str(H))


def _lie_series(sys: PlanarSystem, s: BiSeries) -> BiSeries:
    xd = BiSeries(sys.xdot, s.order, sys.xv, sys.yv)
    yd = BiSeries(sys.ydot, s.order, sys.xv, sys.yv)
    dx, dy = s.diff(sys.xv), s.diff(sys.yv)
    # d/dx lowers the order by one, the field raises it back (no constant terms)
    out = BiSeries(dx.poly, s.order, sys.xv, sys.yv) * xd + BiSeries(dy.poly, s.order, sys.xv, sys.yv) * yd
    return out


def check_first_integral(sys: PlanarSystem, H, order: int = 30, radicals=()) -> FirstIntegralResult:
    """dH/dt = 0 along the flow: exactly if H is rational, else as a series to ``order``."""
    H = _as_expr(H)
    if H.is_rational():
        rf = H.to_ratfunc()
        L = _reduced(sys.lie_derivative(rf), radicals)
        ok = _is_zero(L)
        return FirstIntegralResult(ok, "exact", None, None, "" if ok else str(L.num)[:200])
    try:
        _, s = H.bi_series(order, sys.xv, sys.yv)
    except ExprError as exc:
        raise VerifyError(f"first integral does not expand at the origin: {exc}") from None
    L = _lie_series(sys, s)
    poly = reduce_radicals(L.poly, radicals) if radicals else L.poly
    ok = poly.trim().is_zero()
    low = None if ok else BiSeries(poly, order, sys.xv, sys.yv).low_degree()
    return FirstIntegralResult(ok, "series", order, low, "" if ok else str(poly)[:200])


# ---------------------------------------------------------------------- linearization
@dataclass
class LinearizationResult:
    holds: bool
    order: int
    first_failure_order: int | None
    scale_u: str                    # linear coefficient of u in x (after the constant prefactor)
    scale_v: str                    # linear coefficient of v in y
    prefactor_u: str
    prefactor_v: str
    same_scale: bool                # True when the printed map needs no per-coordinate rescaling


def _linear_coeff(s: BiSeries, var: str, other: str) -> mpq:
    p = s.poly
    c = p.coefficients_in(var).get(1)
    if c is None:
        raise VerifyError(f"map has no linear {var} term")
    c = c.subs({other: 0}).trim()
    if not c.is_constant() or c.is_zero():
        raise VerifyError(f"linear coefficient in {var} is not a nonzero rational: {c}")
    return c.constant_value()


def check_linearization(sys: PlanarSystem, u, v, order: int = 30, radicals=()) -> LinearizationResult:
    """Series check that (u, v) conjugates the flow to u' = -v, v' = u.

    u and v are each divided by their own linear coefficient first, so maps
    printed with a constant factor or a reflection in one coordinate are
    accepted; ``same_scale`` records whether that was needed.
    """
    u, v = _as_expr(u), _as_expr(v)
    try:
        pu, U = u.bi_series(order, sys.xv, sys.yv)
        pv, V = v.bi_series(order, sys.xv, sys.yv)
    except ExprError as exc:
        raise VerifyError(f"map does not expand at the origin: {exc}") from None
    lu, lv = _linear_coeff(U, sys.xv, sys.yv), _linear_coeff(V, sys.yv, sys.xv)
    Un, Vn = U.scale(1 / lu), V.scale(1 / lv)
    r1 = _lie_series(sys, Un) + Vn
    r2 = _lie_series(sys, Vn) - Un
    p1, p2 = r1.poly, r2.poly
    if radicals:
        p1, p2 = reduce_radicals(p1, radicals), reduce_radicals(p2, radicals)
    lows = [BiSeries(p, order, sys.xv, sys.yv).low_degree() for p in (p1, p2)]
    lows = [d for d in lows if d is not None]
    first = min(lows) if lows else None
    return LinearizationResult(holds=first is None, order=order, first_failure_order=first,
                               scale_u=rat_str(lu), scale_v=rat_str(lv), prefactor_u=str(pu),
                               prefactor_v=str(pv), same_scale=(lu == lv and str(pu) == str(pv)))


# ---------------------------------------------------------------------- closed-form Urabe functions
@dataclass(frozen=True)
class UrabeClosedForm:
    """h(X) = k1 X^p / sqrt(k2^2 + k3 X^q), k2 a nonzero rational."""

    k1: RationalFunction
    k2: mpq
    k3: RationalFunction
    p: int
    q: int

    def __post_init__(self):
        if not self.k2:
            raise VerifyError("k2 must be nonzero for the expansion to exist")
        if self.p % 2 == 0 or self.q % 2 == 1:
            raise VerifyError("h must be odd: p odd and q even")

    @classmethod
    def from_mapping(cls, d: Mapping) -> "UrabeClosedForm":
        k2 = parse_expr(str(d["k2"]))
        if not (k2.is_polynomial() and k2.num.is_constant()):
            raise VerifyError("k2 must be a rational constant")
        return cls(parse_expr(str(d["k1"])), k2.num.constant_value(), parse_expr(str(d.get("k3", "0"))),
                   int(d.get("p", 1)), int(d.get("q", 2)))

    @classmethod
    def zero(cls) -> "UrabeClosedForm":
        z = RationalFunction(Poly.constant(0))
        return cls(z, mpq(1), z, 1, 2)

    def series(self, order: int, var: str = "X") -> PSeries:
        """Odd power series of h to X^order."""
        if not self.k1.is_polynomial() or not self.k3.is_polynomial():
            raise VerifyError("k1 and k3 must be polynomial in the parameters")
        k1, k3 = self.k1.num, self.k3.num
        inner = PSeries([1] + [0] * (self.q - 1) + [k3.scale(1 / (self.k2 * self.k2))], order, var)
        root = inner.truncate(order).power(mpq(-1, 2))
        return root.shift(self.p).truncate(order).scale(1 / abs(self.k2)) * PSeries.constant(k1, order, var)

    def coefficient(self, k: int, order: int | None = None) -> Poly:
        return self.series(order or k, "X")[k]


@dataclass
class UrabeCheck:
    holds: bool
    order: int
    identity_holds: bool
    integrated_holds: bool
    mismatches: list[int] = field(default_factory=list)
    coefficients: dict[str, str] = field(default_factory=dict)


def check_urabe_closed_form(lp: LienardPair, h: UrabeClosedForm, m: int,
                            cs: ConditionSet | None = None, radicals=()) -> UrabeCheck:
    """X/(1+h(X)) = g e^F and phi = X + int h, as x-series to order 2m+2,
    plus agreement of h's coefficients with the solved Urabe coefficients."""
    order = 2 * m + 2
    st = compute_series_triple(lp, order + 2)
    X = st.X.truncate(order + 1)
    hs = h.series(order + 1, lp.var)
    hX = hs.compose(X).truncate(order + 1) if hs.valuation is not None else PSeries.constant(0, order + 1)
    fs, gs = lp.series(order + 1)
    lhs = X * (hX + 1).reciprocal()
    rhs = gs * st.E.truncate(order + 1)
    diff = (lhs - rhs).truncate(order)
    ident = all(_zero_poly(diff[k], radicals) for k in range(order + 1))
    Hs = hs.integrate().truncate(order + 1)
    HX = Hs.compose(X).truncate(order + 1) if Hs.valuation is not None else PSeries.constant(0, order + 1)
    d2 = (st.phi.truncate(order + 1) - X - HX)
    integ = all(_zero_poly(d2[k], radicals) for k in range(order + 2))
    if cs is None:
        cs = urabe_extract(st, m)
    mism, coeffs = [], {}
    for j, c in enumerate(cs.urabe_coeffs):
        k = 2 * j + 1
        if k > order + 1:
            break
        mine = hs[k]
        coeffs[f"c{k}"] = str(mine)
        if not _zero_poly(mine - c, radicals):
            mism.append(k)
    return UrabeCheck(holds=ident and integ and not mism, order=order, identity_holds=ident,
                      integrated_holds=integ, mismatches=mism, coefficients=coeffs)


def _zero_poly(p: Poly, radicals=()) -> bool:
    if radicals:
        p = reduce_radicals(p, radicals)
    return p.trim().is_zero()


# ---------------------------------------------------------------------- family substitution
@dataclass
class SubstitutionResult:
    all_zero: bool
    mode: str                       # "exact" or "numeric"
    residuals: list[str]
    max_abs: float | None = None
    dps: int | None = None


def _kind_names(fam: FamilyRecord) -> set[str]:
    sp = fam.spec
    if sp.kind in ("cn", "homogeneous"):
        return set(cn_names(sp.degree))
    if sp.kind == "abel":
        return set(abel_names(sp.degree))
    return set(sp.coefficients)


def substitute_family(cs: ConditionSet, fam: FamilyRecord, dps: int = NUMERIC_DPS,
                      threshold=NUMERIC_THRESHOLD) -> SubstitutionResult:
    """Plug a family into every condition; coefficients it does not list are 0."""
    names = _kind_names(fam)
    unbound = [v for v in cs.variables if v not in names and v not in fam.spec.coefficients]
    if unbound:
        raise VerifyError(f"unbound variable(s) {unbound} for family {fam.id}")
    if fam.numeric_only:
        return _substitute_numeric(cs, fam, dps, threshold)
    binds = {v: fam.bindings.get(v, RationalFunction(Poly.constant(0))) for v in cs.variables}
    rad = tuple(fam.radicals)
    out = []
    for p in cs.conditions:
        r = _reduced(RationalFunction(p).subs(binds), rad)
        out.append("0" if _is_zero(r) else str(r.num)[:120])
    return SubstitutionResult(all(s == "0" for s in out), "exact", out)


def _guard_digits(cs: ConditionSet) -> int:
    """Digits lost to cancellation: size of the largest coefficient and term count."""
    worst = 0
    for p in cs.conditions:
        big = max((abs(c) for c in p.terms.values()), default=1)
        worst = max(worst, math.log10(max(float(big), 1.0)) + math.log10(len(p) + 1))
    return int(math.ceil(worst)) + 10


def numeric_family_values(fam: FamilyRecord, dps: int) -> tuple[dict, str]:
    """Coefficient values at ``dps`` digits, from exact texts when the record has them."""
    if not fam.exact_text:
        return fam.numeric_values(dps), "decimal"
    from .expr import evaluate_text
    texts = dict(fam.spec.coefficients)
    texts.update(fam.exact_text)
    with mpmath.workdps(dps):
        vals: dict = {}
        for _ in range(len(texts) + 1):
            for k, t in texts.items():
                if k not in vals:
                    try:
                        vals[k] = evaluate_text(t, vals)
                    except KeyError:
                        pass
        if len(vals) != len(texts):
            raise VerifyError(f"cannot resolve exact texts of {fam.id}")
    return vals, "exact_text"


def _substitute_numeric(cs, fam, dps, threshold) -> SubstitutionResult:
    work = max(dps, NUMERIC_DPS) + _guard_digits(cs)
    with mpmath.workdps(work):
        vals, source = numeric_family_values(fam, work)
        full = {v: vals.get(v, mpmath.mpf(0)) for v in cs.variables}
        res = [abs(p.evaluate(full)) for p in cs.conditions]
        worst = max(res) if res else mpmath.mpf(0)
        ok = all(r < threshold for r in res)
        return SubstitutionResult(ok, f"numeric ({source})", [mpmath.nstr(r, 5) for r in res], float(worst), work)


# ---------------------------------------------------------------------- Abel first integral
@dataclass
class AbelIntegral:
    """I(x, y) = x^2 + 2 int_0^y s/(1+P(s)) ds."""

    expr: AlgebraicExpr | None
    closed_form: bool
    text: str
    verified: bool | None = None
    note: str = ""


def _solve_linear(rows: list[list[mpq]], rhs: list[mpq]) -> list[mpq] | None:
    """Exact Gaussian elimination; None when the system is inconsistent."""
    n = len(rows[0]) if rows else 0
    A = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols, r = [], 0
    for c in range(n):
        p = next((i for i in range(r, len(A)) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [a * inv for a in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        piv_cols.append(c)
        r += 1
    if any(all(not a for a in row[:-1]) and row[-1] for row in A):
        return None
    sol = [mpq(0)] * n
    for i, c in enumerate(piv_cols):
        sol[c] = A[i][-1]
    return sol


def _upmul(a: UPoly, b: UPoly) -> UPoly:
    if a.is_zero() or b.is_zero():
        return UPoly([])
    out = [mpq(0)] * (len(a.c) + len(b.c) - 1)
    for i, x in enumerate(a.c):
        for j, y in enumerate(b.c):
            out[i + j] += x * y
    return UPoly(out)


def _rational_part(A: UPoly, D: UPoly) -> tuple[UPoly, UPoly, UPoly] | None:
    """Horowitz-Ostrogradsky: int A/D = B/D1 + int C/D2; returns (B, D1, C)."""
    D1 = gcd(D, D.derivative())
    D2 = D // D1
    T = _upmul(D2, D1.derivative()) // D1
    nb, nc = max(D1.degree, 0), max(D2.degree, 0)
    # unknowns b_0..b_{nb-1}, c_0..c_{nc-1};  A = B' D2 - B T + C D1
    size = max(A.degree, nb - 1 + D2.degree, nb - 1 + max(T.degree, 0), nc - 1 + D1.degree, 0) + 1
    cols = []
    for i in range(nb):
        Bi = UPoly([0] * i + [1])
        col = _upmul(Bi.derivative(), D2)
        col = _padd(col, -_upmul(Bi, T))
        cols.append(col)
    for i in range(nc):
        cols.append(_upmul(UPoly([0] * i + [1]), D1))
    rows = [[col.c[k] if k < len(col.c) else mpq(0) for col in cols] for k in range(size)]
    rhs = [A.c[k] if k < len(A.c) else mpq(0) for k in range(size)]
    sol = _solve_linear(rows, rhs)
    if sol is None:
        return None
    return UPoly(sol[:nb]), D1, UPoly(sol[nb:])


def _padd(a: UPoly, b: UPoly) -> UPoly:
    n = max(len(a.c), len(b.c))
    return UPoly([(a.c[k] if k < len(a.c) else 0) + (b.c[k] if k < len(b.c) else 0) for k in range(n)])


def _upoly_text(p: UPoly, var: str) -> str:
    return str(p.to_poly(var)) if not p.is_zero() else "0"


def abel_first_integral(sys: AbelSystem, order: int = 30) -> AbelIntegral:
    """Closed form of x^2 + 2 int_0^y s/(1+P(s)) ds when the log part vanishes.

    Symbolic coefficients are handled when a_k = r_k a_1^k with rational r_k:
    then y -> a_1 y maps the system to a rational one and the integral is
    pulled back with the inverse rescaling.
    """
    a = [RationalFunction.lift(c) for c in sys.a]
    params = sorted({v for c in a for v in c.used_vars()})
    lam = None
    if params:
        lam = a[0]
        if lam.is_zero():
            return _quadrature(sys, "symbolic coefficients with a_1 = 0 are not rescalable")
        rs = []
        for k, c in enumerate(a, start=1):
            r = c / lam ** k
            if r.used_vars():
                return _quadrature(sys, "coefficients are not a rescaling of a rational system")
            rs.append(r.num.constant_value() / r.den.constant_value())
    else:
        rs = [c.num.constant_value() / c.den.constant_value() for c in a]
    D = UPoly([1] + rs)
    part = _rational_part(UPoly([0, 2]), D)
    if part is None or not part[2].is_zero():
        return _quadrature(sys, "1+P(s) leaves a logarithmic part")
    B, D1, _ = part
    const = B(0) / D1(0)
    # I = x^2 + B(s)/D1(s) - B(0)/D1(0) at s = y (or s = a_1 y, divided by a_1^2)
    num = _padd(B, -_upmul(UPoly([const]), D1))
    if lam is None:
        text = f"x^2 + ({_upoly_text(num, 'y')})/({_upoly_text(D1, 'y')})"
    else:
        lt = f"({lam})"
        num_s = str(num.to_poly("y").subs({"y": Poly.variable("y") * lam.num})) if lam.is_polynomial() else None
        den_s = str(D1.to_poly("y").subs({"y": Poly.variable("y") * lam.num})) if lam.is_polynomial() else None
        if num_s is None:
            return _quadrature(sys, "a_1 is not polynomial")
        text = f"x^2 + ({num_s})/(({den_s})*{lt}^2)"
    expr = AlgebraicExpr.parse(text)
    res = check_first_integral(sys.planar(), expr, order)
    return AbelIntegral(expr, True, text, res.holds)


def _quadrature(sys: AbelSystem, why: str) -> AbelIntegral:
    P = sys.P("s")
    text = f"x^2 + 2*Integral(s/(1 + {P}), (s, 0, y))"
    return AbelIntegral(None, False, text, None, why)


__all__ = [
    "check_zero_urabe", "check_first_integral", "check_linearization", "check_urabe_closed_form",
    "substitute_family", "abel_first_integral", "UrabeClosedForm", "ZeroUrabeResult",
    "FirstIntegralResult", "LinearizationResult", "UrabeCheck", "SubstitutionResult", "AbelIntegral",
    "VerifyError", "NUMERIC_DPS", "NUMERIC_THRESHOLD",
]
