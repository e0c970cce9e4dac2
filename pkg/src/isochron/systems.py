"""Planar systems, their reductions to x'' + f(x) x'^2 + g(x) = 0, and the family catalog."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Mapping

import yaml

from .algebra.numbers import RAT_TYPES
from .algebra.orders import WeightedOrder, sort_vars
from .algebra.parse import ParseError, parse_expr, parse_expr_with_radicals, reduce_radicals
from .algebra.poly import Poly
from .algebra.ratfunc import RationalFunction

FORMAT_VERSION = 1
KINDS = ("cn", "homogeneous", "abel", "lienard", "planar")

_CN_NAME = re.compile(r"^([ab])_(\d+)_(\d+)$")
_ABEL_NAME = re.compile(r"^a(\d+)$")
_LIENARD_NAME = re.compile(r"^([fg])(\d+)$")


class SystemError_(ValueError):
    """Malformed system description."""


def _x() -> Poly:
    return Poly.variable("x")


def _y() -> Poly:
    return Poly.variable("y")


def _rf(v) -> RationalFunction:
    if isinstance(v, str):
        return parse_expr(v)
    return RationalFunction.lift(v)


# ---------------------------------------------------------------------- coefficient schemas
def cn_names(n: int) -> list[str]:
    """Coefficient names of the degree-n family: b_i_1 (x'), a_i_0 and a_i_2 (y').

    Degree 1 has no coefficients and is the linear center.
    """
    if n < 1:
        raise SystemError_("degree must be >= 1")
    return ([f"b_{i}_1" for i in range(1, n)] + [f"a_{i}_0" for i in range(2, n + 1)]
            + [f"a_{i}_2" for i in range(0, n - 1)])


def homogeneous_names(n: int) -> list[str]:
    return [f"b_{n - 1}_1", f"a_{n - 2}_2", f"a_{n}_0"]


def abel_names(n: int) -> list[str]:
    return [f"a{k}" for k in range(1, n + 1)]


def default_weights(names) -> dict[str, int]:
    """Quasi-homogeneous weights: a_i_j, b_i_j -> i+j-1; Abel a_k -> k;
    Lienard f_k -> k+1, g_k -> k-1; Urabe coefficients c_k -> k."""
    out = {}
    for v in names:
        if m := _CN_NAME.match(v):
            out[v] = int(m.group(2)) + int(m.group(3)) - 1
        elif m := _ABEL_NAME.match(v):
            out[v] = int(m.group(1))
        elif m := _LIENARD_NAME.match(v):
            k = int(m.group(2))
            out[v] = k + 1 if m.group(1) == "f" else k - 1
        elif re.match(r"^c_?\d+$", v):
            out[v] = int(v.lstrip("c_"))
        else:
            raise KeyError(f"no default weight for parameter {v!r}")
        if out[v] < 1:
            raise KeyError(f"parameter {v!r} would get non-positive weight {out[v]}")
    return out


def weighted_order(names, explicit: Mapping[str, int] | None = None) -> WeightedOrder:
    w = dict(explicit) if explicit else default_weights(names)
    return WeightedOrder.make("weighted-degrevlex", w)


# ---------------------------------------------------------------------- value types
@dataclass(frozen=True)
class PlanarSystem:
    """x' = xdot(x, y), y' = ydot(x, y), linear part the rotation (-y, x)."""

    xdot: Poly
    ydot: Poly
    xv: str = "x"
    yv: str = "y"

    def __post_init__(self):
        for name, p, want in (("xdot", self.xdot, {(0, 1): -1}), ("ydot", self.ydot, {(1, 0): 1})):
            lin = _linear_part(p, self.xv, self.yv)
            if lin != want:
                raise SystemError_(f"{name} must have linear part {'-y' if name == 'xdot' else 'x'}; got {lin}")

    @property
    def parameters(self) -> tuple[str, ...]:
        return sort_vars((set(self.xdot.used_vars()) | set(self.ydot.used_vars())) - {self.xv, self.yv})

    def subs(self, mapping: Mapping[str, object]) -> "PlanarSystem":
        return PlanarSystem(_subs_poly(self.xdot, mapping), _subs_poly(self.ydot, mapping), self.xv, self.yv)

    def lie_derivative(self, h: RationalFunction) -> RationalFunction:
        return h.diff(self.xv) * RationalFunction(self.xdot) + h.diff(self.yv) * RationalFunction(self.ydot)

    def numeric(self, values: Mapping[str, object] | None = None, kind=float):
        """Fast evaluator (x, y) -> (xdot, ydot) with parameters bound to numbers."""
        values = dict(values or {})
        missing = [v for v in self.parameters if v not in values]
        if missing:
            raise SystemError_(f"unbound parameter(s) {missing}")
        return _compile(self.xdot, self.ydot, self.xv, self.yv, values, kind)

    def __str__(self):
        return f"x' = {self.xdot}, y' = {self.ydot}"


def _linear_part(p: Poly, xv: str, yv: str) -> dict:
    q = p.with_vars((xv, yv))
    ix, iy = q.vars.index(xv), q.vars.index(yv)
    out = {}
    for ex, c in q.items():
        others = sum(e for i, e in enumerate(ex) if i not in (ix, iy))
        d = ex[ix] + ex[iy]
        if d <= 1 and others:
            raise SystemError_("parameters may not enter the linear part or the constant term")
        if d == 0:
            raise SystemError_("the origin must be an equilibrium")
        if d == 1:
            out[(ex[ix], ex[iy])] = c
    return out


def _subs_poly(p: Poly, mapping) -> Poly:
    rf = RationalFunction(p).subs(mapping)
    if not rf.is_polynomial():
        raise SystemError_("substitution produced a non-polynomial vector field")
    return rf.num.trim()


def _compile(xdot: Poly, ydot: Poly, xv: str, yv: str, values, kind):
    def conv(c):
        if kind is float:
            return float(c)
        return kind(int(c.numerator)) / int(c.denominator) if hasattr(c, "numerator") else kind(c)

    def terms_in_xy(p):
        vals = {k: v for k, v in values.items()}
        q = p.with_vars((xv, yv))
        out: dict[tuple[int, int], object] = {}
        ix, iy = q.vars.index(xv), q.vars.index(yv)
        for ex, c in q.items():
            coeff = conv(c)
            for i, e in enumerate(ex):
                if i not in (ix, iy) and e:
                    val = vals[q.vars[i]]
                    coeff = coeff * (conv(val) if isinstance(val, RAT_TYPES) else kind(val)) ** e
            key = (ex[ix], ex[iy])
            out[key] = out.get(key, 0) + coeff
        return [(i, j, c) for (i, j), c in out.items() if c != 0]

    tx, ty = terms_in_xy(xdot), terms_in_xy(ydot)

    def rhs(x, y):
        return (sum(c * x ** i * y ** j for i, j, c in tx), sum(c * x ** i * y ** j for i, j, c in ty))

    return rhs


@dataclass(frozen=True)
class LienardPair:
    """x'' + f(x) x'^2 + g(x) = 0; requires g = x + O(x^2) and x*g(x) > 0 near 0."""

    f: RationalFunction
    g: RationalFunction
    var: str = "x"
    domain_note: str = "x*g(x) > 0 for small x != 0 (g(x) = x + O(x^2))"

    def __post_init__(self):
        for name, r in (("f", self.f), ("g", self.g)):
            if r.den.subs({self.var: 0}).is_zero():
                raise SystemError_(f"denominator of {name} vanishes at 0")
        g0 = self.g.subs({self.var: 0})
        g1 = self.g.diff(self.var).subs({self.var: 0})
        if not g0.is_zero() or g1 != 1:
            raise SystemError_("not a center candidate: xg(x)>0 fails structurally (need g(0)=0, g'(0)=1)")

    @property
    def parameters(self) -> tuple[str, ...]:
        return sort_vars((set(self.f.used_vars()) | set(self.g.used_vars())) - {self.var})

    def subs(self, mapping) -> "LienardPair":
        return LienardPair(self.f.subs(mapping), self.g.subs(mapping), self.var)

    def series(self, order: int):
        from .series import PSeries
        return PSeries.from_ratfunc(self.f, self.var, order), PSeries.from_ratfunc(self.g, self.var, order)


@dataclass(frozen=True)
class AbelSystem:
    """x' = -y, y' = x (1 + P(y)), P(y) = sum_k a_k y^k."""

    n: int
    a: tuple

    def __post_init__(self):
        if self.n < 1 or len(self.a) != self.n:
            raise SystemError_(f"Abel system of degree {self.n} needs {self.n} coefficients")

    @classmethod
    def symbolic(cls, n: int) -> "AbelSystem":
        return cls(n, tuple(Poly.variable(v) for v in abel_names(n)))

    def P(self, var: str = "x") -> RationalFunction:
        t = Poly.variable(var)
        out = RationalFunction(Poly.constant(0))
        for k, ak in enumerate(self.a, start=1):
            out = out + _rf(ak) * RationalFunction(t ** k)
        return out

    def planar(self) -> PlanarSystem:
        p = self.P("y")
        if not p.is_polynomial():
            raise SystemError_("Abel coefficients must be polynomial in the parameters")
        return PlanarSystem(-_y(), _x() * (p.num + 1))


# ---------------------------------------------------------------------- reductions
def _check_cn_names(coeffs: Mapping[str, object], n: int) -> None:
    allowed = set(cn_names(n))
    bad = [k for k in coeffs if k not in allowed]
    if bad:
        raise SystemError_(f"malformed coefficient name(s) {bad} for degree {n}; allowed: {sorted(allowed)}")


def _infer_degree(coeffs) -> int:
    n = 2
    for k in coeffs:
        m = _CN_NAME.match(k)
        if not m:
            raise SystemError_(f"malformed coefficient name {k!r}")
        i, j = int(m.group(2)), int(m.group(3))
        n = max(n, i + j)
    return n


def cn_planar(coeffs: Mapping[str, object], n: int | None = None) -> PlanarSystem:
    n = n or _infer_degree(coeffs)
    _check_cn_names(coeffs, n)
    x, y = _x(), _y()
    xd, yd = RationalFunction(-y), RationalFunction(x)
    for k, v in coeffs.items():
        _, i, j = _CN_NAME.match(k).groups()
        i, j = int(i), int(j)
        mono = RationalFunction(x ** i * y ** j)
        if k.startswith("b"):
            xd = xd + _rf(v) * mono
        else:
            yd = yd + _rf(v) * mono
    if not (xd.is_polynomial() and yd.is_polynomial()):
        raise SystemError_("coefficients with parameter denominators cannot form a polynomial field")
    return PlanarSystem(xd.num.trim(), yd.num.trim())


def lienard_from_cn(coeffs: Mapping[str, object], n: int | None = None) -> LienardPair:
    """f = (C + B')/(1 - B), g = (x + A)(1 - B) with B = sum b_k1 x^k, C = sum a_k2 x^k, A = sum a_k0 x^k."""
    n = n or _infer_degree(coeffs)
    _check_cn_names(coeffs, n)
    x = RationalFunction(_x())
    zero = RationalFunction(Poly.constant(0))
    B, C, A = zero, zero, zero
    for k, v in coeffs.items():
        kind, i, j = _CN_NAME.match(k).groups()
        term = _rf(v) * x ** int(i)
        if kind == "b":
            B = B + term
        elif j == "2":
            C = C + term
        else:
            A = A + term
    one_minus_b = 1 - B
    return LienardPair((C + B.diff("x")) / one_minus_b, (x + A) * one_minus_b)


def lienard_from_abel(sys: AbelSystem) -> LienardPair:
    """After y -> x, x(1+P(y)) -> y: f = -P'/(1+P), g = x(1+P)."""
    P = sys.P("x")
    x = RationalFunction(_x())
    return LienardPair(-P.diff("x") / (1 + P), x * (1 + P))


def reduction_residual(sys: PlanarSystem, lp: LienardPair, coordinate: str = "x") -> RationalFunction:
    """xi'' + f(xi) xi'^2 + g(xi) along the flow of ``sys``, xi the chosen coordinate."""
    xi = RationalFunction(Poly.variable(coordinate))
    d1 = sys.lie_derivative(xi)
    d2 = sys.lie_derivative(d1)
    f = lp.f.subs({lp.var: Poly.variable(coordinate)}) if coordinate != lp.var else lp.f
    g = lp.g.subs({lp.var: Poly.variable(coordinate)}) if coordinate != lp.var else lp.g
    return d2 + f * d1 * d1 + g


# ---------------------------------------------------------------------- spec files
NUMERIC_RE = re.compile(r"^[+-]?\d+\.\d*([eE][+-]?\d+)?$")


@dataclass
class SystemSpec:
    """A system description as read from a structured text file.

    ``coefficients`` maps names to "free", an exact rational or expression
    text (``sqrt(n)`` allowed), or a decimal string for numeric-only values.
    """

    kind: str
    degree: int | None = None
    coefficients: dict[str, str] = field(default_factory=dict)
    f: str | None = None
    g: str | None = None
    xdot: str | None = None
    ydot: str | None = None
    weights: dict[str, int] | None = None

    @classmethod
    def from_mapping(cls, d: Mapping) -> "SystemSpec":
        if not isinstance(d, Mapping):
            raise SystemError_("system spec must be a mapping")
        kind = d.get("kind")
        if kind not in KINDS:
            raise SystemError_(f"field 'kind': expected one of {KINDS}, got {kind!r}")
        coeffs = d.get("coefficients") or {}
        if not isinstance(coeffs, Mapping):
            raise SystemError_("field 'coefficients' must be a mapping")
        spec = cls(kind=kind, degree=d.get("degree"),
                   coefficients={str(k): _text(v, k) for k, v in coeffs.items()},
                   f=d.get("f"), g=d.get("g"), xdot=d.get("xdot"), ydot=d.get("ydot"),
                   weights={str(k): int(v) for k, v in d["weights"].items()} if d.get("weights") else None)
        spec._validate()
        return spec

    def to_mapping(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.degree is not None:
            out["degree"] = self.degree
        if self.coefficients:
            out["coefficients"] = dict(self.coefficients)
        for k in ("f", "g", "xdot", "ydot"):
            if getattr(self, k) is not None:
                out[k] = getattr(self, k)
        if self.weights:
            out["weights"] = dict(self.weights)
        return out

    def _validate(self):
        k = self.kind
        if k in ("cn", "homogeneous", "abel"):
            if not isinstance(self.degree, int) or self.degree < 1:
                raise SystemError_(f"field 'degree': positive integer required for kind {k!r}")
            allowed = {"cn": cn_names, "homogeneous": homogeneous_names, "abel": abel_names}[k](self.degree) \
                if not (k != "abel" and self.degree < 2) else []
            bad = [c for c in self.coefficients if c not in allowed]
            if bad:
                raise SystemError_(f"field 'coefficients': unknown name(s) {bad} for kind {k!r} degree {self.degree}")
        elif k == "lienard":
            if not self.g:
                raise SystemError_("field 'g' is required for kind 'lienard'")
        elif k == "planar":
            if not (self.xdot and self.ydot):
                raise SystemError_("fields 'xdot' and 'ydot' are required for kind 'planar'")

    # -- bindings
    def names(self) -> list[str]:
        if self.kind == "cn":
            return cn_names(self.degree)
        if self.kind == "homogeneous":
            return homogeneous_names(self.degree)
        if self.kind == "abel":
            return abel_names(self.degree)
        return list(self.coefficients)

    def is_numeric(self) -> bool:
        return any(NUMERIC_RE.match(v) for v in self.coefficients.values())

    def exact_bindings(self) -> tuple[dict[str, RationalFunction], set[int]]:
        """Exact value of every coefficient (free ones become their own symbol)."""
        out: dict[str, RationalFunction] = {}
        radicals: set[int] = set()
        for name, text in self.coefficients.items():
            if text == "free":
                out[name] = RationalFunction(Poly.variable(name))
            elif NUMERIC_RE.match(text):
                raise SystemError_(f"coefficient {name!r} is numeric-only ({text[:12]}...)")
            else:
                try:
                    rf, rad = parse_expr_with_radicals(text)
                except ParseError as exc:
                    raise SystemError_(f"coefficient {name!r}: {exc}") from None
                radicals |= rad
                out[name] = rf
        # expressions may refer to other (non-free) coefficients
        fixed = {k for k, t in self.coefficients.items() if t != "free"}
        for _ in range(len(out) + 1):
            pending = {k: set(v.used_vars()) & fixed - {k} for k, v in out.items()}
            if not any(pending.values()):
                break
            for k, refs in pending.items():
                if refs:
                    out[k] = out[k].subs({r: out[r] for r in refs})
        else:
            raise SystemError_("coefficient expressions have a cyclic definition")
        if radicals:
            out = {k: RationalFunction(reduce_radicals(v.num, radicals), reduce_radicals(v.den, radicals))
                   for k, v in out.items()}
        return out, radicals

    def numeric_values(self, dps: int = 60) -> dict[str, object]:
        """mpmath values for every coefficient; free symbols are not allowed."""
        import mpmath
        from .expr import evaluate_text
        with mpmath.workdps(dps + 10):
            out = {}
            for name, text in self.coefficients.items():
                if text == "free":
                    raise SystemError_(f"coefficient {name!r} is free; bind it for numeric use")
                out[name] = mpmath.mpf(text) if NUMERIC_RE.match(text) else None
            for _ in range(len(out) + 1):
                for name, text in self.coefficients.items():
                    if out[name] is None:
                        try:
                            out[name] = evaluate_text(text, {k: v for k, v in out.items() if v is not None})
                        except KeyError:
                            pass
            if any(v is None for v in out.values()):
                raise SystemError_("could not resolve coefficient expressions numerically")
        return out

    # -- models
    def planar(self, bindings: Mapping[str, object] | None = None) -> PlanarSystem:
        if bindings is None:
            bindings, _ = self.exact_bindings()
        if self.kind in ("cn", "homogeneous"):
            return cn_planar(bindings, self.degree)
        if self.kind == "abel":
            vals = tuple(bindings.get(v, 0) for v in abel_names(self.degree))
            return AbelSystem(self.degree, tuple(_as_poly(v) for v in vals)).planar()
        if self.kind == "planar":
            xd, yd = parse_expr(self.xdot), parse_expr(self.ydot)
            if not (xd.is_polynomial() and yd.is_polynomial()):
                raise SystemError_("xdot/ydot must be polynomials")
            return PlanarSystem(_subs_poly(xd.num, bindings), _subs_poly(yd.num, bindings))
        raise SystemError_("kind 'lienard' has no planar field; use the Lienard pair")

    def lienard(self, bindings: Mapping[str, object] | None = None) -> LienardPair:
        if bindings is None:
            bindings, _ = self.exact_bindings()
        if self.kind in ("cn", "homogeneous"):
            return lienard_from_cn(bindings, self.degree)
        if self.kind == "abel":
            vals = tuple(bindings.get(v, 0) for v in abel_names(self.degree))
            return lienard_from_abel(AbelSystem(self.degree, vals))
        if self.kind == "lienard":
            f = parse_expr(self.f) if self.f else RationalFunction(Poly.constant(0))
            return LienardPair(f.subs(bindings), parse_expr(self.g).subs(bindings))
        raise SystemError_("kind 'planar' has no known Lienard reduction; use kind cn/abel/lienard")

    def default_weights(self) -> dict[str, int]:
        return dict(self.weights) if self.weights else default_weights(self.names())


def _text(v, name) -> str:
    if isinstance(v, bool) or v is None:
        raise SystemError_(f"coefficient {name!r}: expected a string, got {v!r}")
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        raise SystemError_(f"coefficient {name!r}: binary floats are not exact; quote the value")
    return str(v).strip()


def _as_poly(v) -> Poly:
    if isinstance(v, Poly):
        return v
    if isinstance(v, RAT_TYPES):
        return Poly.constant(v)
    rf = RationalFunction.lift(v)
    if not rf.is_polynomial():
        raise SystemError_("Abel coefficients must be polynomial")
    return rf.num


# ---------------------------------------------------------------------- catalog
@dataclass(frozen=True)
class FamilyRecord:
    id: str
    title: str
    setting: str
    spec: SystemSpec
    bindings: dict
    radicals: frozenset
    free: tuple[str, ...]
    urabe: dict
    first_integral: str | None = None
    linearization: dict | None = None
    expect: dict = field(default_factory=dict)
    exact_text: dict = field(default_factory=dict)
    notes: str = ""

    @property
    def numeric_only(self) -> bool:
        return self.spec.is_numeric()

    def planar(self) -> PlanarSystem:
        self._exact_only()
        return self.spec.planar()

    def lienard(self) -> LienardPair:
        self._exact_only()
        return self.spec.lienard()

    def _exact_only(self):
        if self.numeric_only:
            raise SystemError_(f"family {self.id} has numeric-only coefficients; use numeric_values()")

    def numeric_values(self, dps: int = 60) -> dict:
        return self.spec.numeric_values(dps)


@lru_cache(maxsize=1)
def _load_catalog() -> dict:
    text = resources.files("isochron.data").joinpath("catalog.yaml").read_text()
    return yaml.safe_load(text)


def catalog_settings() -> dict[str, SystemSpec]:
    return {k: SystemSpec.from_mapping(v) for k, v in _load_catalog()["settings"].items()}


def catalog_ids() -> list[str]:
    return [f["id"] for f in _load_catalog()["families"]]


def catalog_lookup(id: str) -> FamilyRecord:
    for f in _load_catalog()["families"]:
        if f["id"] == id:
            return _record(f)
    raise KeyError(f"unknown family id {id!r}; known: {', '.join(catalog_ids())}")


def _record(f: Mapping) -> FamilyRecord:
    spec = SystemSpec.from_mapping(f["system"])
    if spec.is_numeric():
        bindings = {k: None for k in spec.coefficients}
        exact = {k: v for k, v in spec.coefficients.items() if not NUMERIC_RE.match(v)}
        for k, v in exact.items():
            bindings[k] = parse_expr(v)
        radicals: set[int] = set()
    else:
        bindings, radicals = spec.exact_bindings()
    free = tuple(k for k, v in spec.coefficients.items() if v == "free")
    urabe = f.get("urabe", "zero")
    return FamilyRecord(
        id=f["id"], title=f.get("title", ""), setting=f.get("setting", ""), spec=spec,
        bindings=bindings, radicals=frozenset(radicals), free=free,
        urabe=urabe if isinstance(urabe, dict) else {"kind": urabe},
        first_integral=f.get("first_integral"), linearization=f.get("linearization"),
        expect=dict(f.get("expect") or {}), exact_text=dict(f.get("exact_text") or {}),
        notes=f.get("notes", ""))


__all__ = [
    "PlanarSystem", "LienardPair", "AbelSystem", "FamilyRecord", "SystemSpec", "SystemError_",
    "lienard_from_cn", "lienard_from_abel", "cn_planar", "catalog_lookup", "catalog_ids",
    "catalog_settings", "cn_names", "abel_names", "homogeneous_names", "default_weights",
    "weighted_order", "reduction_residual", "FORMAT_VERSION",
]
