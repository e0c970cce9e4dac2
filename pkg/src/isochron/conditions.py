"""Necessary isochronicity conditions for x'' + f(x) x'^2 + g(x) = 0.

With F = int f, phi = int e^F and X = sqrt(2 int g e^{2F}), the center is
isochronous iff H(X) := phi(X^{-1}(X)) - X is even.  The odd coefficients of
H are therefore the conditions, and the even ones give the Urabe
coefficients: [X^{2k+2}] H = c_{2k+1} / (2k+2).

H is obtained by Lagrange-Buermann without composing series:
    [z^n] phi(X^{-1}(z)) = (1/n) [x^{n-1}] e^F (x/X)^n.

An independent route (``cr_derivative_oracle``) compares the u-derivatives of
g(x) e^{F(x)}, u = phi(x), with those of X/(1+h(X)) and eliminates the c's.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace

from gmpy2 import mpq

from .algebra.orders import WeightedOrder, sort_vars
from .algebra.poly import Poly, addmul_terms, clean
from .algebra.ratfunc import RationalFunction
from .series import PSeries, SeriesError
from .systems import LienardPair, default_weights

log = logging.getLogger(__name__)


class ConditionError(ValueError):
    pass


@dataclass(frozen=True)
class SeriesTriple:
    F: PSeries
    phi: PSeries
    X: PSeries
    E: PSeries          # e^F, kept because phi' = E
    truncation_order: int


@dataclass
class ConditionSet:
    """Ordered condition polynomials s_1, s_2, ... with their provenance.

    ``raw[k-1]`` is the (unnormalized) coefficient of X^{2k+1}; ``conditions``
    keeps the nonzero ones after normalization and ``indices`` says which k
    each came from.  ``urabe_coeffs[j]`` is c_{2j+1}.
    """

    conditions: list[Poly]
    indices: list[int]
    raw: list[Poly]
    urabe_coeffs: list[Poly]
    weights: WeightedOrder
    order_m: int
    variables: tuple[str, ...] = ()
    method: str = "series"
    homogenized: bool = False
    branch: str | None = None
    back_substitution: dict[str, str] = field(default_factory=dict)
    seconds: float = 0.0

    def first_nonzero(self) -> Poly | None:
        return self.conditions[0] if self.conditions else None

    def urabe(self, k: int) -> Poly:
        """c_k for odd k."""
        if k % 2 == 0 or k < 1:
            raise ValueError("Urabe coefficients have odd index")
        return self.urabe_coeffs[(k - 1) // 2]


# ---------------------------------------------------------------------- series route
def compute_series_triple(lp: LienardPair, N: int) -> SeriesTriple:
    if N < 2:
        raise ConditionError("truncation order must be at least 2")
    try:
        fs, gs = lp.series(N)
    except SeriesError as exc:
        raise ConditionError(f"not a center candidate: {exc}") from None
    if gs.order >= 1 and (gs[0] != 0 or gs[1] != 1):
        raise ConditionError("not a center candidate: xg(x)>0 fails structurally")
    F = fs.integrate().truncate(N)
    E = F.exp()
    phi = E.integrate().truncate(N)
    E2 = (F.scale(2)).exp()
    X2 = (gs * E2).integrate().scale(2).truncate(N + 1)
    try:
        X = X2.sqrt_valuation2().truncate(N)
    except SeriesError as exc:
        raise ConditionError(f"not a center candidate: xg(x)>0 fails structurally ({exc})") from None
    return SeriesTriple(F=F, phi=phi, X=X, E=E, truncation_order=N)


def _urabe_series(st: SeriesTriple, top: int) -> tuple[list[dict], tuple[str, ...]]:
    """Term dicts of H_1..H_top (index n -> coefficient of X^n); H_1 = 0."""
    N = st.truncation_order
    if top > N:
        raise ConditionError(f"truncation order {N} too low for X^{top}")
    Q = st.X.shift(-1).reciprocal().truncate(top - 1)      # x / X(x)
    E = st.E.truncate(top - 1)
    ring = sort_vars(set(Q.ring) | set(E.ring))
    Q, E = Q.in_ring(ring), E.in_ring(ring)
    q = [Q.terms(k) for k in range(top)]
    e = [E.terms(k) for k in range(top)]
    if q[0] != {0: mpq(1)}:
        raise ConditionError("x/X(x) must start with 1")
    out: list[dict] = [{}]
    for n in range(1, top + 1):
        # Q^n up to x^{n-1} by the power recurrence (Q_0 = 1)
        pw = [{0: mpq(1)}]
        for j in range(1, n):
            r: dict = {}
            for k in range(1, j + 1):
                if q[k] and pw[j - k]:
                    addmul_terms(r, q[k], pw[j - k], (n + 1) * k - j)
            pw.append(clean({e: c / j for e, c in r.items()}))
        r = {}
        for i in range(n):
            if e[i] and pw[n - 1 - i]:
                addmul_terms(r, e[i], pw[n - 1 - i])
        coeff = {k: v / n for k, v in clean(r).items()}
        if n == 1:
            coeff = clean({**coeff, 0: coeff.get(0, 0) - 1})
        out.append(coeff)
        log.debug("H_%d: %d terms", n, len(coeff))
    return out, ring


def urabe_extract(st: SeriesTriple, m: int, weights: WeightedOrder | None = None) -> ConditionSet:
    """Conditions from X^3 .. X^{2m+1} and c_1 .. c_{2m+1} from the even coefficients."""
    if st.truncation_order < 2 * m + 4:
        raise ConditionError(f"truncation order {st.truncation_order} too low for m={m} (need >= {2 * m + 4})")
    t0 = time.perf_counter()
    H, ring = _urabe_series(st, 2 * m + 2)
    raw = [Poly(ring, H[2 * k + 1]).trim() for k in range(1, m + 1)]
    cs = [Poly(ring, H[2 * j + 2]).trim().scale(2 * j + 2) for j in range(m + 1)]
    return _assemble(raw, cs, weights, m, "series", time.perf_counter() - t0)


def conditions_for(lp: LienardPair, m: int, N: int | None = None,
                   weights: WeightedOrder | None = None) -> ConditionSet:
    N = N or 2 * m + 4
    return urabe_extract(compute_series_triple(lp, N), m, weights)


def _assemble(raw, cs, weights, m, method, seconds) -> ConditionSet:
    names = sort_vars({v for p in list(raw) + list(cs) for v in p.used_vars()})
    if weights is None:
        try:
            weights = WeightedOrder.make("weighted-degrevlex", default_weights(names))
        except KeyError:
            weights = WeightedOrder.make("degrevlex")
    conds, idx = [], []
    for k, p in enumerate(raw, start=1):
        if not p.is_zero():
            conds.append(normalize_condition(p, weights))
            idx.append(k)
    return ConditionSet(conditions=conds, indices=idx, raw=list(raw), urabe_coeffs=list(cs),
                        weights=weights, order_m=m, variables=names, method=method, seconds=seconds)


def normalize_condition(p: Poly, order: WeightedOrder) -> Poly:
    """Integer coefficients, content 1, positive leading coefficient under ``order``."""
    try:
        q, _ = p.trim().primitive(order)
    except KeyError:
        q, _ = p.trim().primitive(WeightedOrder.make("degrevlex"))
    return q


# ---------------------------------------------------------------------- derivative oracle
def cr_derivative_oracle(lp: LienardPair, m: int, weights: WeightedOrder | None = None) -> ConditionSet:
    """Second route: equate d^k/du^k of g e^F and of X/(1+h(X)) at 0, k = 1 .. 2m+2."""
    t0 = time.perf_counter()
    K = 2 * m + 2
    fs, gs = lp.series(K + 1)
    # w_k = S_k(0): S_1 = g' + f g, S_{k+1} = S_k' + (1-k) f S_k
    S = gs.differentiate() + (fs * gs).truncate(K)
    w = [None, S[0]]
    for k in range(1, K):
        S = S.differentiate() + (fs.truncate(S.order - 1) * S.truncate(S.order - 1)).scale(1 - k)
        w.append(S[0])
    # v_k = G_k(0): G_0 = X/(1+h), G_k = G_{k-1}'/(1+h), h = sum c_{2j+1} X^{2j+1}
    cnames = [f"c{2 * j + 1}" for j in range(m + 1)]
    h = PSeries([Poly.variable(cnames[(i - 1) // 2]) if i % 2 == 1 and (i - 1) // 2 < len(cnames) else 0
                 for i in range(K + 1)], K, "X")
    inv = (h + 1).reciprocal()
    G = PSeries.identity(K, "X") * inv
    v = [None]
    for k in range(1, K + 1):
        G = G.differentiate() * inv.truncate(G.order - 1)
        v.append(G[0])
    # eliminate c_{2j+1} from the equation k = 2j+2, in increasing k
    solved: dict[str, RationalFunction] = {}
    raw: list[Poly] = []
    cs: list[Poly] = []
    for k in range(2, K + 1):
        eq = (RationalFunction(v[k]).subs(solved) - RationalFunction(w[k]))
        if not eq.is_polynomial():
            raise ConditionError("elimination produced a non-polynomial expression")
        eq = eq.num
        if k % 2 == 0:
            c = cnames[(k - 2) // 2]
            parts = eq.coefficients_in(c)
            if set(parts) - {0, 1} or 1 not in parts or not parts[1].is_constant():
                raise ConditionError(f"{c} does not enter equation {k} linearly with a constant coefficient")
            sol = (-parts.get(0, Poly.constant(0))).scale(1 / parts[1].constant_value())
            solved[c] = RationalFunction(sol)
            cs.append(sol)
        else:
            if set(eq.used_vars()) & set(cnames):
                raise ConditionError(f"equation {k} still involves Urabe coefficients")
            raw.append(eq)
    return _assemble(raw, cs, weights, m, "derivative-oracle", time.perf_counter() - t0)


# ---------------------------------------------------------------------- homogenization
def _upper(name: str) -> str:
    return name[0].upper() + name[1:]


def homogenize_reparametrize(cs: ConditionSet) -> ConditionSet:
    """Rewrite in A/B/C parameters, A^w = a, so quasi-homogeneous becomes homogeneous."""
    w = cs.weights.weight_map
    for p in cs.conditions:
        wd = p.weighted_degree(w)
        if not wd.homogeneous:
            raise ConditionError(f"condition is not quasi-homogeneous (weighted degrees {wd.degrees}); upstream bug")

    def lift(p: Poly) -> Poly:
        if p.is_zero():
            return p
        vars = p.vars
        new_vars = tuple(_upper(v) for v in vars)
        items = [(tuple(e * w[v] for e, v in zip(ex, vars)), c) for ex, c in p.items()]
        return Poly.from_terms(items, new_vars)

    back = {_upper(v): f"{v}^(1/{w[v]})" if w[v] > 1 else v for v in cs.variables}
    new = replace(cs, conditions=[lift(p) for p in cs.conditions], raw=[lift(p) for p in cs.raw],
                  urabe_coeffs=[lift(p) for p in cs.urabe_coeffs],
                  weights=WeightedOrder.make("degrevlex"), variables=tuple(_upper(v) for v in cs.variables),
                  homogenized=True, back_substitution=back)
    new.conditions = [normalize_condition(p, new.weights) for p in new.conditions]
    return new


def normalize_a20(cs: ConditionSet, mode: str, var: str = "A_2_0") -> ConditionSet:
    """Slice the homogeneous conditions by A_2_0 = 0 or A_2_0 = 1."""
    if mode not in ("set_zero", "set_one"):
        raise ConditionError(f"mode must be set_zero or set_one, got {mode!r}")
    if not cs.homogenized:
        raise ConditionError("normalize_a20 expects homogenized conditions")
    val = 0 if mode == "set_zero" else 1
    sub = lambda p: p.subs({var: val}).trim()  # noqa: E731
    conds, idx = [], []
    order = WeightedOrder.make("degrevlex")
    for k, p in zip(cs.indices, cs.conditions):
        q = sub(p)
        if not q.is_zero():
            conds.append(normalize_condition(q, order))
            idx.append(k)
    return replace(cs, conditions=conds, indices=idx, raw=[sub(p) for p in cs.raw],
                   urabe_coeffs=[sub(p) for p in cs.urabe_coeffs],
                   variables=tuple(v for v in cs.variables if v != var), branch=f"{var}={val}")


# ---------------------------------------------------------------------- monotonicity
@dataclass(frozen=True)
class MonotonicityIndex:
    """S(f, g) = 5 g''(0)^2 + 10 g''(0) f(0) + 8 f(0)^2 - 3 g'''(0) - 6 f'(0).

    ``normalized`` divides out the positive rational content only, so its
    sign agrees with ``value`` everywhere.
    """

    value: Poly
    normalized: Poly
    factor: mpq


def monotonicity_index(lp: LienardPair) -> MonotonicityIndex:
    fs, gs = lp.series(3)
    f0, f1 = fs[0], fs[1]
    g2, g3 = gs[2].scale(2), gs[3].scale(6)   # derivatives g''(0), g'''(0)
    S = g2 * g2 * 5 + g2 * f0 * 10 + f0 * f0 * 8 - g3 * 3 - f1 * 6
    S = S.trim()
    if S.is_zero():
        return MonotonicityIndex(S, S, mpq(1))
    q, s = S.primitive(fix_sign=False)
    if s < 0:
        q, s = -q, -s
    return MonotonicityIndex(S, q, s)


__all__ = [
    "SeriesTriple", "ConditionSet", "MonotonicityIndex", "ConditionError", "compute_series_triple",
    "urabe_extract", "conditions_for", "cr_derivative_oracle", "homogenize_reparametrize",
    "normalize_a20", "monotonicity_index", "normalize_condition",
]
