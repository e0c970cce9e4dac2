"""Buchberger's algorithm over Q with weighted and block orders.

Internally every monomial carries an integer sort key that is a *linear*
function of its exponent vector, so multiplying a reducer by a monomial t
shifts all of its keys by key(t).  Leading coefficients are kept at 1
during the run; the reported bases are rescaled to content-free integer
polynomials with a positive leading coefficient.

Pairs are selected by the normal strategy on sugar degree, with the
Gebauer-Moeller installation of Buchberger's two criteria.
"""

from __future__ import annotations

import heapq
import logging
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from gmpy2 import mpq

from .algebra.orders import WeightedOrder, sort_vars
from .algebra.poly import BITS, MAX_EXP, Poly, guard_mask, pack, unpack

log = logging.getLogger(__name__)

_ONE = mpq(1)
_WFIELD = 41          # bits reserved for a weighted degree inside a key
_SAT_VAR = "_t_sat"


class GroebnerError(ValueError):
    pass


class BudgetExceeded(GroebnerError):
    """Raised when the pair budget trips; ``stats`` says how far the run got."""

    def __init__(self, msg: str, stats: dict):
        super().__init__(msg)
        self.stats = stats


@dataclass
class Ideal:
    generators: list[Poly]
    order: WeightedOrder = field(default_factory=lambda: WeightedOrder.make("degrevlex"))

    def __post_init__(self):
        gens = [g.trim() for g in self.generators]
        self.generators = [g for g in gens if not g.is_zero()]

    @property
    def variables(self) -> tuple[str, ...]:
        return sort_vars({v for g in self.generators for v in g.used_vars()})

    def has_unit(self) -> bool:
        return any(g.is_constant() for g in self.generators)


@dataclass
class GroebnerBasis:
    basis: list[Poly]
    order: WeightedOrder
    reduced: bool = True
    complete: bool = True
    stats: dict = field(default_factory=dict)

    @property
    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.basis)

    @property
    def variables(self) -> tuple[str, ...]:
        return sort_vars({v for g in self.basis for v in g.used_vars()})

    def normal_form(self, p: Poly) -> Poly:
        return normal_form(p, self)

    def contains(self, p: Poly) -> bool:
        return normal_form(p, self).is_zero()

    def leading_monomials(self) -> list[Poly]:
        out = []
        for g in self.basis:
            ex, _ = g.leading_term(self.order)
            out.append(Poly.from_terms({ex: 1}, g.vars))
        return out


# ---------------------------------------------------------------------- ring and keys
class _Ring:
    def __init__(self, vars: tuple[str, ...], order: WeightedOrder):
        self.vars = vars
        self.n = n = len(vars)
        self.order = order
        wmap = order.weight_map
        if order.kind == "weighted-degrevlex":
            missing = [v for v in vars if v not in wmap]
            if missing:
                raise KeyError(f"no weight for variable(s) {missing}")
        if order.kind in ("lex", "degrevlex"):
            wmap = {}
        self.w = [int(wmap.get(v, 1)) for v in vars]
        self.H = guard_mask(n)
        prec = order.precedence(vars)
        pos = {v: i for i, v in enumerate(vars)}
        c = [0] * n
        if order.kind == "lex":
            for j, v in enumerate(prec):
                c[pos[v]] = 1 << (BITS * (n - 1 - j))
        elif order.kind in ("degrevlex", "weighted-degrevlex"):
            top = BITS * n + 1
            for j, v in enumerate(prec):
                c[pos[v]] = (self.w[pos[v]] << top) - (1 << (BITS * j))
        else:
            blk = set(order.block)
            other = [v for v in prec if v not in blk]
            block = [v for v in prec if v in blk]
            s_other_deg = BITS * len(other) + 1
            s_block_rev = s_other_deg + _WFIELD
            s_block_deg = s_block_rev + BITS * len(block) + 1
            for j, v in enumerate(other):
                c[pos[v]] = (self.w[pos[v]] << s_other_deg) - (1 << (BITS * j))
            for j, v in enumerate(block):
                c[pos[v]] = (self.w[pos[v]] << s_block_deg) - (1 << (s_block_rev + BITS * j))
        self.coef = c
        self._kcache: dict[int, int] = {}

    def key(self, m: int) -> int:
        k = self._kcache.get(m)
        if k is None:
            e = unpack(m, self.n)
            k = sum(ci * ei for ci, ei in zip(self.coef, e))
            self._kcache[m] = k
        return k

    def deg(self, m: int) -> int:
        return sum(wi * ei for wi, ei in zip(self.w, unpack(m, self.n)))

    def lcm(self, a: int, b: int) -> int:
        return pack(max(x, y) for x, y in zip(unpack(a, self.n), unpack(b, self.n)))

    def coprime(self, a: int, b: int) -> bool:
        return not any(x and y for x, y in zip(unpack(a, self.n), unpack(b, self.n)))

    def divides(self, a: int, b: int) -> bool:
        H = self.H
        return ((b | H) - a) & H == H

    def lift(self, p: Poly) -> dict[int, mpq]:
        if p.vars != self.vars:
            p = p.with_vars(self.vars)
        return dict(p.terms)


class _GP:
    """Basis element: monic, terms sorted by decreasing key."""

    __slots__ = ("lm", "lk", "tail", "sugar", "deg")

    def __init__(self, ring: _Ring, terms: dict[int, mpq], sugar: int):
        items = sorted(((ring.key(m), m, c) for m, c in terms.items()), reverse=True)
        lk, lm, lc = items[0]
        inv = 1 / lc
        self.lm, self.lk = lm, lk
        self.tail = [(k, m, c * inv) for k, m, c in items[1:]]
        self.deg = ring.deg(lm)
        self.sugar = max(sugar, self.deg)

    def terms(self) -> dict[int, mpq]:
        d = {self.lm: _ONE}
        for _, m, c in self.tail:
            d[m] = c
        return d


def _reduce(ring: _Ring, terms: dict[int, mpq], basis: Sequence[_GP], full: bool = True) -> dict[int, mpq]:
    """Remainder of ``terms`` (monomial -> coefficient) on division by ``basis``."""
    H = ring.H
    key = ring.key
    p: dict[int, mpq] = {}      # key -> coefficient
    mono: dict[int, int] = {}   # key -> monomial
    for m, c in terms.items():
        k = key(m)
        p[k] = c
        mono[k] = m
    heap = [-k for k in p]
    heapq.heapify(heap)
    rem: dict[int, mpq] = {}
    lms = [(g.lm, g) for g in basis]
    while heap:
        k = -heapq.heappop(heap)
        c = p.pop(k, None)
        if c is None:
            continue
        m = mono[k]
        red = None
        mh = m | H
        for lm, g in lms:
            if (mh - lm) & H == H:
                red = g
                break
        if red is None:
            rem[m] = c
            if not full:
                for k2, c2 in p.items():
                    rem[mono[k2]] = c2
                return rem
            continue
        t = m - red.lm
        tk = k - red.lk
        get = p.get
        for gk, gm, gc in red.tail:
            nk = gk + tk
            v = get(nk)
            if v is None:
                p[nk] = -c * gc
                mono[nk] = gm + t
                heapq.heappush(heap, -nk)
            else:
                v = v - c * gc
                if v:
                    p[nk] = v
                else:
                    del p[nk]
    return rem


# ---------------------------------------------------------------------- Buchberger
class _Engine:
    def __init__(self, ring: _Ring, budget: int | None, degree_bound: int | None, max_terms: int | None):
        self.ring = ring
        self.polys: list[_GP] = []
        self.G: list[int] = []
        self.B: dict[tuple[int, int], tuple[int, int, int]] = {}
        self.budget = budget
        self.degree_bound = degree_bound
        self.max_terms = max_terms
        self.stats = {"pairs": 0, "zero_reductions": 0, "criterion_skips": 0, "max_terms": 0,
                      "skipped_by_degree": 0}
        self.unit = False

    def _check_exp(self, m: int):
        if max(unpack(m, self.ring.n), default=0) > MAX_EXP // 2:
            raise GroebnerError("exponent overflow in Groebner computation")

    def add(self, terms: dict[int, mpq], sugar: int):
        if not terms:
            return
        if self.max_terms is not None and len(terms) > self.max_terms:
            raise BudgetExceeded(f"polynomial with {len(terms)} terms exceeds the size budget", dict(self.stats))
        self.stats["max_terms"] = max(self.stats["max_terms"], len(terms))
        h = _GP(self.ring, terms, sugar)
        if h.lm == 0:
            self.unit = True
        self.polys.append(h)
        self._update(len(self.polys) - 1)

    def _update(self, hi: int):
        ring, polys = self.ring, self.polys
        h = polys[hi]
        C = [(gi, ring.lcm(h.lm, polys[gi].lm)) for gi in self.G]
        D = []
        while C:
            gi, L = C.pop()
            g = polys[gi]
            if ring.coprime(h.lm, g.lm) or not (
                    any(ring.divides(L2, L) for _, L2 in C) or any(ring.divides(L2, L) for _, L2 in D)):
                D.append((gi, L))
            else:
                self.stats["criterion_skips"] += 1
        E = []
        for gi, L in D:
            if ring.coprime(h.lm, polys[gi].lm):
                self.stats["criterion_skips"] += 1
            else:
                E.append((gi, L))
        newB = {}
        for (i, j), val in self.B.items():
            L = val[2]
            if (ring.divides(h.lm, L) and ring.lcm(polys[i].lm, h.lm) != L
                    and ring.lcm(polys[j].lm, h.lm) != L):
                self.stats["criterion_skips"] += 1
                continue
            newB[(i, j)] = val
        for gi, L in E:
            self._check_exp(L)
            g = polys[gi]
            sugar = max(h.sugar + ring.deg(L) - h.deg, g.sugar + ring.deg(L) - g.deg)
            newB[(gi, hi)] = (sugar, ring.key(L), L)
        self.B = newB
        self.G = [gi for gi in self.G if not ring.divides(h.lm, polys[gi].lm)] + [hi]

    def _spoly(self, i: int, j: int, L: int) -> dict[int, mpq]:
        f, g = self.polys[i], self.polys[j]
        tf, tg = L - f.lm, L - g.lm
        r: dict[int, mpq] = {}
        for _, m, c in f.tail:
            r[m + tf] = c
        for _, m, c in g.tail:
            mm = m + tg
            v = r.get(mm)
            if v is None:
                r[mm] = -c
            else:
                v = v - c
                if v:
                    r[mm] = v
                else:
                    del r[mm]
        return r

    def run(self):
        while self.B and not self.unit:
            (i, j), (sugar, _, L) = min(self.B.items(), key=lambda kv: (kv[1][0], kv[1][1], kv[0]))
            del self.B[(i, j)]
            if self.degree_bound is not None and sugar > self.degree_bound:
                self.stats["skipped_by_degree"] += 1
                continue
            self.stats["pairs"] += 1
            if self.budget is not None and self.stats["pairs"] > self.budget:
                raise BudgetExceeded(f"pair budget {self.budget} exceeded", dict(self.stats))
            s = self._spoly(i, j, L)
            r = _reduce(self.ring, s, [self.polys[k] for k in self.G])
            if not r:
                self.stats["zero_reductions"] += 1
                continue
            self.add(r, sugar)
            if self.stats["pairs"] % 200 == 0:
                log.info("groebner: %d pairs, basis %d, queue %d", self.stats["pairs"], len(self.G), len(self.B))

    def reduced_basis(self) -> list[dict[int, mpq]]:
        if self.unit:
            return [{0: _ONE}]
        G = [self.polys[i] for i in self.G]
        out = []
        for idx, g in enumerate(G):
            others = G[:idx] + G[idx + 1:]
            tail = {m: c for _, m, c in g.tail}
            r = _reduce(self.ring, tail, others) if tail else {}
            r[g.lm] = _ONE
            out.append(r)
        out.sort(key=lambda d: max(self.ring.key(m) for m in d))
        return out


def _to_poly(ring: _Ring, terms: dict[int, mpq], normalize: bool = True) -> Poly:
    p = Poly(ring.vars, dict(terms))
    if normalize and p.terms:
        lead = max(terms, key=ring.key)
        q, s = p.primitive(fix_sign=False)
        if terms[lead] * s < 0:   # sign of q's leading coefficient
            q = -q
        p = q
    return p.trim()


def buchberger(I: Ideal, budget: int | None = None, degree_bound: int | None = None,
               max_terms: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``I`` under ``I.order``.

    ``budget`` caps the number of S-pairs reduced; ``degree_bound`` drops pairs
    of larger sugar (the result is then flagged ``complete=False``).
    """
    if not I.generators:
        raise GroebnerError("ideal has no nonzero generators")
    t0 = time.perf_counter()
    vars = sort_vars({v for g in I.generators for v in g.used_vars()} | set(I.order.block))
    ring = _Ring(vars, I.order)
    eng = _Engine(ring, budget, degree_bound, max_terms)
    gens = sorted((ring.lift(g) for g in I.generators), key=lambda d: (max(ring.deg(m) for m in d), len(d)))
    for d in gens:
        sugar = max(ring.deg(m) for m in d)
        r = _reduce(ring, d, [eng.polys[k] for k in eng.G])
        eng.add(r, sugar)
        if eng.unit:
            break
    eng.run()
    basis = [_to_poly(ring, d) for d in eng.reduced_basis()]
    stats = dict(eng.stats, seconds=round(time.perf_counter() - t0, 3), size=len(basis))
    complete = eng.stats["skipped_by_degree"] == 0
    return GroebnerBasis(basis=basis, order=I.order, reduced=True, complete=complete, stats=stats)


def normal_form(p: Poly, G: GroebnerBasis) -> Poly:
    vars = sort_vars(set(p.used_vars()) | set(G.variables) | set(G.order.block))
    ring = _Ring(vars, G.order)
    basis = [_GP(ring, ring.lift(g), 0) for g in G.basis]
    r = _reduce(ring, ring.lift(p.trim()), basis)
    return Poly(vars, r).trim()


def s_polynomial(f: Poly, g: Poly, order: WeightedOrder) -> Poly:
    vars = sort_vars(set(f.used_vars()) | set(g.used_vars()))
    ring = _Ring(vars, order)
    eng = _Engine(ring, None, None, None)
    eng.polys = [_GP(ring, ring.lift(f), 0), _GP(ring, ring.lift(g), 0)]
    L = ring.lcm(eng.polys[0].lm, eng.polys[1].lm)
    return Poly(vars, eng._spoly(0, 1, L)).trim()


def eliminate(I: Ideal, drop: Iterable[str], budget: int | None = None) -> Ideal:
    """Generators of I intersected with Q[remaining variables]."""
    drop = tuple(drop)
    if not drop:
        return Ideal(buchberger(I, budget).basis, I.order)
    missing = set(drop) - set(I.variables)
    if missing:
        raise GroebnerError(f"cannot eliminate variables not in the ideal: {sorted(missing)}")
    G = buchberger(Ideal(I.generators, I.order.with_block(drop)), budget)
    keep = [g for g in G.basis if not set(g.used_vars()) & set(drop)]
    return Ideal(keep, I.order)


def saturate(I: Ideal, q: Poly, budget: int | None = None) -> Ideal:
    """I : q^infinity by adjoining 1 - t q and eliminating t."""
    q = q.trim()
    if q.is_zero():
        raise GroebnerError("cannot saturate by the zero polynomial")
    t = Poly.variable(_SAT_VAR)
    gens = list(I.generators) + [Poly.constant(1) - t * q]
    w = dict(I.order.weights)
    w[_SAT_VAR] = 1
    order = WeightedOrder.make("elimination-block", w, I.order.variables, (_SAT_VAR,))
    G = buchberger(Ideal(gens, order), budget)
    keep = [g for g in G.basis if _SAT_VAR not in g.used_vars()]
    return Ideal(keep, I.order)


def radical_contains(I: Ideal, p: Poly, budget: int | None = None) -> bool:
    """p in sqrt(I), by testing whether I + <1 - t p> is the unit ideal."""
    t = Poly.variable(_SAT_VAR)
    w = dict(I.order.weights)
    w[_SAT_VAR] = 1
    order = WeightedOrder.make("degrevlex" if I.order.kind != "weighted-degrevlex" else I.order.kind, w)
    G = buchberger(Ideal(list(I.generators) + [Poly.constant(1) - t * p.trim()], order), budget)
    return G.is_unit


def ideals_equal(A: Sequence[Poly], B: Sequence[Poly], order: WeightedOrder, budget: int | None = None) -> bool:
    """Mutual membership test through reduced bases."""
    A = [p for p in A if not p.trim().is_zero()]
    B = [p for p in B if not p.trim().is_zero()]
    if not A or not B:
        return not A and not B
    GA, GB = buchberger(Ideal(list(A), order), budget), buchberger(Ideal(list(B), order), budget)
    return all(GB.contains(p) for p in GA.basis) and all(GA.contains(p) for p in GB.basis)


__all__ = [
    "Ideal", "GroebnerBasis", "GroebnerError", "BudgetExceeded", "buchberger", "normal_form",
    "s_polynomial", "eliminate", "saturate", "ideals_equal", "radical_contains",
]
