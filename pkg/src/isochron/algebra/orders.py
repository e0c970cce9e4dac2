"""Monomial orders, including weighted degree orders and elimination blocks."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

KINDS = ("lex", "degrevlex", "weighted-degrevlex", "elimination-block")

_SPLIT = re.compile(r"(\d+)")


def var_key(name: str):
    """Natural sort key: this defines the global variable ordering."""
    return tuple((0, int(p)) if p.isdigit() else (1, p) for p in _SPLIT.split(name) if p)


def sort_vars(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=var_key))


@dataclass(frozen=True)
class WeightedOrder:
    """A monomial order on named variables.

    ``variables`` optionally fixes the precedence (most significant first);
    variables not listed follow in the global order.  ``block`` lists the
    variables of the elimination block for ``elimination-block`` orders.
    """

    kind: str = "degrevlex"
    weights: tuple[tuple[str, int], ...] = ()
    variables: tuple[str, ...] = ()
    block: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown order kind {self.kind!r}; expected one of {KINDS}")
        for name, w in self.weights:
            if int(w) < 1:
                raise ValueError(f"weight of {name} must be >= 1, got {w}")
        if self.kind == "elimination-block" and not self.block:
            raise ValueError("elimination-block order needs a nonempty block")

    @classmethod
    def make(cls, kind: str = "degrevlex", weights: Mapping[str, int] | None = None,
             variables: Iterable[str] = (), block: Iterable[str] = ()) -> "WeightedOrder":
        w = tuple(sorted(((k, int(v)) for k, v in (weights or {}).items()), key=lambda kv: var_key(kv[0])))
        return cls(kind, w, tuple(variables), sort_vars(block))

    @property
    def weight_map(self) -> dict[str, int]:
        return dict(self.weights)

    def with_block(self, block: Iterable[str]) -> "WeightedOrder":
        return WeightedOrder(kind="elimination-block", weights=self.weights,
                             variables=self.variables, block=sort_vars(block))

    def precedence(self, vars: Iterable[str]) -> tuple[str, ...]:
        vars = tuple(vars)
        present = set(vars)
        head = [v for v in self.variables if v in present]
        rest = [v for v in sort_vars(vars) if v not in set(head)]
        return tuple(head + rest)

    def key_for(self, vars: tuple[str, ...]) -> Callable[[tuple[int, ...]], tuple]:
        """Sort key on exponent tuples laid out as ``vars``; larger key = larger monomial."""
        prec = self.precedence(vars)
        pos = {v: i for i, v in enumerate(vars)}
        idx = [pos[v] for v in prec]
        wmap = self.weight_map
        if self.kind == "weighted-degrevlex":
            missing = [v for v in vars if v not in wmap]
            if missing:
                raise KeyError(f"no weight for variable(s) {missing}")
        w = [wmap.get(v, 1) for v in vars]
        ridx = idx[::-1]
        if self.kind == "lex":
            return lambda e: tuple([e[i] for i in idx])
        if self.kind in ("degrevlex", "weighted-degrevlex"):
            if self.kind == "degrevlex":
                return lambda e: (sum(e), tuple([-e[i] for i in ridx]))
            return lambda e: (sum([w[i] * e[i] for i in idx]), tuple([-e[i] for i in ridx]))
        blk = set(self.block)
        bidx = [i for i in idx if vars[i] in blk]
        oidx = [i for i in idx if vars[i] not in blk]
        rb, ro = bidx[::-1], oidx[::-1]
        return lambda e: (sum([w[i] * e[i] for i in bidx]), tuple([-e[i] for i in rb]),
                          sum([w[i] * e[i] for i in oidx]), tuple([-e[i] for i in ro]))

    def descriptor(self) -> dict:
        d = {"kind": self.kind}
        if self.weights:
            d["weights"] = {k: v for k, v in self.weights}
        if self.variables:
            d["variables"] = list(self.variables)
        if self.block:
            d["block"] = list(self.block)
        return d

    @classmethod
    def from_descriptor(cls, d: Mapping) -> "WeightedOrder":
        return cls.make(d.get("kind", "degrevlex"), d.get("weights"), d.get("variables", ()), d.get("block", ()))


DEGREVLEX = WeightedOrder()
