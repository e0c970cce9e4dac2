"""Closed-form expressions with rational powers: first integrals, linearizing maps, Urabe functions.

An :class:`AlgebraicExpr` is parsed from text.  It can be turned into an
exact rational function when every exponent is an integer, expanded as a
bivariate series around the origin otherwise, or evaluated numerically.

Series expansion of ``B^alpha`` factors out ``b0 = B(0,0)`` (a nonzero
rational) and expands ``(1 + (B-b0)/b0)^alpha`` binomially.  The constant
``b0^alpha`` may be irrational or even complex on the literal branch, so it
is carried symbolically as a :class:`Prefactor`; sums of terms with
different prefactors are rejected.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import mpmath
from gmpy2 import mpq

from .algebra.numbers import to_rat
from .algebra.parse import ParseError
from .algebra.poly import Poly
from .algebra.ratfunc import RationalFunction
from .series import BiSeries, SeriesError


class ExprError(ValueError):
    pass


# ---------------------------------------------------------------------- tree
@dataclass(frozen=True)
class Node:
    op: str                      # num, var, add, mul, pow, neg
    args: tuple = ()
    value: object = None         # mpq for num, name for var, Fraction exponent for pow


def _num(v) -> Node:
    return Node("num", value=to_rat(v))


class _Reader(ast.NodeVisitor):
    def generic_visit(self, node):
        raise ParseError(f"unsupported syntax: {type(node).__name__}")

    def visit_Expression(self, node):
        return self.visit(node.body)

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ParseError(f"only integer literals are exact: {node.value!r}")
        return _num(node.value)

    def visit_Name(self, node):
        return Node("var", value=node.id)

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return Node("neg", (v,))
        if isinstance(node.op, ast.UAdd):
            return v
        raise ParseError("unsupported unary operator")

    def visit_BinOp(self, node):
        a = self.visit(node.left)
        if isinstance(node.op, ast.Pow):
            return Node("pow", (a,), _exponent(node.right))
        b = self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return Node("add", (a, b))
        if isinstance(node.op, ast.Sub):
            return Node("add", (a, Node("neg", (b,))))
        if isinstance(node.op, ast.Mult):
            return Node("mul", (a, b))
        if isinstance(node.op, ast.Div):
            return Node("mul", (a, Node("pow", (b,), Fraction(-1))))
        raise ParseError("unsupported binary operator")

    def visit_Call(self, node):
        if not isinstance(node.func, ast.Name) or len(node.args) != 1:
            raise ParseError("only sqrt(.) and cbrt(.) calls are supported")
        e = {"sqrt": Fraction(1, 2), "cbrt": Fraction(1, 3)}.get(node.func.id)
        if e is None:
            raise ParseError(f"unknown function {node.func.id!r}")
        return Node("pow", (self.visit(node.args[0]),), e)


def _exponent(node) -> Fraction:
    """Integer or rational literal exponent such as 3, -2, 4/3, (-2/3)."""
    sign = 1
    while isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        sign = -sign if isinstance(node.op, ast.USub) else sign
        node = node.operand
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Fraction(sign * node.value)
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
        num, den = _exponent(node.left), _exponent(node.right)
        return sign * num / den
    raise ParseError("exponents must be rational literals")


# ---------------------------------------------------------------------- prefactors
@dataclass(frozen=True)
class Prefactor:
    """prod base^exp, bases positive rationals or -1, exponents in (0, 1)."""

    items: tuple[tuple[mpq, Fraction], ...] = ()

    @staticmethod
    def canon(powers: Mapping) -> tuple["Prefactor", mpq]:
        """Split prod b^e into (rational) * Prefactor."""
        rat = mpq(1)
        acc: dict = {}
        for b, e in powers.items():
            b, e = to_rat(b), Fraction(e)
            if b < 0 and b != -1:
                acc[mpq(-1)] = acc.get(mpq(-1), Fraction(0)) + e
                b = -b
            acc[b] = acc.get(b, Fraction(0)) + e
        items = []
        for b, e in acc.items():
            whole = e.numerator // e.denominator
            frac = e - whole
            rat *= b ** whole
            if not frac:
                continue
            root = _rational_root(b, frac) if b > 0 else None
            if root is not None:
                rat *= root
            else:
                items.append((b, frac))
        return Prefactor(tuple(sorted(items))), rat

    @staticmethod
    def power(b0, alpha: Fraction) -> tuple["Prefactor", mpq]:
        return Prefactor.canon({to_rat(b0): alpha})

    def __mul__(self, other: "Prefactor") -> tuple["Prefactor", mpq]:
        acc: dict = dict(self.items)
        for b, e in other.items:
            acc[b] = acc.get(b, Fraction(0)) + e
        return Prefactor.canon(acc)

    def __pow__(self, alpha: Fraction) -> tuple["Prefactor", mpq]:
        return Prefactor.canon({b: e * alpha for b, e in self.items})

    def __bool__(self):
        return bool(self.items)

    def __str__(self):
        return "*".join(f"({b})^({e})" for b, e in self.items) or "1"


def _rational_root(b: mpq, frac: Fraction) -> mpq | None:
    """b^frac if rational (b > 0)."""
    n = frac.denominator
    num = _int_root(int(b.numerator), n)
    den = _int_root(int(b.denominator), n)
    if num is None or den is None:
        return None
    return mpq(num, den) ** frac.numerator


def _int_root(k: int, n: int) -> int | None:
    r = round(k ** (1.0 / n)) if k < 2 ** 1000 else int(mpmath.root(k, n))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** n == k:
            return c
    return None


# ---------------------------------------------------------------------- expression
class AlgebraicExpr:
    """Expression over rationals and named variables with +, -, *, / and rational powers."""

    def __init__(self, root: Node, text: str = ""):
        self.root = root
        self.text = text

    @classmethod
    def parse(cls, text: str) -> "AlgebraicExpr":
        if not isinstance(text, str) or not text.strip():
            raise ParseError("empty expression")
        try:
            tree = ast.parse(text.strip().replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
        return cls(_Reader().visit(tree), text.strip())

    @classmethod
    def from_ratfunc(cls, rf: RationalFunction | Poly) -> "AlgebraicExpr":
        rf = RationalFunction.lift(rf)
        return cls.parse(str(rf.num) if rf.is_polynomial() else f"({rf.num})/({rf.den})")

    def __str__(self):
        return self.text or "<expr>"

    def __repr__(self):
        return f"AlgebraicExpr({self.text!r})"

    # -- structure
    def variables(self) -> set[str]:
        out: set[str] = set()

        def walk(n: Node):
            if n.op == "var":
                out.add(n.value)
            for a in n.args:
                walk(a)
        walk(self.root)
        return out

    def is_rational(self) -> bool:
        def walk(n: Node) -> bool:
            if n.op == "pow" and n.value.denominator != 1:
                return False
            return all(walk(a) for a in n.args)
        return walk(self.root)

    def substitute(self, mapping: Mapping[str, str | "AlgebraicExpr"]) -> "AlgebraicExpr":
        sub = {k: (v if isinstance(v, AlgebraicExpr) else AlgebraicExpr.parse(str(v))).root
               for k, v in mapping.items()}

        def walk(n: Node) -> Node:
            if n.op == "var" and n.value in sub:
                return sub[n.value]
            if not n.args:
                return n
            return Node(n.op, tuple(walk(a) for a in n.args), n.value)
        return AlgebraicExpr(walk(self.root), "")

    # -- exact
    def to_ratfunc(self) -> RationalFunction:
        if not self.is_rational():
            raise ExprError("expression has fractional powers; no exact rational form")

        def walk(n: Node) -> RationalFunction:
            if n.op == "num":
                return RationalFunction(Poly.constant(n.value))
            if n.op == "var":
                return RationalFunction(Poly.variable(n.value))
            if n.op == "neg":
                return -walk(n.args[0])
            if n.op == "add":
                return walk(n.args[0]) + walk(n.args[1])
            if n.op == "mul":
                return walk(n.args[0]) * walk(n.args[1])
            return walk(n.args[0]) ** int(n.value)
        return walk(self.root)

    # -- series
    def bi_series(self, order: int, xv: str = "x", yv: str = "y") -> tuple[Prefactor, BiSeries]:
        """Expansion around x = y = 0 to total degree ``order``: value = prefactor * series."""

        def walk(n: Node) -> tuple[Prefactor, BiSeries]:
            if n.op == "num":
                return Prefactor(), BiSeries(Poly.constant(n.value), order, xv, yv)
            if n.op == "var":
                return Prefactor(), BiSeries(Poly.variable(n.value), order, xv, yv)
            if n.op == "neg":
                p, s = walk(n.args[0])
                return p, -s
            if n.op == "add":
                (p1, s1), (p2, s2) = walk(n.args[0]), walk(n.args[1])
                if s1.is_zero():
                    return p2, s2
                if s2.is_zero():
                    return p1, s1
                if p1 != p2:
                    raise ExprError(f"cannot add terms with different constant prefactors {p1} and {p2}")
                return p1, s1 + s2
            if n.op == "mul":
                (p1, s1), (p2, s2) = walk(n.args[0]), walk(n.args[1])
                p, r = p1 * p2
                return p, (s1 * s2).scale(r)
            base_p, base = walk(n.args[0])
            alpha: Fraction = n.value
            if alpha.denominator == 1 and alpha >= 0:
                pw, r = _prefactor_pow(base_p, alpha)
                return pw, (base ** int(alpha)).scale(r)
            b0 = base.constant_term()
            if not b0.is_constant() or b0.is_zero():
                raise ExprError(f"base vanishes or is not a rational constant at the origin: {b0}")
            c = b0.constant_value()
            unit = base.scale(1 / c)
            pc, rc = Prefactor.power(c, alpha)
            pb, rb = _prefactor_pow(base_p, alpha)
            p, r = pc * pb
            if alpha.denominator == 1:
                ser = unit.reciprocal() ** int(-alpha)
            else:
                ser = unit.power(mpq(alpha.numerator, alpha.denominator))
            return p, ser.scale(rc * rb * r)

        try:
            return walk(self.root)
        except SeriesError as exc:
            raise ExprError(str(exc)) from None

    # -- numeric
    def evaluate(self, values: Mapping[str, object], dps: int = 60):
        with mpmath.workdps(dps):
            return _eval(self.root, values)


def _prefactor_pow(p: Prefactor, alpha: Fraction) -> tuple[Prefactor, mpq]:
    return p ** alpha


def _eval(n: Node, values):
    if n.op == "num":
        return mpmath.mpf(int(n.value.numerator)) / int(n.value.denominator)
    if n.op == "var":
        v = values[n.value]
        if hasattr(v, "numerator") and not isinstance(v, (mpmath.mpf, float)):
            return mpmath.mpf(int(v.numerator)) / int(v.denominator)
        return mpmath.mpf(v) if not isinstance(v, mpmath.mpc) else v
    if n.op == "neg":
        return -_eval(n.args[0], values)
    if n.op == "add":
        return _eval(n.args[0], values) + _eval(n.args[1], values)
    if n.op == "mul":
        return _eval(n.args[0], values) * _eval(n.args[1], values)
    b = _eval(n.args[0], values)
    a: Fraction = n.value
    if a.denominator == 1:
        return b ** int(a)
    if b < 0 and a.denominator % 2 == 1:
        # real odd root of a negative number
        return (-1) ** a.numerator * mpmath.root(-b, a.denominator) ** a.numerator
    return mpmath.power(b, mpmath.mpf(a.numerator) / a.denominator)


def evaluate_text(text: str, values: Mapping[str, object], dps: int | None = None):
    """Numeric value of an expression text at the current (or given) mpmath precision."""
    e = AlgebraicExpr.parse(text)
    if dps is None:
        return _eval(e.root, values)
    return e.evaluate(values, dps)


__all__ = ["AlgebraicExpr", "Prefactor", "ExprError", "evaluate_text"]
