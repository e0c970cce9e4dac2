"""Parse the canonical polynomial text form (and rational expressions) via ``ast``.

Accepted grammar: integers, names, ``+ - * /``, ``^`` or ``**`` with integer
exponents, parentheses, and ``sqrt(n)`` for integer n when radicals are
allowed.  ``sqrt(n)`` becomes the symbol ``sqrt<d>`` (d square-free); the
caller reduces it with :func:`reduce_radicals`.
"""

from __future__ import annotations

import ast

from gmpy2 import mpq

from .numbers import is_squarefree, split_square
from .poly import Poly
from .ratfunc import RationalFunction


class ParseError(ValueError):
    pass


def radical_name(d: int) -> str:
    return f"sqrt{d}"


class _Builder(ast.NodeVisitor):
    def __init__(self, allow_radicals: bool):
        self.allow_radicals = allow_radicals
        self.radicals: set[int] = set()

    def generic_visit(self, node):
        raise ParseError(f"unsupported syntax: {ast.dump(node)[:60]}")

    def visit_Expression(self, node):
        return self.visit(node.body)

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ParseError(f"only integer literals are exact: {node.value!r}")
        return RationalFunction(Poly.constant(node.value))

    def visit_Name(self, node):
        return RationalFunction(Poly.variable(node.id))

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        raise ParseError("unsupported unary operator")

    def visit_BinOp(self, node):
        if isinstance(node.op, ast.Pow):
            k = _int_literal(node.right)
            return self.visit(node.left) ** k
        a, b = self.visit(node.left), self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
        raise ParseError("unsupported binary operator")

    def visit_Call(self, node):
        if not (isinstance(node.func, ast.Name) and node.func.id == "sqrt" and len(node.args) == 1):
            raise ParseError("only sqrt(<integer>) calls are supported")
        if not self.allow_radicals:
            raise ParseError("radicals are not allowed here")
        n = _int_literal(node.args[0])
        if n < 0:
            raise ParseError("sqrt of a negative integer")
        k, d = split_square(n)
        if d == 1:
            return RationalFunction(Poly.constant(k))
        self.radicals.add(d)
        return RationalFunction(Poly.variable(radical_name(d)).scale(k))


def _int_literal(node) -> int:
    sign = 1
    while isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        if isinstance(node.op, ast.USub):
            sign = -sign
        node = node.operand
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return sign * node.value
    raise ParseError("exponent/argument must be an integer literal")


def _tree(text: str):
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression")
    try:
        return ast.parse(text.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg} at column {exc.offset}") from None


def parse_expr(text: str, allow_radicals: bool = False) -> RationalFunction:
    return _Builder(allow_radicals).visit(_tree(text))


def parse_expr_with_radicals(text: str) -> tuple[RationalFunction, set[int]]:
    b = _Builder(True)
    return b.visit(_tree(text)), b.radicals


def parse_poly(text: str) -> Poly:
    rf = parse_expr(text)
    if not rf.is_polynomial():
        raise ParseError(f"not a polynomial: {text!r}")
    return rf.num.trim()


def reduce_radicals(p: Poly, radicals) -> Poly:
    """Rewrite sqrt<d>^k as d^(k//2) * sqrt<d>^(k%2) for every d in ``radicals``."""
    for d in radicals:
        if not is_squarefree(d):
            raise ValueError(f"radicand {d} is not square-free")
        name = radical_name(d)
        if name not in p.vars:
            continue
        out = Poly.constant(0)
        r = Poly.variable(name)
        for k, c in p.coefficients_in(name).items():
            out = out + c.scale(mpq(d) ** (k // 2)) * (r if k % 2 else 1)
        p = out
    return p
