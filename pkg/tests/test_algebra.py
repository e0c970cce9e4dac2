import math

import pytest
from gmpy2 import mpq
from hypothesis import example, given, strategies as st

from isochron.algebra.numbers import QuadExt, rat_str, rational_sqrt, split_square, to_rat
from isochron.algebra.orders import WeightedOrder, sort_vars
from isochron.algebra.parse import ParseError, parse_expr, parse_expr_with_radicals, parse_poly, reduce_radicals
from isochron.algebra.poly import Poly
from isochron.algebra.ratfunc import RationalFunction
from isochron.algebra.sturm import UPoly, exact_real_roots, gcd, isolate_real_roots, squarefree_part, sturm_real_roots

from strategies import polys, small_rats, upolys

x, y, z = Poly.variables("x", "y", "z")


# ---------------------------------------------------------------------- numbers
def test_to_rat_accepts_text_and_rejects_floats():
    assert to_rat("3/4") == mpq(3, 4)
    assert to_rat(5) == 5
    with pytest.raises((TypeError, ValueError)):
        to_rat(0.1)


def test_rat_str_round_trip():
    for q in (mpq(0), mpq(-7, 3), mpq(12)):
        assert to_rat(rat_str(q)) == q


def test_split_square_and_rational_sqrt():
    assert split_square(72) == (6, 2)
    assert rational_sqrt(mpq(9, 4)) == mpq(3, 2)
    assert rational_sqrt(mpq(2)) is None


def test_quadext_arithmetic_and_sign():
    r = QuadExt.sqrt(33)
    assert r * r == 33
    a = (9 - r) / 48
    assert (a * 48 + r) == 9
    assert QuadExt(6, -1, 33).sign() == 1          # 6 > sqrt(33)
    assert QuadExt(5, -1, 33).sign() == -1
    assert QuadExt(1, 1, 2).inverse() * QuadExt(1, 1, 2) == 1
    with pytest.raises(ValueError):
        QuadExt(1, 1, 4)


@given(small_rats, small_rats, small_rats, small_rats)
def test_quadext_field_laws(a, b, c, d):
    u, v = QuadExt(a, b, 5), QuadExt(c, d, 5)
    assert u * v == v * u
    assert (u + v) * u == u * u + v * u
    if not v.is_zero():
        assert (u / v) * v == u
    assert float(u.to_mpmath()) == pytest.approx(float(a) + float(b) * math.sqrt(5), abs=1e-12)


# ---------------------------------------------------------------------- polynomials
def test_poly_basic_ops():
    p = (x + y) ** 2
    assert p == x * x + y * y + x * y * 2
    assert p.diff("x") == (x + y) * 2
    assert p.subs({"y": 1}) == x * x + x * 2 + 1
    assert p.degree() == 2 and p.degree("x") == 2
    assert (p - p).is_zero()
    assert Poly.constant(3).constant_value() == 3


def test_weighted_degree():
    p = x * x + y
    wd = p.weighted_degree({"x": 1, "y": 2})
    assert wd.homogeneous and wd.degree == 2
    assert not (x + y).weighted_degree({"x": 1, "y": 2}).homogeneous


def test_primitive_normalizes_content_and_sign():
    p = (x * mpq(-2, 3) + y * mpq(4, 9))
    q, s = p.primitive()
    assert q.scale(s) == p
    assert all(c.denominator == 1 for c in q.terms.values())
    assert q.leading_coefficient() > 0


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert (a - a).is_zero()


@given(polys(), polys())
def test_leibniz_rule(a, b):
    assert (a * b).diff("x") == a.diff("x") * b + a * b.diff("x")


@given(polys(), small_rats, small_rats)
def test_evaluate_matches_substitution(p, u, v):
    val = p.evaluate({"x": u, "y": v, "z": 1})
    assert val == p.subs({"x": u, "y": v, "z": 1}).constant_value()


@given(polys())
def test_to_str_parses_back(p):
    assert parse_poly(str(p)) == p


# ---------------------------------------------------------------------- orders
def test_sort_vars_is_natural():
    assert sort_vars(["a_10_0", "a_2_0", "a1"]) == ("a1", "a_2_0", "a_10_0")


def test_order_descriptor_round_trip():
    o = WeightedOrder.make("weighted-degrevlex", {"a": 2, "b": 1}, variables=["b", "a"])
    assert WeightedOrder.from_descriptor(o.descriptor()) == o


def test_order_rejects_bad_input():
    with pytest.raises(ValueError):
        WeightedOrder.make("grlex")
    with pytest.raises(ValueError):
        WeightedOrder.make("weighted-degrevlex", {"a": 0})


def test_weighted_degrevlex_prefers_weight():
    o = WeightedOrder.make("weighted-degrevlex", {"x": 1, "y": 3})
    ex, _ = (x * x + y).leading_term(o)
    assert ex == (0, 1)
    ex, _ = (x * x + y).leading_term(WeightedOrder.make("degrevlex"))
    assert ex == (2, 0)


# ---------------------------------------------------------------------- parsing
def test_parse_rational_function():
    rf = parse_expr("(x^2 - 1)/(x - 1)")
    assert isinstance(rf, RationalFunction)
    assert (rf - RationalFunction(x + 1)).is_zero()
    assert parse_expr("x^2/2 + 1").is_polynomial()


def test_parse_errors_are_reported():
    for bad in ("x +", "import os", "x**y", "foo(x)"):
        with pytest.raises(ParseError):
            parse_expr(bad)
    with pytest.raises(ParseError):
        parse_poly("1/x")


def test_radicals_reduce():
    rf, rads = parse_expr_with_radicals("(1 + sqrt(33))^2")
    assert rads == {33}
    p = reduce_radicals(rf.num, rads)
    assert p.degree() == 1           # 34 + 2 sqrt(33)


# ---------------------------------------------------------------------- Sturm
def _sampled_roots(c, lo=-20, hi=20, n=40001):
    """Sign-change count on a fine grid; a weak but independent oracle."""
    def val(t):
        return sum(ci * t ** k for k, ci in enumerate(c))
    xs = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    vs = [val(mpq(int(round(t * 1000)), 1000)) for t in xs]
    # the interval is open, so exact zeros at the two ends do not count
    return sum(1 for a, b in zip(vs, vs[1:]) if a * b < 0) + sum(1 for v in vs[1:-1] if v == 0)


def test_sturm_simple_cases():
    assert sturm_real_roots(UPoly([-2, 0, 1])) == 2
    assert sturm_real_roots(UPoly([1, 0, 1])) == 0
    assert sturm_real_roots(UPoly([0, 0, 1]), -1, 1) == 1
    assert sturm_real_roots(UPoly([-1, 1]), 0, 1) == 0       # root at the excluded right end
    assert sturm_real_roots(UPoly([-1, 1]), 0, 2) == 1


@given(st.lists(st.integers(-9, 9).filter(bool), min_size=1, max_size=5, unique=True))
def test_sturm_matches_product_of_linear_factors(roots):
    # distinct integer roots: Sturm must count each exactly once
    q = Poly.constant(1)
    for r in roots:
        q = q * (x - r)
    assert sturm_real_roots(q) == len(roots)
    assert sturm_real_roots(q * q) == len(roots)
    assert sturm_real_roots(q, 0, None) == sum(1 for r in roots if r > 0)


@given(upolys(max_deg=5))
@example([mpq(4), mpq(1, 5)])       # root exactly at the left end
def test_sturm_vs_sampling_oracle(c):
    p = UPoly(c)
    n = sturm_real_roots(p, -20, 20)
    # intervals from bisection agree with the count
    assert len([iv for iv in isolate_real_roots(p, mpq(1, 8)) if -20 < iv[0] and iv[1] < 20]) <= n
    # grid sampling can miss close or multiple roots, never invent them
    assert _sampled_roots(c, n=2001) <= n


def test_exact_real_roots_rational_and_quadratic():
    roots, rest = exact_real_roots((x * x - 2) * (x * 3 - 1))
    assert rest.degree <= 0
    vals = sorted(float(r.to_mpmath()) if isinstance(r, QuadExt) else float(r) for r in roots)
    assert vals == pytest.approx([-math.sqrt(2), 1 / 3, math.sqrt(2)])


def test_gcd_and_squarefree():
    a = UPoly.from_poly((x - 1) ** 2 * (x + 2))
    b = UPoly.from_poly((x - 1) * (x - 3))
    assert gcd(a, b).monic().c == [-1, 1]
    assert squarefree_part(a).degree == 2
