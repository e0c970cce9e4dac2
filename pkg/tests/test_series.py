import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from isochron.algebra.parse import parse_expr
from isochron.algebra.poly import Poly
from isochron.series import BiSeries, PSeries, SeriesError

from strategies import nonzero_rats, small_rats

ORDER = 10
a = Poly.variable("a")


def series_with(draw_coeffs, val):
    return PSeries([0] * val + draw_coeffs, ORDER, "x")


@st.composite
def unit_series(draw):
    """Constant term 1, rational coefficients."""
    return PSeries([1] + [draw(small_rats) for _ in range(ORDER)], ORDER, "x")


@st.composite
def val1_series(draw):
    """Valuation exactly 1."""
    return PSeries([0, draw(nonzero_rats)] + [draw(small_rats) for _ in range(ORDER - 1)], ORDER, "x")


# ---------------------------------------------------------------------- fixed values
def test_exp_log_known_coefficients():
    e = PSeries.identity(6).exp()
    assert [e[k].constant_value() for k in range(7)] == [1, 1, mpq(1, 2), mpq(1, 6), mpq(1, 24), mpq(1, 120),
                                                       mpq(1, 720)]
    lg = PSeries([1, 1], 5).log()
    assert [lg[k].constant_value() for k in range(1, 6)] == [1, mpq(-1, 2), mpq(1, 3), mpq(-1, 4), mpq(1, 5)]


def test_from_ratfunc_geometric():
    s = PSeries.from_ratfunc(parse_expr("1/(1 - a*x)"), "x", 5)
    for k in range(6):
        assert s[k] == a ** k


def test_symbolic_coefficients_survive_reversion():
    s = PSeries([0, 1, a], 6)
    r = s.revert()
    assert s.compose(r).agrees_with(PSeries.identity(6), 6)
    assert r[2] == -a and r[3] == a * a * 2


def test_errors():
    with pytest.raises(SeriesError):
        PSeries([1, 1], 4).revert()
    with pytest.raises(SeriesError):
        PSeries([0, 0, 2], 4).sqrt_valuation2()       # 2 is not a rational square
    with pytest.raises(SeriesError):
        PSeries([1, 1], 4).exp()
    with pytest.raises(SeriesError):
        PSeries([0, 1], 3)[5]
    with pytest.raises(SeriesError):
        PSeries([1], 3, "x") + PSeries([1], 3, "y")


def test_bi_series_truncation():
    x, y = Poly.variables("x", "y")
    s = BiSeries(x + y, 3)
    assert (s ** 4).is_zero()
    assert (s ** 3).poly == (x + y) ** 3
    assert BiSeries(x * y + x ** 2, 4).low_degree() == 2


# ---------------------------------------------------------------------- properties
@given(val1_series())
def test_reversion_is_two_sided_inverse(s):
    r = s.revert()
    ident = PSeries.identity(ORDER)
    assert s.compose(r).agrees_with(ident, ORDER)
    assert r.compose(s).agrees_with(ident, ORDER)


@given(val1_series(), val1_series(), val1_series())
def test_composition_is_associative(f, g, h):
    assert f.compose(g).compose(h).agrees_with(f.compose(g.compose(h)), ORDER)


@given(unit_series(), unit_series())
def test_reciprocal_and_division(u, v):
    assert (u * u.reciprocal()).agrees_with(PSeries([1], ORDER), ORDER)
    assert ((u / v) * v).agrees_with(u, ORDER)


@given(unit_series(), st.integers(-4, 4).filter(bool), st.integers(1, 4))
def test_rational_powers_compose(u, p, q):
    r = u.power(mpq(p, q))
    assert (r ** q).agrees_with(u ** p, ORDER)


@given(st.lists(small_rats, min_size=ORDER, max_size=ORDER), st.integers(1, 5), st.integers(1, 4))
def test_sqrt_square_back(tail, num, den):
    # X = x*(c + ...) with c > 0 rational; squaring and taking the positive root gives X back
    c = mpq(num, den)
    X = PSeries([0, c] + tail[: ORDER - 1], ORDER)
    back = (X * X).sqrt_valuation2()
    assert back.order == ORDER - 1          # the square root loses one order
    assert back.agrees_with(X, ORDER - 1)


@given(val1_series().filter(lambda s: s[1].constant_value() > 0))
def test_sqrt_of_square_is_positive_branch(s):
    root = (s * s).sqrt_valuation2()
    assert root[1].constant_value() > 0


@given(unit_series())
def test_exp_log_inverse(u):
    assert u.log().exp().agrees_with(u, ORDER)


@given(val1_series(), val1_series())
def test_chain_rule(f, g):
    lhs = f.compose(g).differentiate()
    rhs = f.differentiate().compose(g) * g.differentiate()
    assert lhs.agrees_with(rhs, ORDER - 2)


@given(unit_series())
def test_integrate_then_differentiate(u):
    assert u.integrate().differentiate().agrees_with(u, ORDER)
