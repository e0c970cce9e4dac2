"""Shared hypothesis strategies."""

from gmpy2 import mpq
from hypothesis import strategies as st

from isochron.algebra.poly import Poly

small_rats = st.builds(lambda n, d: mpq(n, d), st.integers(-6, 6), st.integers(1, 5))
nonzero_rats = small_rats.filter(lambda q: q != 0)


@st.composite
def polys(draw, vars=("x", "y", "z"), max_terms=5, max_exp=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        ex = tuple(draw(st.integers(0, max_exp)) for _ in vars)
        terms[ex] = draw(nonzero_rats)
    return Poly.from_terms(terms, vars).trim()


@st.composite
def upolys(draw, max_deg=6):
    deg = draw(st.integers(1, max_deg))
    c = [draw(small_rats) for _ in range(deg)] + [draw(nonzero_rats)]
    return c
