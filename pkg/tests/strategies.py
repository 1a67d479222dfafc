"""Hypothesis strategies shared by the test modules."""
import itertools
from fractions import Fraction

from hypothesis import strategies as st

from exact import LinForm, MPoly
from wgraph import WeightedGraph

NAMES = ("z", "x1", "x2")

SMALL_POOL = (frozenset(), frozenset({Fraction(0)}), frozenset({Fraction(1)}),
              frozenset({Fraction(0), Fraction(1)}))

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)
nonzero_rationals = rationals.filter(lambda q: q != 0)


@st.composite
def polys(draw, names=NAMES, max_terms=4, max_exponent=2):
    monomial = st.tuples(*[st.integers(min_value=0, max_value=max_exponent) for _ in names])
    terms = draw(st.dictionaries(monomial, nonzero_rationals, max_size=max_terms))
    return MPoly(names, terms)


@st.composite
def linforms(draw, names=NAMES):
    coeffs = draw(st.lists(rationals, min_size=len(names), max_size=len(names)).filter(any))
    return LinForm.of(names, coeffs)


@st.composite
def points(draw, names=NAMES):
    return tuple(draw(st.lists(rationals, min_size=len(names), max_size=len(names))))


@st.composite
def weighted_graphs(draw, max_vertices=5, pool=SMALL_POOL):
    n = draw(st.integers(min_value=1, max_value=max_vertices))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    edges = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    psi = draw(st.lists(st.sampled_from(pool), min_size=n, max_size=n))
    return WeightedGraph(n, frozenset(edges), tuple(psi))


@st.composite
def int_weighted_graphs(draw, max_vertices=4, max_weight=3):
    n = draw(st.integers(min_value=1, max_value=max_vertices))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    edges = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    psi = draw(st.lists(st.integers(min_value=0, max_value=max_weight), min_size=n, max_size=n))
    return WeightedGraph(n, frozenset(edges), tuple(psi))
