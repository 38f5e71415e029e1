import random
from itertools import product

from hypothesis import given, settings, strategies as st

from modcomp.classes import GRAPH_SIG, builtin
from modcomp.corpus import KURATOWSKI
from modcomp.enumerate import enumerate_structures
from modcomp.formula import Not, free_vars
from modcomp.normal import LevyClass, levy_classify, levy_levels, prenex_parts, to_prenex
from modcomp.randgen import random_formula
from modcomp.structures import satisfies
from modcomp.syntax import parse, to_text

GRAPHS = enumerate_structures(GRAPH_SIG, 3, builtin("graphs")[1])


def test_examples():
    f = parse("(and (forall x (P x)) (exists y (Q y)))")
    assert to_text(to_prenex(f)) == "(forall x (exists y (and (P x) (Q y))))"
    assert str(levy_classify(parse(KURATOWSKI))) == "Sigma(2)"
    assert str(levy_classify(parse("(forall x (exists y (E x y)))"))) == "Pi(2)"
    assert str(levy_classify(parse("(forall-in w x (exists-in v w (in v y)))"))) == "Delta0"


def test_bounded_over_unbounded_is_expanded():
    f = parse("(forall-in w x (exists v (in v w)))")
    assert str(levy_classify(f)) == "Pi(2)"


def test_levy_class_text():
    for t in ["Delta0", "Sigma(1)", "Pi(3)"]:
        assert str(LevyClass.parse(t)) == t
    assert str(LevyClass("Sigma", 0)) == "Delta0"


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**6))
def test_prenex_preserves_truth_on_small_graphs(seed):
    f = random_formula(random.Random(seed), GRAPH_SIG, depth=3)
    g = to_prenex(f)
    prefix, _ = prenex_parts(f)
    xs = free_vars(f)
    assert set(free_vars(g)) <= set(xs)
    for M in GRAPHS:
        for t in product(range(M.size), repeat=len(xs)):
            a = dict(zip(xs, t))
            assert satisfies(M, f, a) == satisfies(M, g, a)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**6))
def test_negation_swaps_levels(seed):
    f = random_formula(random.Random(seed), GRAPH_SIG, depth=3)
    s, p = levy_levels(f)
    assert levy_levels(Not(f)) == (p, s)
    assert levy_classify(Not(Not(f))) == levy_classify(f)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_prenex_is_a_fixed_point(seed):
    f = random_formula(random.Random(seed), GRAPH_SIG, depth=3)
    c = levy_classify(f)
    assert levy_classify(to_prenex(f)) == c
    s, p = levy_levels(f)
    if c.kind != "Delta0":
        assert c.n == min(s, p)
