import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from modcomp.corpus import CORPUS, IS_SINGLETON, KURATOWSKI, SUBSET
from modcomp.errors import TranslationError
from modcomp.formula import Signature, desugar_bounded, free_vars, size
from modcomp.normal import levy_levels
from modcomp.randgen import random_formula
from modcomp.syntax import parse, to_text
from modcomp.tensor_eval import evaluate, to_dense
from modcomp.translator import (
    NONCODE, CodeStructure, build_code_structure, check_universal_form, classification_shift,
    code_atom_table, expand_definitions, is_guarded, naive_code_eval, translate, universal_form,
    verify_translation,
)

SET_SIG = Signature(membership="in")


def rand_set_formula(seed, depth=3):
    return random_formula(random.Random(seed), SET_SIG, depth=depth, names=["x", "y"])


def test_translation_text():
    assert to_text(translate(parse("(= x y)"))) == "(and (WFE x) (and (WFE y) (EQ x y)))"
    assert to_text(translate(parse("(exists y (in y x))"))) == \
        "(exists y (and (and (WFE y) (and (WFE x) (MEM y x))) (WFE y)))"
    assert to_text(translate(parse("(forall y (in y x))"))).startswith("(forall y (-> (WFE y)")
    with pytest.raises(TranslationError):
        translate(parse("(E x y)"))


def test_code_structure_counts():
    assert [len(CodeStructure(m).classes()) for m in (1, 2, 3)] == [2, 16, 273]
    assert len(build_code_structure(2).codes()) == 2


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_translation_is_guarded_and_linear(seed):
    f = rand_set_formula(seed, 4)
    theta = translate(f)
    assert is_guarded(theta)
    assert size(theta) <= 5 * size(desugar_bounded(f))
    assert set(free_vars(theta)) == set(free_vars(desugar_bounded(f)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_random_translations_verify(seed):
    f = rand_set_formula(seed)
    assert verify_translation(f, 2).passed
    assert verify_translation(f, 3, semantics="guarded", full_universe=False).passed


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_exact_and_guarded_agree(seed):
    f = rand_set_formula(seed, 2)
    a = verify_translation(f, 2, semantics="exact", full_universe=False)
    b = verify_translation(f, 2, semantics="guarded", full_universe=False)
    assert a.passed == b.passed


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_vectorized_matches_naive(seed):
    theta = translate(rand_set_formula(seed, 2))
    S = CodeStructure(2)
    dom = S.classes()
    xs = free_vars(theta)
    table = to_dense(evaluate(theta, {x: dom for x in xs}, code_atom_table, dom), xs)
    for t in product(range(len(dom)), repeat=len(xs)):
        env = {x: dom[i] for x, i in zip(xs, t)}
        want = naive_code_eval(theta, S, env, dom)
        assert bool(table[t] if xs else table) == want


def test_guarded_domain_includes_noncode():
    theta = translate(parse(IS_SINGLETON), "drop-exists-guard")
    assert not is_guarded(theta)
    S = CodeStructure(2)
    x = S.codes()[0]
    assert naive_code_eval(translate(parse(IS_SINGLETON)), S, {"x": x}, S.codes() + [NONCODE]) is False


def test_corpus_small_cases():
    for name, text, m, dom in CORPUS:
        if m <= 3:
            assert verify_translation(parse(text), m).passed, name


def test_mutants_fail():
    r = verify_translation(parse("(= x y)"), 3, mutation="drop-eq-guards")
    assert not r.passed and r.counterexample is not None
    r = verify_translation(parse(IS_SINGLETON), 3, mutation="drop-exists-guard")
    assert not r.passed


def test_classification_shift_on_corpus():
    for name, text, m, dom in CORPUS:
        f = parse(text)
        s = classification_shift(f)
        sig, pi = s["source"]
        assert s["translation"] == (max(sig, 1) + 1, max(pi, 1) + 1), name
    assert levy_levels(expand_definitions(translate(parse(KURATOWSKI))))[0] == 3


def test_universal_form():
    f = parse("(exists y (in y x))")
    assert to_text(universal_form(f)) == "(forall r (-> (Cod r x) (Theta_f r)))"
    r = check_universal_form(f, 3)
    assert r["passed"] and r["theta_extension_size"] == 5
    assert check_universal_form(parse(SUBSET), 3)["passed"]
    with pytest.raises(TranslationError):
        universal_form(parse("(forall y (exists z (in z y)))"))


def test_full_universe_with_unused_variable():
    # y does not occur in the true disjunct, so a non-code y is harmless
    r = verify_translation(parse("(or (= x x) (in x y))"), 2, full_universe=True)
    assert r.passed and r.full_universe
