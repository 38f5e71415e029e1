import pytest
from hypothesis import given, settings, strategies as st
import random

from modcomp.errors import ParseError, SignatureError
from modcomp.formula import Signature, free_vars, quantifier_rank, size, alpha_normalize
from modcomp.randgen import random_formula
from modcomp.syntax import parse, same_up_to_renaming, to_text

SIG = Signature((("E", 2), ("P", 1)), (("f", 1), ("c", 0)), membership="in")


def test_round_trip_simple():
    for text in ["(E x y)", "(forall x (exists y (E x y)))", "(forall-in w x (in w y))",
                 "(= (f x) (c))", "(iff (P x) (not (P x)))", "(-> (P x) (and (P x) (P y)))"]:
        assert to_text(parse(text, SIG)) == text


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_round_trip_random(seed):
    f = random_formula(random.Random(seed), SIG, depth=4)
    assert parse(to_text(f), SIG) == f


def test_error_offset_is_in_bytes():
    with pytest.raises(SignatureError) as e:
        parse("(forall x (F x))", SIG)
    assert e.value.offset == 11
    # a two-byte character before the bad symbol moves the offset by two
    with pytest.raises(ParseError) as e:
        parse("(E é", SIG)
    assert e.value.offset is not None


def test_unbalanced():
    with pytest.raises(ParseError):
        parse("(E x y", SIG)
    with pytest.raises(ParseError):
        parse("(E x y))", SIG)


def test_arity_checked():
    with pytest.raises(SignatureError):
        parse("(E x)", SIG)


def test_free_vars_and_rank():
    f = parse("(and (E x y) (exists z (forall-in w z (E w x))))", SIG)
    assert free_vars(f) == ["x", "y"]
    assert quantifier_rank(f) == 2
    assert size(parse("(E x y)", SIG)) == 1


def test_renaming():
    a = parse("(forall x (E x y))", SIG)
    b = parse("(forall z (E z y))", SIG)
    assert same_up_to_renaming(a, b)
    assert alpha_normalize(a) == alpha_normalize(b)
    assert not same_up_to_renaming(a, parse("(forall z (E y z))", SIG))
