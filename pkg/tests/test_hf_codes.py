import random

import pytest
from hypothesis import given, settings, strategies as st

from modcomp.codes import (
    PointedCode, check_wfe, collapse, collapse_all, encode, enumerate_codes, graph_mem,
    graphs_equal, is_wfe, pointed_isomorphic, quotient_check, subcode,
)
from modcomp.errors import GuardExceeded, ParseError
from modcomp.hf import (
    EMPTY, HFSet, ackermann, ackermann_decode, hf_eval, hf_universe, parse_literal, rank,
    tc_size, to_literal, transitive_closure,
)
from modcomp.syntax import parse

codes_below = st.integers(0, 2**16 - 1).map(ackermann_decode)


def test_literals():
    a = parse_literal("{{},{{}}}")
    assert ackermann(a) == 3 and to_literal(a) == "{{},{{}}}"
    assert parse_literal("{{{}},{}}") == a
    assert to_literal(EMPTY) == "{}"
    with pytest.raises(ParseError):
        parse_literal("{{}")


def test_universe_sizes():
    assert [len(hf_universe(k)) for k in range(5)] == [0, 1, 2, 4, 16]
    assert [a.code for a in hf_universe(4)] == list(range(16))


def test_decode_guard():
    with pytest.raises(GuardExceeded):
        ackermann_decode(1 << 70000)


@settings(max_examples=200, deadline=None)
@given(codes_below)
def test_encode_collapse_round_trip(a):
    c = encode(a)
    assert is_wfe(c)
    assert collapse(c) == a
    assert c.domain == tc_size(a) + 1
    assert encode(collapse(c)) == c or encode(collapse(c)).rel == c.rel


@settings(max_examples=150, deadline=None)
@given(codes_below)
def test_tc_and_rank(a):
    tc = transitive_closure(a)
    assert all(b in tc for b in a)
    assert all(c in tc for b in tc for c in b)
    assert rank(a) == (0 if not len(a) else 1 + max(rank(b) for b in a))


@settings(max_examples=100, deadline=None)
@given(codes_below)
def test_subcodes_are_members_collapse(a):
    c = encode(a)
    sets = collapse_all(c)
    for alpha in range(c.domain):
        assert collapse(subcode(c, alpha)) == sets[alpha]
    for u, v in c.rel:
        if v == 0:
            assert graph_mem(subcode(c, u), c)


@settings(max_examples=100, deadline=None)
@given(codes_below, st.randoms(use_true_random=False))
def test_relabelling_keeps_the_set(a, rnd):
    c = encode(a)
    perm = [0] + rnd.sample(range(1, c.domain), c.domain - 1)
    d = PointedCode(c.domain, [(perm[u], perm[v]) for u, v in c.rel])
    assert is_wfe(d)
    assert pointed_isomorphic(c, d)
    assert graphs_equal(c, d, "collapse") and graphs_equal(c, d, "iso")


def test_wfe_reasons():
    assert check_wfe(PointedCode(2, [(1, 0)])) == (True, "ok")
    assert check_wfe(PointedCode(2, [(1, 5)]))[1].startswith("range")
    assert check_wfe(PointedCode(3, [(1, 0)]))[1].startswith("junk")
    assert check_wfe(PointedCode(3, [(1, 0), (2, 1), (1, 2)]))[1] == "cycle"
    assert check_wfe(PointedCode(2, [(0, 1)]))[1] == "top has a successor"
    assert check_wfe(PointedCode(3, [(1, 0), (2, 0), (1, 2)]))[0]
    assert check_wfe(PointedCode(4, [(1, 0), (2, 0), (3, 1), (3, 2)]))[1].startswith("extensionality")


def test_code_counts():
    assert [len(enumerate_codes(m)) for m in (1, 2, 3, 4)] == [1, 2, 6, 54]


def test_quotient_small():
    r = quotient_check(3)
    assert r.ok and [to_literal(a) for a in r.classes] == ["{}", "{{}}", "{{{}}}", "{{},{{}}}"]
    with pytest.raises(ValueError):
        quotient_check(4, 3)


def test_hf_eval():
    f = parse("(forall-in w x (in w y))")
    a, b = parse_literal("{{}}"), parse_literal("{{},{{}}}")
    assert hf_eval(f, 3, {"x": a, "y": b})
    assert not hf_eval(f, 3, {"x": b, "y": a})
    assert hf_eval(parse("(exists y (in y x))"), 3, {"x": a})
