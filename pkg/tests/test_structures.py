import random
from itertools import permutations, product

import pytest
from hypothesis import given, settings, strategies as st

from modcomp.classes import GRAPH_SIG
from modcomp.extension import extension, holds
from modcomp.formula import Signature, free_vars
from modcomp.morley import morleyize
from modcomp.randgen import random_formula, random_structure
from modcomp.structures import (
    FinStructure, atomic_diagram, definable_set, enumerate_embeddings, expand_morley, graph,
    is_embedding, models, satisfies, with_constants,
)
from modcomp.syntax import parse

SIG = Signature((("E", 2),), (("f", 1),), membership="in")


def brute_embeddings(M, N):
    return [p for p in permutations(range(N.size), M.size) if is_embedding(M, N, p)]


def test_path_and_triangle():
    P3 = graph(3, [(0, 1), (1, 2)])
    K3 = graph(3, [(0, 1), (1, 2), (0, 2)])
    f = parse("(forall x (forall y (or (= x y) (E x y))))")
    assert not satisfies(P3, f) and satisfies(K3, f)
    assert definable_set(P3, parse("(exists y (exists z (and (E x y) (E x z) (not (= y z)))))"), ["x"]) == [(1,)]


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_two_evaluators_agree(seed):
    rng = random.Random(seed)
    f = random_formula(rng, SIG, depth=3, names=["x", "y"])
    M = random_structure(rng, SIG, rng.randint(1, 3))
    xs = free_vars(f)
    ext = extension(M, f, xs)
    for t in product(range(M.size), repeat=len(xs)):
        a = dict(zip(xs, t))
        assert (t in ext) == satisfies(M, f, a) == holds(M, f, a)


def test_embeddings_match_brute_force():
    rng = random.Random(3)
    for _ in range(30):
        M = random_structure(rng, GRAPH_SIG, rng.randint(1, 3), 0.5)
        N = random_structure(rng, GRAPH_SIG, rng.randint(1, 4), 0.5)
        got = [e.map for e in enumerate_embeddings(M, N)]
        want = brute_embeddings(M, N)
        assert got == sorted(want)


def test_embedding_composition():
    rng = random.Random(5)
    A = graph(2, [(0, 1), (1, 0)])
    B = graph(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
    C = graph(4, [(a, b) for a in range(4) for b in range(4) if a != b])
    for e in enumerate_embeddings(A, B):
        for g in enumerate_embeddings(B, C):
            h = e.compose(g)
            assert is_embedding(A, C, h.map)


def test_diagram_holds_exactly_along_embeddings():
    M = graph(2, [(0, 1), (1, 0)])
    N = graph(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
    diagram = atomic_diagram(M)
    for m in product(range(3), repeat=2):
        ok = models(with_constants(N, m), diagram)
        assert ok == is_embedding(M, N, m)


def test_morley_expansion_satisfies_axioms():
    M = graph(3, [(0, 1), (1, 0)])
    phi = parse("(exists y (E x y))", GRAPH_SIG)
    psi = parse("(and (E x y) (not (= x y)))", GRAPH_SIG)
    mr = morleyize(GRAPH_SIG, [(phi, "relation"), (psi, "skolem")])
    X = expand_morley(M, mr)
    assert models(X, mr.axioms)
    assert X.relations["R_0"] == {(0,), (1,)}
    assert X.functions["f_1"][(2,)] == 2


def test_json_round_trip():
    M = random_structure(random.Random(1), SIG, 3)
    assert FinStructure.from_json(SIG, M.to_json()) == M


def test_bad_function_table():
    with pytest.raises(Exception):
        FinStructure(SIG, 2, {}, {"f": {(0,): 5}})
