import random
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from modcomp.classes import GRAPH_SIG, builtin
from modcomp.elementary import is_elementary_up_to
from modcomp.engine import (
    build_class, check_model_complete_bounded, ec_models, find_universal_equivalent,
    is_ec_in_class, morleyize_class, pi1_separator,
)
from modcomp.enumerate import canonical_form, enumerate_structures
from modcomp.normal import LevyClass
from modcomp.randgen import random_structure
from modcomp.structures import graph, satisfies
from modcomp.syntax import parse, to_text


SIGMA1 = LevyClass("Sigma", 1)


def cls(name, n):
    sig, ax = builtin(name)
    return build_class(sig, ax, n)


@pytest.fixture(scope="module")
def graphs3():
    return cls("graphs", 3)


def test_enumeration_counts():
    sig, ax = builtin("graphs")
    assert len(enumerate_structures(sig, 3, ax)) == 7
    assert len(enumerate_structures(sig, 3, ax, min_size=3)) == 4
    assert len(enumerate_structures(sig, 5, ax)) == 52
    assert len(cls("triangle-free", 5).models) == 27
    assert len(cls("linear-orders", 4).models) == 4
    assert len(cls("equality", 4).models) == 4


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_canonical_form_ignores_labels(seed):
    rng = random.Random(seed)
    M = random_structure(rng, GRAPH_SIG, rng.randint(1, 4), 0.5)
    perm = list(range(M.size))
    rng.shuffle(perm)
    assert canonical_form(M.relabel(perm)) == canonical_form(M)


def test_enumerated_models_pairwise_non_isomorphic(graphs3):
    for i, A in enumerate(graphs3.models):
        for B in graphs3.models[i + 1:]:
            if A.size == B.size:
                assert all(A.relabel(p) != B for p in permutations(range(A.size)))


def test_elementarity_witnesses():
    K2 = graph(2, [(0, 1), (1, 0)])
    P3 = graph(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
    r = is_elementary_up_to(K2, P3, (0, 1), SIGMA1, 1)
    assert r.verdict == "refuted"
    assert to_text(r.witness) == "(exists y (and (not (= y x)) (not (E x y))))"
    assert r.assignment == {"x": 0}
    E1, E2 = graph(1, []), graph(2, [])
    r = is_elementary_up_to(E1, E2, (0,), SIGMA1, 1)
    assert to_text(r.witness) == "(exists y (not (= y x)))"
    K3 = graph(3, [(a, b) for a in range(3) for b in range(3) if a != b])
    assert is_elementary_up_to(K2, K3, (0, 1), SIGMA1, 1).verdict == "refuted"


def test_ec_reports(graphs3):
    reports = ec_models(graphs3, 1)
    assert [r.verdict for r in reports] == ["refuted"] * 3 + ["boundary-vacuous"] * 4
    assert to_text(reports[0].witness) == "(exists y (E x y))"
    k2 = reports[1]
    assert 5 in k2.refuting_extensions
    # every witness re-evaluates as claimed
    for r in reports[:3]:
        M, N = graphs3.models[r.index], graphs3.models[r.extension]
        b = {k: r.embedding[v] for k, v in r.parameters.items()}
        assert satisfies(N, r.witness, b) and not satisfies(M, r.witness, r.parameters)


def test_parallel_matches_serial(graphs3):
    a = [r.to_json() for r in ec_models(graphs3, 1, jobs=1)]
    b = [r.to_json() for r in ec_models(graphs3, 1, jobs=3)]
    assert a == b


def test_monotone_in_qrank(graphs3):
    one = {r.index for r in ec_models(graphs3, 1) if r.verdict == "refuted"}
    two = {r.index for r in ec_models(graphs3, 2) if r.verdict == "refuted"}
    assert one <= two


def test_robinson(graphs3):
    assert not check_model_complete_bounded(graphs3, 1).passed
    mr, C = morleyize_class(graphs3)
    assert len(mr.symbols) == 19
    assert check_model_complete_bounded(C, 1).passed
    eq = cls("equality", 2)
    r = check_model_complete_bounded(eq, 1)
    assert to_text(r.counterexample.witness) == "(exists y (not (= y x)))"


def test_separation():
    cliques = cls("cliques", 3)
    r = pi1_separator(cliques, cls("nonedge-graphs", 3), 2, 2)
    assert to_text(r.separator) == "(forall x (forall y (or (= x y) (E x y))))"
    r = pi1_separator(cliques, cls("triangle-free", 3), 2, 2)
    assert r.status == "none" and r.embedding == {"source": 0, "target": 0, "map": [0]}
    assert pi1_separator(cliques, cliques, 2, 2).status == "none"


def test_universal_equivalent():
    phi = parse("(exists y (E x y))", GRAPH_SIG)
    assert to_text(find_universal_equivalent(phi, cls("cliques2", 3), 1)) == "(= x x)"
    assert find_universal_equivalent(phi, cls("graphs", 3), 1) is None


def test_ec_boundary_and_index(graphs3):
    K3 = graphs3.models[-1]
    assert is_ec_in_class(K3, graphs3, 1).verdict == "boundary-vacuous"
    with pytest.raises(ValueError):
        graphs3.index(graph(4, []))


def test_hull_properties():
    from modcomp.engine import class_from_models, kaiser_hull_pi2
    C = cls("graphs", 4)
    h = kaiser_hull_pi2(C, 1, 2)
    texts = [to_text(s) for s in h.sentences]
    assert "(forall x (exists y (E x y)))" in texts
    assert h.vacuous and h.survivors == []
    same = class_from_models(C.signature, list(C.models), C.size)
    assert [to_text(s) for s in kaiser_hull_pi2(same, 1, 2).sentences] == texts
    # a hull sentence is never universally separated from the class
    for s in h.sentences[:10]:
        models_of_s = class_from_models(C.signature, [M for M in C.models if satisfies(M, s)], C.size)
        assert pi1_separator(C, models_of_s, 2, 2).status != "separated"
