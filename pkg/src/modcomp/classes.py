"""Built-in signatures and axiom sets used by the CLI and the tests."""
from .formula import Signature
from .syntax import parse

GRAPH_SIG = Signature((("E", 2),))
EQUALITY_SIG = Signature()
ORDER_SIG = Signature((("L", 2),))

IRREFLEXIVE = "(forall x (not (E x x)))"
SYMMETRIC = "(forall x (forall y (-> (E x y) (E y x))))"
COMPLETE = "(forall x (forall y (or (= x y) (E x y))))"
HAS_NONEDGE = "(exists x (exists y (and (not (= x y)) (not (E x y)))))"
AT_LEAST_TWO = "(exists x (exists y (not (= x y))))"
TRIANGLE_FREE = "(forall x (forall y (forall z (not (and (E x y) (E y z) (E x z))))))"

_ORDER = [
    "(forall x (not (L x x)))",
    "(forall x (forall y (forall z (-> (and (L x y) (L y z)) (L x z)))))",
    "(forall x (forall y (or (= x y) (L x y) (L y x))))",
]

BUILTIN = {
    "graphs": (GRAPH_SIG, [IRREFLEXIVE, SYMMETRIC]),
    "cliques": (GRAPH_SIG, [IRREFLEXIVE, SYMMETRIC, COMPLETE]),
    "cliques2": (GRAPH_SIG, [IRREFLEXIVE, SYMMETRIC, COMPLETE, AT_LEAST_TWO]),
    "nonedge-graphs": (GRAPH_SIG, [IRREFLEXIVE, SYMMETRIC, HAS_NONEDGE]),
    "triangle-free": (GRAPH_SIG, [IRREFLEXIVE, SYMMETRIC, TRIANGLE_FREE]),
    "equality": (EQUALITY_SIG, []),
    "linear-orders": (ORDER_SIG, _ORDER),
}


def builtin(name):
    """(signature, parsed axioms) of a named class."""
    try:
        sig, texts = BUILTIN[name]
    except KeyError:
        raise KeyError(f"unknown class {name!r}; known: {', '.join(sorted(BUILTIN))}") from None
    return sig, [parse(t, sig) for t in texts]
