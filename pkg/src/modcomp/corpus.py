"""Membership formulas used to check the code translation, with the code
size m at which each one is verified."""
from .hf import hf_universe

SUBSET = "(forall-in w x (in w y))"
TRANSITIVE = "(forall-in w x (forall-in v w (in v x)))"
ORDINAL = ("(and (forall-in w x (forall-in v w (in v x)))"
           " (forall-in u x (forall-in v x (or (in u v) (= u v) (in v u)))))")
KURATOWSKI = ("(exists t (exists u (and"
              " (forall w (iff (in w x) (or (= w t) (= w u))))"
              " (forall v (iff (in v t) (= v y)))"
              " (forall v (iff (in v u) (or (= v y) (= v z)))))))")
UNION = "(forall w (iff (in w x) (exists-in v y (in w v))))"
IS_SINGLETON = "(exists y (forall w (iff (in w x) (= w y))))"
SINGLETON_OF = "(forall w (iff (in w x) (= w y)))"
EMPTY = "(forall-in w x (not (= w w)))"
IN_MINIMAL = "(and (in y x) (forall-in w x (not (in w y))))"
EQUAL = "(= x y)"
SUCCESSOR = "(forall w (iff (in w x) (or (in w y) (= w y))))"
CHAIN = "(and (in x y) (in y z))"

# (name, formula, m, restriction of the free variables or None)
CORPUS = [
    ("subset", SUBSET, 3, None),
    ("transitive", TRANSITIVE, 4, None),
    ("ordinal", ORDINAL, 3, None),
    ("kuratowski-pair", KURATOWSKI, 5, "hf3"),
    ("union", UNION, 4, None),
    ("is-singleton", IS_SINGLETON, 3, None),
    ("singleton-of", SINGLETON_OF, 4, None),
    ("empty", EMPTY, 4, None),
    ("in-minimal", IN_MINIMAL, 4, None),
    ("equal", EQUAL, 4, None),
    ("successor", SUCCESSOR, 4, None),
    ("chain", CHAIN, 4, None),
]

# (name, formula, m, mutation): each must fail verification
MUTANTS = [
    ("is-singleton", IS_SINGLETON, 3, "drop-exists-guard"),
    ("equal", EQUAL, 3, "drop-eq-guards"),
    ("chain", CHAIN, 2, "drop-mem-guards"),
]


def free_domain(tag):
    if tag is None:
        return None
    if tag == "hf3":
        return hf_universe(3)
    raise ValueError(tag)
