"""Seeded random formulas and structures for property checks."""
import random
from itertools import product

from .formula import (
    And, App, Atom, BExists, BForall, Eq, Exists, Forall, Iff, Implies, Mem, Not,
    Or, Var, MEMBERSHIP,
)
from .structures import FinStructure

VARS = ["x", "y", "z", "w"]


def random_term(rng, sig, depth, names):
    fns = [(n, a) for n, a in sig.functions]
    if fns and depth > 0 and rng.random() < 0.3:
        name, arity = rng.choice(fns)
        return App(name, tuple(random_term(rng, sig, depth - 1, names) for _ in range(arity)))
    return Var(rng.choice(names))


def random_atom(rng, sig, names):
    rels = [(n, a) for n, a in sig.relations if n != MEMBERSHIP]
    choices = ["eq"] + (["mem"] if sig.membership else []) + (["rel"] if rels else [])
    kind = rng.choice(choices)
    if kind == "eq":
        return Eq(random_term(rng, sig, 1, names), random_term(rng, sig, 1, names))
    if kind == "mem":
        return Mem(random_term(rng, sig, 1, names), random_term(rng, sig, 1, names))
    name, arity = rng.choice(rels)
    return Atom(name, tuple(random_term(rng, sig, 1, names) for _ in range(arity)))


def random_formula(rng, sig, depth=3, names=None, bounded=True):
    names = list(names or VARS[:2])
    if depth <= 0 or rng.random() < 0.2:
        return random_atom(rng, sig, names)
    ops = ["not", "and", "or", "->", "iff", "forall", "exists"]
    if bounded and sig.membership:
        ops += ["forall-in", "exists-in"]
    op = rng.choice(ops)
    sub = lambda ns=names: random_formula(rng, sig, depth - 1, ns, bounded)
    if op == "not":
        return Not(sub())
    if op in ("and", "or"):
        args = tuple(sub() for _ in range(rng.randint(1, 3)))
        return And(args) if op == "and" else Or(args)
    if op == "->":
        return Implies(sub(), sub())
    if op == "iff":
        return Iff(sub(), sub())
    v = rng.choice(VARS)
    inner = names + [v] if v not in names else names
    if op in ("forall", "exists"):
        body = sub(inner)
        return Forall(v, body) if op == "forall" else Exists(v, body)
    others = [n for n in names if n != v] or ["y" if v != "y" else "x"]
    bound = Var(rng.choice(others))
    body = sub(inner)
    return BForall(v, bound, body) if op == "forall-in" else BExists(v, bound, body)


def random_structure(rng, sig, size, density=0.4):
    rels = {}
    for name, arity in sig.relations:
        rels[name] = [t for t in product(range(size), repeat=arity) if rng.random() < density]
    fns = {}
    for name, arity in sig.functions:
        fns[name] = {t: rng.randrange(size) for t in product(range(size), repeat=arity)}
    return FinStructure(sig, size, rels, fns)
