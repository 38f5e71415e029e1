"""Terms, formulas and signatures.

Formulas are immutable trees of frozen dataclasses. Bounded quantifiers are
primitive nodes so that Delta_0 detection stays purely syntactic.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import count
from typing import Iterator, Optional, Union

from .errors import SignatureError

VAR_RE = re.compile(r"[a-z][a-z0-9_]*\Z")


# -- terms -------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple = ()


Term = Union[Var, App]


# -- formulas ----------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple = ()


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Mem:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple

    def __post_init__(self):
        if not self.args:
            raise ValueError("empty conjunction")


@dataclass(frozen=True)
class Or:
    args: tuple

    def __post_init__(self):
        if not self.args:
            raise ValueError("empty disjunction")


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class BForall:
    var: str
    bound: Term
    body: "Formula"


@dataclass(frozen=True)
class BExists:
    var: str
    bound: Term
    body: "Formula"


Formula = Union[Atom, Eq, Mem, Not, And, Or, Implies, Iff, Forall, Exists, BForall, BExists]

ATOMIC = (Atom, Eq, Mem)
QUANTIFIERS = (Forall, Exists)
BOUNDED = (BForall, BExists)


def conj(*args):
    return args[0] if len(args) == 1 else And(tuple(args))


def disj(*args):
    return args[0] if len(args) == 1 else Or(tuple(args))


def forall_many(names, body):
    for name in reversed(list(names)):
        body = Forall(name, body)
    return body


def exists_many(names, body):
    for name in reversed(list(names)):
        body = Exists(name, body)
    return body


def children(f):
    if isinstance(f, Not):
        return (f.body,)
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, (Implies, Iff)):
        return (f.left, f.right)
    if isinstance(f, (Forall, Exists, BForall, BExists)):
        return (f.body,)
    return ()


def term_vars(t) -> Iterator[str]:
    if isinstance(t, Var):
        yield t.name
    else:
        for a in t.args:
            yield from term_vars(a)


def atom_terms(f):
    if isinstance(f, Atom):
        return f.args
    return (f.left, f.right)


def free_vars(f) -> list:
    """Free variables in order of first occurrence."""
    out: list = []

    def visit_term(t, bound):
        for v in term_vars(t):
            if v not in bound and v not in out:
                out.append(v)

    def visit(g, bound):
        if isinstance(g, ATOMIC):
            for t in atom_terms(g):
                visit_term(t, bound)
        elif isinstance(g, QUANTIFIERS):
            visit(g.body, bound | {g.var})
        elif isinstance(g, BOUNDED):
            visit_term(g.bound, bound)
            visit(g.body, bound | {g.var})
        else:
            for c in children(g):
                visit(c, bound)

    visit(f, frozenset())
    return out


def all_var_names(f) -> set:
    names = set()

    def visit(g):
        if isinstance(g, ATOMIC):
            for t in atom_terms(g):
                names.update(term_vars(t))
        else:
            if isinstance(g, (Forall, Exists, BForall, BExists)):
                names.add(g.var)
            if isinstance(g, BOUNDED):
                names.update(term_vars(g.bound))
            for c in children(g):
                visit(c)

    visit(f)
    return names


def size(f) -> int:
    """Node count, counting each atomic formula as one node."""
    return 1 + sum(size(c) for c in children(f))


def quantifier_rank(f) -> int:
    inner = max((quantifier_rank(c) for c in children(f)), default=0)
    if isinstance(f, (Forall, Exists, BForall, BExists)):
        return inner + 1
    return inner


def has_unbounded(f) -> bool:
    if isinstance(f, QUANTIFIERS):
        return True
    return any(has_unbounded(c) for c in children(f))


def has_bounded(f) -> bool:
    if isinstance(f, BOUNDED):
        return True
    return any(has_bounded(c) for c in children(f))


def fresh_names(avoid, prefix="v"):
    for i in count():
        name = f"{prefix}{i}"
        if name not in avoid:
            yield name


def subst_term(t, mapping):
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    return App(t.fn, tuple(subst_term(a, mapping) for a in t.args))


def substitute(f, mapping: dict):
    """Capture-avoiding substitution of terms for free variables."""
    mapping = {k: v for k, v in mapping.items()}
    if not mapping:
        return f
    incoming = set()
    for t in mapping.values():
        incoming.update(term_vars(t))

    def go(g, mp):
        if not mp:
            return g
        if isinstance(g, Atom):
            return Atom(g.rel, tuple(subst_term(t, mp) for t in g.args))
        if isinstance(g, Eq):
            return Eq(subst_term(g.left, mp), subst_term(g.right, mp))
        if isinstance(g, Mem):
            return Mem(subst_term(g.left, mp), subst_term(g.right, mp))
        if isinstance(g, Not):
            return Not(go(g.body, mp))
        if isinstance(g, And):
            return And(tuple(go(a, mp) for a in g.args))
        if isinstance(g, Or):
            return Or(tuple(go(a, mp) for a in g.args))
        if isinstance(g, Implies):
            return Implies(go(g.left, mp), go(g.right, mp))
        if isinstance(g, Iff):
            return Iff(go(g.left, mp), go(g.right, mp))
        # binders
        inner = {k: v for k, v in mp.items() if k != g.var}
        var, body = g.var, g.body
        if var in incoming and inner:
            new = next(fresh_names(incoming | all_var_names(g.body) | set(mp)))
            body = go(body, {var: Var(new)})
            var = new
        if isinstance(g, Forall):
            return Forall(var, go(body, inner))
        if isinstance(g, Exists):
            return Exists(var, go(body, inner))
        bound = subst_term(g.bound, mp)
        cls = BForall if isinstance(g, BForall) else BExists
        return cls(var, bound, go(body, inner))

    return go(f, mapping)


def desugar_bounded(f):
    """Replace bounded quantifiers by guarded unbounded ones."""
    if isinstance(f, BForall):
        return Forall(f.var, Implies(Mem(Var(f.var), f.bound), desugar_bounded(f.body)))
    if isinstance(f, BExists):
        return Exists(f.var, And((Mem(Var(f.var), f.bound), desugar_bounded(f.body))))
    return map_children(f, desugar_bounded)


def map_children(f, fn):
    if isinstance(f, ATOMIC):
        return f
    if isinstance(f, Not):
        return Not(fn(f.body))
    if isinstance(f, And):
        return And(tuple(fn(a) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(fn(a) for a in f.args))
    if isinstance(f, Implies):
        return Implies(fn(f.left), fn(f.right))
    if isinstance(f, Iff):
        return Iff(fn(f.left), fn(f.right))
    if isinstance(f, Forall):
        return Forall(f.var, fn(f.body))
    if isinstance(f, Exists):
        return Exists(f.var, fn(f.body))
    if isinstance(f, BForall):
        return BForall(f.var, f.bound, fn(f.body))
    return BExists(f.var, f.bound, fn(f.body))


def alpha_normalize(f):
    """Rename bound variables to v0, v1, ... in binding order.

    Free variables keep their names; two formulas are alpha-equivalent iff
    their normalizations are equal.
    """
    avoid = set(free_vars(f))
    names = fresh_names(avoid)

    def go(g, env):
        if isinstance(g, ATOMIC):
            mp = {k: Var(v) for k, v in env.items()}
            return substitute_plain(g, mp)
        if isinstance(g, (Forall, Exists, BForall, BExists)):
            new = next(names)
            inner = dict(env)
            inner[g.var] = new
            body = go(g.body, inner)
            if isinstance(g, Forall):
                return Forall(new, body)
            if isinstance(g, Exists):
                return Exists(new, body)
            bound = subst_term(g.bound, {k: Var(v) for k, v in env.items()})
            return (BForall if isinstance(g, BForall) else BExists)(new, bound, body)
        return map_children(g, lambda c: go(c, env))

    return go(f, {})


def substitute_plain(atom, mp):
    if isinstance(atom, Atom):
        return Atom(atom.rel, tuple(subst_term(t, mp) for t in atom.args))
    return type(atom)(subst_term(atom.left, mp), subst_term(atom.right, mp))


# -- signatures --------------------------------------------------------------

MEMBERSHIP = "in"


@dataclass(frozen=True)
class Signature:
    relations: tuple = ()
    functions: tuple = ()
    membership: Optional[str] = None
    _rel: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _fn: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        rels = tuple((str(n), int(a)) for n, a in self.relations)
        fns = tuple((str(n), int(a)) for n, a in self.functions)
        if self.membership is not None:
            if self.membership != MEMBERSHIP:
                raise SignatureError(f"membership symbol must be {MEMBERSHIP!r}")
            if not any(n == MEMBERSHIP for n, _ in rels):
                rels = rels + ((MEMBERSHIP, 2),)
        names = [n for n, _ in rels] + [n for n, _ in fns]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise SignatureError(f"duplicate symbol names: {sorted(dup)}")
        for n, a in rels + fns:
            if a < 0:
                raise SignatureError(f"negative arity for {n}")
            if n in ("and", "or", "not", "->", "iff", "forall", "exists",
                     "forall-in", "exists-in", "="):
                raise SignatureError(f"reserved symbol name {n!r}")
        if self.membership is not None and dict(rels)[MEMBERSHIP] != 2:
            raise SignatureError("membership symbol must be binary")
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "functions", fns)
        object.__setattr__(self, "_rel", dict(rels))
        object.__setattr__(self, "_fn", dict(fns))

    def rel_arity(self, name):
        return self._rel.get(name)

    def fn_arity(self, name):
        return self._fn.get(name)

    @property
    def relation_names(self):
        return [n for n, _ in self.relations]

    @property
    def function_names(self):
        return [n for n, _ in self.functions]

    @property
    def is_relational(self):
        return all(a == 0 for _, a in self.functions)

    def extend(self, relations=(), functions=()):
        return Signature(self.relations + tuple(relations),
                         self.functions + tuple(functions), self.membership)

    def to_json(self):
        rels = [[n, a] for n, a in self.relations
                if not (self.membership and n == MEMBERSHIP)]
        return {"relations": rels, "functions": [[n, a] for n, a in self.functions],
                "membership": self.membership}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(tuple(r) for r in data.get("relations", [])),
                   tuple(tuple(f) for f in data.get("functions", [])),
                   data.get("membership"))


def check_formula(f, sig: Signature):
    """Raise SignatureError unless every symbol of ``f`` is declared in ``sig``."""

    def check_term(t):
        if isinstance(t, App):
            a = sig.fn_arity(t.fn)
            if a is None:
                raise SignatureError(f"undeclared function symbol {t.fn!r}")
            if a != len(t.args):
                raise SignatureError(f"arity mismatch for {t.fn!r}: expected {a}, got {len(t.args)}")
            for s in t.args:
                check_term(s)

    def visit(g):
        if isinstance(g, Atom):
            a = sig.rel_arity(g.rel)
            if a is None:
                raise SignatureError(f"undeclared relation symbol {g.rel!r}")
            if a != len(g.args):
                raise SignatureError(f"arity mismatch for {g.rel!r}: expected {a}, got {len(g.args)}")
        if isinstance(g, Mem) and sig.membership is None:
            raise SignatureError("membership used but the signature has no membership symbol")
        if isinstance(g, ATOMIC):
            for t in atom_terms(g):
                check_term(t)
        if isinstance(g, BOUNDED):
            if sig.membership is None:
                raise SignatureError("bounded quantifier needs a membership symbol")
            if g.var in set(term_vars(g.bound)):
                raise SignatureError(f"bound term of {g.var!r} mentions {g.var!r}")
            check_term(g.bound)
        for c in children(g):
            visit(c)

    visit(f)
