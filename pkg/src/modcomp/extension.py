"""A second evaluator that computes satisfying-assignment sets bottom-up.

It shares no code with ``structures.satisfies`` beyond term evaluation of
function tables, and exists to cross-check it.
"""
from itertools import product

from .formula import (
    And, App, Atom, BExists, BForall, Eq, Exists, Forall, Iff, Implies, Mem, Not,
    Or, Var, MEMBERSHIP, free_vars,
)


def _term_value(M, t, env):
    if isinstance(t, Var):
        return env[t.name]
    vals = [_term_value(M, s, env) for s in t.args]
    return M.functions[t.fn][tuple(vals)]


def extension(M, f, ctx):
    """Set of tuples over the variable tuple ``ctx`` at which f holds."""
    ctx = tuple(ctx)
    universe = list(product(range(M.size), repeat=len(ctx)))

    def at(t):
        return dict(zip(ctx, t))

    if isinstance(f, (Atom, Eq, Mem)):
        out = set()
        for t in universe:
            env = at(t)
            if isinstance(f, Eq):
                ok = _term_value(M, f.left, env) == _term_value(M, f.right, env)
            elif isinstance(f, Mem):
                ok = (_term_value(M, f.left, env), _term_value(M, f.right, env)) in M.relations[MEMBERSHIP]
            else:
                ok = tuple(_term_value(M, s, env) for s in f.args) in M.relations[f.rel]
            if ok:
                out.add(t)
        return out
    if isinstance(f, Not):
        return set(universe) - extension(M, f.body, ctx)
    if isinstance(f, And):
        out = set(universe)
        for g in f.args:
            out &= extension(M, g, ctx)
        return out
    if isinstance(f, Or):
        out = set()
        for g in f.args:
            out |= extension(M, g, ctx)
        return out
    if isinstance(f, Implies):
        return (set(universe) - extension(M, f.left, ctx)) | extension(M, f.right, ctx)
    if isinstance(f, Iff):
        a, b = extension(M, f.left, ctx), extension(M, f.right, ctx)
        return {t for t in universe if (t in a) == (t in b)}
    # quantifiers: evaluate the body over ctx minus the bound name plus the bound name
    outer = tuple(v for v in ctx if v != f.var)
    inner = outer + (f.var,)
    body = extension(M, f.body, inner)
    if isinstance(f, (BForall, BExists)):
        bound_ext = {}
        for t in product(range(M.size), repeat=len(outer)):
            env = dict(zip(outer, t))
            b = _term_value(M, f.bound, env)
            bound_ext[t] = [e for e in range(M.size) if (e, b) in M.relations[MEMBERSHIP]]
    out = set()
    for t in universe:
        env = at(t)
        base = tuple(env[v] for v in outer)
        if isinstance(f, (Forall, Exists)):
            rng = range(M.size)
        else:
            rng = bound_ext[base]
        hits = [base + (e,) in body for e in rng]
        if isinstance(f, (Forall, BForall)):
            if all(hits):
                out.add(t)
        elif any(hits):
            out.add(t)
    return out


def holds(M, f, assignment=None):
    assignment = assignment or {}
    ctx = tuple(free_vars(f))
    t = tuple(assignment[v] for v in ctx)
    return t in extension(M, f, ctx)
