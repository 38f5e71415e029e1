"""Vectorized evaluation of formulas over finite domains.

Every subformula is evaluated to a boolean array with one axis per free
variable; quantifiers reduce an axis with ``any`` or ``all``. Atoms are
supplied by the caller, so the same engine serves sets and codes.
"""
import numpy as np

from .errors import EvaluationError, GuardExceeded
from .formula import (
    And, Atom, BExists, BForall, Eq, Exists, Forall, Iff, Implies, Mem, Not, Or,
    Var, alpha_normalize, desugar_bounded, free_vars,
)

MAX_CELLS = 60_000_000


class Table:
    """A boolean array whose axes are named by variables."""

    __slots__ = ("vars", "data")

    def __init__(self, vars, data):
        self.vars = tuple(vars)
        self.data = data

    def align(self, order, sizes):
        """View of the data with axes in ``order`` (a superset of vars)."""
        perm = [self.vars.index(v) for v in order if v in self.vars]
        arr = np.transpose(self.data, perm) if perm else self.data
        shape = [sizes[v] if v in self.vars else 1 for v in order]
        return arr.reshape(shape)


def _combine(tables, op, sizes):
    order = []
    for t in tables:
        for v in t.vars:
            if v not in order:
                order.append(v)
    cells = 1
    for v in order:
        cells *= sizes[v]
    if cells > MAX_CELLS:
        raise GuardExceeded(f"intermediate table with {cells} cells")
    arrs = [t.align(order, sizes) for t in tables]
    out = arrs[0]
    for a in arrs[1:]:
        out = op(out, a)
    full = [sizes[v] for v in order]
    return Table(order, np.broadcast_to(out, full).copy() if out.shape != tuple(full) else out)


def evaluate(f, domains, atom_table, quantifier_domain):
    """Evaluate f. ``domains`` gives the value list of each free variable,
    ``quantifier_domain`` the list bound variables range over, and
    ``atom_table(atom, doms)`` returns a Table for an atomic formula whose
    variables range over ``doms`` (a dict var -> list)."""
    f = alpha_normalize(desugar_bounded(f))
    missing = [v for v in free_vars(f) if v not in domains]
    if missing:
        raise EvaluationError(f"no domain for free variables {missing}")
    doms = dict(domains)
    sizes = {v: len(d) for v, d in doms.items()}

    def go(g):
        if isinstance(g, (Atom, Eq, Mem)):
            t = atom_table(g, doms)
            return t
        if isinstance(g, Not):
            t = go(g.body)
            return Table(t.vars, ~t.data)
        if isinstance(g, (And, Or)):
            op = np.logical_and if isinstance(g, And) else np.logical_or
            return _combine([go(a) for a in g.args], op, sizes)
        if isinstance(g, Implies):
            a, b = go(g.left), go(g.right)
            return _combine([Table(a.vars, ~a.data), b], np.logical_or, sizes)
        if isinstance(g, Iff):
            return _combine([go(g.left), go(g.right)], np.equal, sizes)
        if isinstance(g, (Forall, Exists)):
            doms[g.var] = quantifier_domain
            sizes[g.var] = len(quantifier_domain)
            t = go(g.body)
            del doms[g.var], sizes[g.var]
            if g.var not in t.vars:
                return t
            axis = t.vars.index(g.var)
            red = t.data.all(axis=axis) if isinstance(g, Forall) else t.data.any(axis=axis)
            return Table(t.vars[:axis] + t.vars[axis + 1:], red)
        raise TypeError(f"unsupported node {g!r}")

    return go(f)


def pair_table(x, y, doms, matrix_fn):
    """Table for a binary atom between variables x and y, given a function
    from two value lists to a boolean matrix."""
    if x == y:
        m = matrix_fn(doms[x], doms[x])
        return Table((x,), np.diagonal(m).copy())
    return Table((x, y), matrix_fn(doms[x], doms[y]))


def to_dense(t, order):
    """The array of t with axes in ``order`` (order must equal the var set)."""
    if set(order) != set(t.vars):
        raise ValueError("order must list exactly the table variables")
    return np.transpose(t.data, [t.vars.index(v) for v in order]) if order else t.data
