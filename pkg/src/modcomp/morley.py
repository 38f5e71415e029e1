"""Morleyization of a finite set of selected formulas.

A formula selected as a relation gets a new predicate R_i with the axiom
    forall xs (iff phi(xs) (R_i xs)).
A formula selected for Skolemization gets a function f_i of the remaining
free variables with the axiom
    forall xs ((exists y phi(y, xs)) -> phi(f_i(xs), xs)),
where y is the first free variable of phi.
"""
from dataclasses import dataclass, field

from .errors import MorleyizationError
from .formula import (
    App, Atom, Exists, Iff, Implies, Var, check_formula, forall_many, free_vars,
    substitute,
)

KINDS = ("relation", "skolem")


@dataclass
class MorleyResult:
    signature: object
    axioms: list = field(default_factory=list)
    # (formula, kind) -> new symbol name, in selection order
    symbols: dict = field(default_factory=dict)

    def to_json(self):
        from .syntax import to_text
        return {
            "signature": self.signature.to_json(),
            "axioms": [to_text(a) for a in self.axioms],
            "symbols": [{"formula": to_text(f), "kind": k, "symbol": s}
                        for (f, k), s in self.symbols.items()],
        }


def relation_axiom(phi, name):
    xs = free_vars(phi)
    return forall_many(xs, Iff(phi, Atom(name, tuple(Var(x) for x in xs))))


def skolem_axiom(phi, name):
    xs = free_vars(phi)
    if not xs:
        raise MorleyizationError("a Skolem function needs a formula with a free variable")
    y, params = xs[0], xs[1:]
    witness = App(name, tuple(Var(x) for x in params))
    body = Implies(Exists(y, phi), substitute(phi, {y: witness}))
    return forall_many(params, body)


def morleyize(sig, selected):
    """Expand ``sig`` by one symbol per selected (formula, kind) pair."""
    seen = set()
    rels, fns, axioms, symbols = [], [], [], {}
    for i, (phi, kind) in enumerate(selected):
        if kind not in KINDS:
            raise MorleyizationError(f"unknown selection kind {kind!r}")
        if (phi, kind) in seen:
            raise MorleyizationError(f"duplicate selection at position {i}")
        seen.add((phi, kind))
        check_formula(phi, sig)
        xs = free_vars(phi)
        if kind == "relation":
            name = f"R_{i}"
            rels.append((name, len(xs)))
            axioms.append(relation_axiom(phi, name))
        else:
            if not xs:
                raise MorleyizationError(
                    f"selection {i}: Skolemization needs at least one free variable")
            name = f"f_{i}"
            fns.append((name, len(xs) - 1))
            axioms.append(skolem_axiom(phi, name))
        if sig.rel_arity(name) is not None or sig.fn_arity(name) is not None:
            raise MorleyizationError(f"symbol {name} already in the signature")
        symbols[(phi, kind)] = name
    return MorleyResult(sig.extend(rels, fns), axioms, symbols)
