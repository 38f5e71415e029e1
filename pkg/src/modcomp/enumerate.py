"""Enumeration of finite models up to isomorphism.

Candidates are built slot by slot (one slot per relation tuple or function
entry) and pruned as soon as some axiom is already false under three-valued
evaluation of the partial structure. Survivors are canonicalized by the
lexicographically least encoding over the permutations that respect a vertex
invariant, which makes the choice of representative isomorphism-invariant.
"""
from itertools import permutations, product

from .errors import GuardExceeded
from .formula import (
    And, Atom, BExists, BForall, Eq, Exists, Forall, Iff, Implies, Mem, Not, Or,
    Var, MEMBERSHIP,
)
from .structures import FinStructure, satisfies

MAX_SLOTS = 64


def _kterm(vals, t, a):
    if isinstance(t, Var):
        return a[t.name]
    args = []
    for s in t.args:
        v = _kterm(vals, s, a)
        if v is None:
            return None
        args.append(v)
    return vals[("F", t.fn)].get(tuple(args))


def _kand(xs):
    unknown = False
    for x in xs:
        if x is False:
            return False
        if x is None:
            unknown = True
    return None if unknown else True


def _kor(xs):
    unknown = False
    for x in xs:
        if x is True:
            return True
        if x is None:
            unknown = True
    return None if unknown else False


def _knot(x):
    return None if x is None else not x


def kleene(vals, size, f, a):
    """Three-valued truth of f in a partial structure (None = unknown)."""
    if isinstance(f, (Atom, Mem)):
        name = f.rel if isinstance(f, Atom) else MEMBERSHIP
        terms = f.args if isinstance(f, Atom) else (f.left, f.right)
        args = []
        for t in terms:
            v = _kterm(vals, t, a)
            if v is None:
                return None
            args.append(v)
        return vals[("R", name)].get(tuple(args))
    if isinstance(f, Eq):
        x, y = _kterm(vals, f.left, a), _kterm(vals, f.right, a)
        if x is None or y is None:
            return None
        return x == y
    if isinstance(f, Not):
        return _knot(kleene(vals, size, f.body, a))
    if isinstance(f, And):
        return _kand(kleene(vals, size, g, a) for g in f.args)
    if isinstance(f, Or):
        return _kor(kleene(vals, size, g, a) for g in f.args)
    if isinstance(f, Implies):
        return _kor((_knot(kleene(vals, size, f.left, a)), kleene(vals, size, f.right, a)))
    if isinstance(f, Iff):
        x, y = kleene(vals, size, f.left, a), kleene(vals, size, f.right, a)
        return None if x is None or y is None else x == y
    if isinstance(f, (Forall, Exists)):
        gen = (kleene(vals, size, f.body, {**a, f.var: e}) for e in range(size))
        return _kand(gen) if isinstance(f, Forall) else _kor(gen)
    if isinstance(f, (BForall, BExists)):
        b = _kterm(vals, f.bound, a)
        if b is None:
            return None
        mem = vals[("R", MEMBERSHIP)]
        out = []
        for e in range(size):
            m = mem.get((e, b))
            body = kleene(vals, size, f.body, {**a, f.var: e})
            if isinstance(f, BForall):
                out.append(_kor((_knot(m), body)))
            else:
                out.append(_kand((m, body)))
        return _kand(out) if isinstance(f, BForall) else _kor(out)
    raise TypeError(f"not a formula: {f!r}")


def _slots(sig, size):
    slots = []
    for name, arity in sig.relations:
        for t in product(range(size), repeat=arity):
            slots.append((max(t, default=-1), 0, sig.relation_names.index(name), t, ("R", name), 2))
    for name, arity in sig.functions:
        for t in product(range(size), repeat=arity):
            slots.append((max(t, default=-1), 1, sig.function_names.index(name), t, ("F", name), size))
    slots.sort(key=lambda s: s[:4])
    return [(key, t, n) for _, _, _, t, key, n in slots]


def encoding(M):
    bits = []
    for name, arity in M.signature.relations:
        rel = M.relations[name]
        bits.extend(1 if t in rel else 0 for t in product(range(M.size), repeat=arity))
    for name, arity in M.signature.functions:
        table = M.functions[name]
        bits.extend(table[t] for t in product(range(M.size), repeat=arity))
    return tuple(bits)


def _invariant(M):
    inv = [[] for _ in range(M.size)]
    for name, arity in M.signature.relations:
        for pos in range(arity):
            counts = [0] * M.size
            for t in M.relations[name]:
                counts[t[pos]] += 1
            for i in range(M.size):
                inv[i].append(counts[i])
        if arity >= 2:
            diag = {t[0] for t in M.relations[name] if len(set(t)) == 1}
            for i in range(M.size):
                inv[i].append(1 if i in diag else 0)
    for name, arity in M.signature.functions:
        counts = [0] * M.size
        for v in M.functions[name].values():
            counts[v] += 1
        for i in range(M.size):
            inv[i].append(counts[i])
    return [tuple(x) for x in inv]


def _respecting_perms(inv):
    """Bijections p (element i goes to p[i]) that sort elements by invariant."""
    n = len(inv)
    values = sorted(set(inv))
    cells = [[i for i in range(n) if inv[i] == v] for v in values]
    positions = []
    start = 0
    for cell in cells:
        positions.append(list(range(start, start + len(cell))))
        start += len(cell)

    def go(k):
        if k == len(cells):
            yield {}
            return
        for rest in go(k + 1):
            for order in permutations(positions[k]):
                p = dict(rest)
                for elem, pos in zip(cells[k], order):
                    p[elem] = pos
                yield p

    for p in go(0):
        yield tuple(p[i] for i in range(n))


def canonical_form(M):
    """(encoding, representative) with the lexicographically least encoding."""
    best = None
    for perm in _respecting_perms(_invariant(M)):
        image = M.relabel(perm)
        code = encoding(image)
        if best is None or code < best[0]:
            best = (code, image)
    return best


def enumerate_structures(sig, max_size, axioms=(), min_size=1):
    """One canonical representative per isomorphism class of models of
    ``axioms`` with min_size..max_size elements, sorted by (size, encoding)."""
    if any(a >= 1 for _, a in sig.functions) and max_size > 5:
        raise GuardExceeded("function symbols of arity >= 1 are limited to size 5")
    axioms = list(axioms)
    out = []
    for size in range(max(1, min_size), max_size + 1):
        slots = _slots(sig, size)
        if len(slots) > MAX_SLOTS:
            raise GuardExceeded(f"{len(slots)} slots at size {size} exceed the limit {MAX_SLOTS}")
        vals = {("R", n): {} for n in sig.relation_names}
        vals.update({("F", n): {} for n in sig.function_names})
        found = {}

        def go(i):
            for ax in axioms:
                if kleene(vals, size, ax, {}) is False:
                    return
            if i == len(slots):
                rels = {n: [t for t, v in vals[("R", n)].items() if v] for n in sig.relation_names}
                fns = {n: dict(vals[("F", n)]) for n in sig.function_names}
                M = FinStructure(sig, size, rels, fns)
                if all(satisfies(M, ax) for ax in axioms):
                    code, rep = canonical_form(M)
                    found.setdefault(code, rep)
                return
            key, t, choices = slots[i]
            table = vals[key]
            for v in range(choices):
                table[t] = bool(v) if key[0] == "R" else v
                go(i + 1)
            del table[t]

        go(0)
        out.extend(found[c] for c in sorted(found))
    return out
