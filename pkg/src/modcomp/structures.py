"""Finite structures, Tarski satisfaction, embeddings and diagrams."""
import json
from dataclasses import dataclass
from itertools import product

from .errors import EvaluationError, SignatureError
from .formula import (
    ATOMIC, And, App, Atom, BExists, BForall, Eq, Exists, Forall, Iff, Implies,
    Mem, Not, Or, Var, MEMBERSHIP, free_vars,
)


class FinStructure:
    """A structure on {0, ..., size-1}.

    ``relations`` maps each relation name to a frozenset of tuples and
    ``functions`` maps each function name to a dict from argument tuples to
    values. Missing relations are empty; functions must be total.
    """

    __slots__ = ("signature", "size", "relations", "functions", "_key")

    def __init__(self, signature, size, relations=None, functions=None):
        if size < 1:
            raise ValueError("structures are non-empty")
        relations = relations or {}
        functions = functions or {}
        rels = {}
        for name, arity in signature.relations:
            tuples = frozenset(tuple(int(x) for x in t) for t in relations.get(name, ()))
            for t in tuples:
                if len(t) != arity or any(not 0 <= x < size for x in t):
                    raise ValueError(f"bad tuple {t} for {name}")
            rels[name] = tuples
        extra = set(relations) - set(rels)
        if extra:
            raise SignatureError(f"relations not in the signature: {sorted(extra)}")
        fns = {}
        for name, arity in signature.functions:
            table = functions.get(name)
            if table is None:
                raise ValueError(f"function {name} not interpreted")
            table = {tuple(int(x) for x in k): int(v) for k, v in dict(table).items()}
            for args in product(range(size), repeat=arity):
                v = table.get(args)
                if v is None or not 0 <= v < size:
                    raise ValueError(f"function {name} not total or out of range at {args}")
            if len(table) != size ** arity:
                raise ValueError(f"function {name} has arguments out of range")
            fns[name] = table
        self.signature = signature
        self.size = size
        self.relations = rels
        self.functions = fns
        self._key = None

    def key(self):
        if self._key is None:
            self._key = (
                self.size,
                tuple(tuple(sorted(self.relations[n])) for n in self.signature.relation_names),
                tuple(tuple(sorted(self.functions[n].items())) for n in self.signature.function_names),
            )
        return self._key

    def __eq__(self, other):
        return isinstance(other, FinStructure) and self.signature == other.signature \
            and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FinStructure(size={self.size}, relations={ {k: sorted(v) for k, v in self.relations.items()} })"

    def to_json(self):
        return {
            "size": self.size,
            "relations": {n: [list(t) for t in sorted(self.relations[n])]
                          for n in self.signature.relation_names},
            "functions": {n: [list(k) + [v] for k, v in sorted(self.functions[n].items())]
                          for n in self.signature.function_names},
        }

    @classmethod
    def from_json(cls, signature, data):
        if isinstance(data, str):
            data = json.loads(data)
        fns = {}
        for name, rows in data.get("functions", {}).items():
            fns[name] = {tuple(r[:-1]): r[-1] for r in rows}
        rels = {name: [tuple(t) for t in rows] for name, rows in data.get("relations", {}).items()}
        return cls(signature, data["size"], rels, fns)

    def substructure(self, elements):
        """Induced substructure on ``elements``, relabelled 0.. in the given order."""
        index = {e: i for i, e in enumerate(elements)}
        rels = {n: [tuple(index[x] for x in t) for t in ts if all(x in index for x in t)]
                for n, ts in self.relations.items()}
        fns = {}
        for n, table in self.functions.items():
            sub = {}
            for k, v in table.items():
                if all(x in index for x in k):
                    if v not in index:
                        raise ValueError("element set not closed under functions")
                    sub[tuple(index[x] for x in k)] = index[v]
            fns[n] = sub
        return FinStructure(self.signature, len(elements), rels, fns)

    def relabel(self, perm):
        """Image of the structure under the bijection i -> perm[i]."""
        rels = {n: [tuple(perm[x] for x in t) for t in ts] for n, ts in self.relations.items()}
        fns = {n: {tuple(perm[x] for x in k): perm[v] for k, v in t.items()}
               for n, t in self.functions.items()}
        return FinStructure(self.signature, self.size, rels, fns)


def graph(n, edges, signature=None):
    """Simple undirected graph on n vertices with relation E."""
    from .classes import GRAPH_SIG
    sig = signature or GRAPH_SIG
    sym = set()
    for a, b in edges:
        sym.add((a, b))
        sym.add((b, a))
    return FinStructure(sig, n, {"E": sym})


# -- satisfaction ------------------------------------------------------------

def eval_term(M, t, a):
    if isinstance(t, Var):
        try:
            return a[t.name]
        except KeyError:
            raise EvaluationError(f"unassigned variable {t.name!r}") from None
    table = M.functions.get(t.fn)
    if table is None:
        raise EvaluationError(f"function {t.fn!r} not interpreted")
    return table[tuple(eval_term(M, s, a) for s in t.args)]


def _members(M, value):
    rel = M.relations.get(MEMBERSHIP)
    if rel is None or M.signature.membership is None:
        raise EvaluationError("bounded quantifier used but no membership symbol is flagged")
    return [e for e in range(M.size) if (e, value) in rel]


def satisfies(M, f, a=None):
    """Tarski truth of ``f`` in ``M`` under the assignment ``a`` (a dict)."""
    a = dict(a or {})
    return _sat(M, f, a)


def _sat(M, f, a):
    if isinstance(f, Atom):
        rel = M.relations.get(f.rel)
        if rel is None:
            raise EvaluationError(f"relation {f.rel!r} not interpreted")
        return tuple(eval_term(M, t, a) for t in f.args) in rel
    if isinstance(f, Eq):
        return eval_term(M, f.left, a) == eval_term(M, f.right, a)
    if isinstance(f, Mem):
        rel = M.relations.get(MEMBERSHIP)
        if rel is None or M.signature.membership is None:
            raise EvaluationError("membership atom but no membership symbol is flagged")
        return (eval_term(M, f.left, a), eval_term(M, f.right, a)) in rel
    if isinstance(f, Not):
        return not _sat(M, f.body, a)
    if isinstance(f, And):
        return all(_sat(M, g, a) for g in f.args)
    if isinstance(f, Or):
        return any(_sat(M, g, a) for g in f.args)
    if isinstance(f, Implies):
        return (not _sat(M, f.left, a)) or _sat(M, f.right, a)
    if isinstance(f, Iff):
        return _sat(M, f.left, a) == _sat(M, f.right, a)
    if isinstance(f, (Forall, Exists)):
        rng = range(M.size)
    elif isinstance(f, (BForall, BExists)):
        rng = _members(M, eval_term(M, f.bound, a))
    else:
        raise TypeError(f"not a formula: {f!r}")
    saved = a.get(f.var, _MISSING)
    want_all = isinstance(f, (Forall, BForall))
    result = want_all
    for e in rng:
        a[f.var] = e
        if _sat(M, f.body, a) != want_all:
            result = not want_all
            break
    if saved is _MISSING:
        a.pop(f.var, None)
    else:
        a[f.var] = saved
    return result


_MISSING = object()


def models(M, sentences):
    return all(satisfies(M, s) for s in sentences)


def definable_set(M, f, variables=None):
    """All tuples over ``variables`` (default: free variables) satisfying f."""
    variables = list(variables if variables is not None else free_vars(f))
    return [t for t in product(range(M.size), repeat=len(variables))
            if satisfies(M, f, dict(zip(variables, t)))]


# -- embeddings --------------------------------------------------------------

@dataclass(frozen=True)
class Embedding:
    source: FinStructure
    target: FinStructure
    map: tuple

    def __call__(self, i):
        return self.map[i]

    def compose(self, other):
        """``other`` after ``self``."""
        return Embedding(self.source, other.target, tuple(other.map[x] for x in self.map))


def _tuples_by_max(size, arity):
    groups = [[] for _ in range(size)]
    for t in product(range(size), repeat=arity):
        if t:
            groups[max(t)].append(t)
    return groups


def _check_plan(M):
    """For each element i, the atomic facts fully determined once 0..i are mapped."""
    plan = [[] for _ in range(M.size)]
    for name, arity in M.signature.relations:
        if arity == 0:
            continue
        for i, ts in enumerate(_tuples_by_max(M.size, arity)):
            for t in ts:
                plan[i].append(("R", name, t, t in M.relations[name]))
    for name, arity in M.signature.functions:
        for k, v in M.functions[name].items():
            plan[max(k + (v,))].append(("F", name, k, v))
    return plan


def is_embedding(M, N, mapping):
    if M.signature != N.signature:
        raise SignatureError("embedding between structures of different signatures")
    if len(mapping) != M.size or len(set(mapping)) != M.size:
        return False
    if any(not 0 <= x < N.size for x in mapping):
        return False
    for name, arity in M.signature.relations:
        if arity == 0:
            if M.relations[name] != N.relations[name]:
                return False
            continue
        for t in product(range(M.size), repeat=arity):
            if (t in M.relations[name]) != (tuple(mapping[x] for x in t) in N.relations[name]):
                return False
    for name, _ in M.signature.functions:
        for k, v in M.functions[name].items():
            if N.functions[name][tuple(mapping[x] for x in k)] != mapping[v]:
                return False
    return True


def enumerate_embeddings(M, N, limit=None):
    """All embeddings of M into N, in lexicographic order of the element map."""
    if M.signature != N.signature:
        raise SignatureError("embedding between structures of different signatures")
    for name, arity in M.signature.relations:
        if arity == 0 and M.relations[name] != N.relations[name]:
            return []
    plan = _check_plan(M)
    out = []
    image = []
    used = [False] * N.size

    def ok(i):
        for kind, name, t, val in plan[i]:
            if kind == "R":
                if (tuple(image[x] for x in t) in N.relations[name]) != val:
                    return False
            elif N.functions[name][tuple(image[x] for x in t)] != image[val]:
                return False
        return True

    def go(i):
        if limit is not None and len(out) >= limit:
            return
        if i == M.size:
            out.append(Embedding(M, N, tuple(image)))
            return
        for y in range(N.size):
            if used[y]:
                continue
            image.append(y)
            used[y] = True
            if ok(i):
                go(i + 1)
            used[y] = False
            image.pop()

    go(0)
    return out


# -- diagrams ----------------------------------------------------------------

def constant_names(n):
    return [f"c{i}" for i in range(n)]


def diagram_signature(M):
    names = constant_names(M.size)
    for c in names:
        if M.signature.rel_arity(c) is not None or M.signature.fn_arity(c) is not None:
            raise SignatureError(f"diagram constant {c} clashes with the signature")
    return M.signature.extend(functions=[(c, 0) for c in names])


def atomic_diagram(M):
    """Atomic and negated atomic sentences true in M, one constant per element.

    Relation literals come first (relations in signature order, tuples in
    lexicographic order), then the distinctness literals, then one positive
    equation per function entry.
    """
    c = [App(name) for name in constant_names(M.size)]
    out = []
    for name, arity in M.signature.relations:
        for t in product(range(M.size), repeat=arity):
            args = tuple(c[x] for x in t)
            atom = Mem(*args) if (name == MEMBERSHIP and M.signature.membership) else Atom(name, args)
            out.append(atom if t in M.relations[name] else Not(atom))
    for i in range(M.size):
        for j in range(i + 1, M.size):
            out.append(Not(Eq(c[i], c[j])))
    for name, _ in M.signature.functions:
        for k, v in sorted(M.functions[name].items()):
            out.append(Eq(App(name, tuple(c[x] for x in k)), c[v]))
    return out


def with_constants(N, mapping):
    """Expand N by diagram constants c_i interpreted as mapping[i]."""
    sig = N.signature.extend(functions=[(c, 0) for c in constant_names(len(mapping))])
    fns = dict(N.functions)
    for i, name in enumerate(constant_names(len(mapping))):
        fns[name] = {(): mapping[i]}
    return FinStructure(sig, N.size, N.relations, fns)


# -- Morleyization -----------------------------------------------------------

def expand_morley(M, mr):
    """The expansion of M fixed by the Morleyization axioms.

    Skolem functions pick the least witness; with no witness they return
    their first argument (element 0 for constants).
    """
    rels = {n: set(ts) for n, ts in M.relations.items()}
    fns = dict(M.functions)
    for (phi, kind), name in mr.symbols.items():
        xs = free_vars(phi)
        if kind == "relation":
            rels[name] = set(definable_set(M, phi, xs))
        else:
            y, params = xs[0], xs[1:]
            table = {}
            for t in product(range(M.size), repeat=len(params)):
                a = dict(zip(params, t))
                value = t[0] if t else 0
                for e in range(M.size):
                    a[y] = e
                    if satisfies(M, phi, a):
                        value = e
                        break
                table[t] = value
            fns[name] = table
    return FinStructure(mr.signature, M.size, rels, fns)
