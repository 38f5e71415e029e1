"""Bounded elementarity via back-and-forth games.

``Game(A, B)`` decides, for tuples a in A and b in B, whether every Sigma_n
(or Pi_n) formula of quantifier rank <= r true of a in A is true of b in B,
and builds a witnessing formula when it is not. Formulas range over the
positive boolean closure of literals, quantifiers of the matching kind, and
(for n >= 2) the dual class one level down, which covers every prenex
formula of the class up to logical equivalence.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from .errors import TemplateCapExceeded
from .formula import App, Atom, Eq, Exists, Forall, Mem, Not, Var, MEMBERSHIP, conj, disj, size
from .syntax import to_text

NAME_POOL = ["x", "y", "z", "u", "v", "w"]
DEFAULT_CAP = 2_000_000


def var_name(i):
    return NAME_POOL[i] if i < len(NAME_POOL) else f"v{i}"


@lru_cache(maxsize=None)
def _literal_atoms(sig, m):
    """Positive atomic formulas over the first m pool variables, in the
    fixed order: equalities, relations in signature order, flat function
    equations. Each entry is (formula, evaluator)."""
    vs = [Var(var_name(i)) for i in range(m)]
    out = []
    for i in range(m):
        for j in range(i + 1, m):
            out.append((Eq(vs[j], vs[i]), ("eq", i, j)))
    for name, arity in sig.relations:
        for t in product(range(m), repeat=arity):
            args = tuple(vs[k] for k in t)
            if name == MEMBERSHIP and sig.membership:
                f = Mem(*args)
            else:
                f = Atom(name, args)
            out.append((f, ("rel", name, t)))
    for name, arity in sig.functions:
        for t in product(range(m), repeat=arity):
            for k in range(m):
                out.append((Eq(App(name, tuple(vs[i] for i in t)), vs[k]), ("fn", name, t, k)))
    return tuple(out)


def _eval_atom(M, lit, tup):
    if lit[0] == "eq":
        return tup[lit[1]] == tup[lit[2]]
    if lit[0] == "rel":
        return tuple(tup[k] for k in lit[2]) in M.relations[lit[1]]
    _, name, t, k = lit
    return M.functions[name][tuple(tup[i] for i in t)] == tup[k]


def _rank_key(f):
    return (size(f), to_text(f))


class Game:
    """Transfer checks from structure A to structure B."""

    def __init__(self, A, B, cap=DEFAULT_CAP):
        if A.signature != B.signature:
            raise ValueError("structures over different signatures")
        self.A, self.B = A, B
        self.sig = A.signature
        self.cap = cap
        self.steps = 0
        self._types = {}
        self._memo = {}
        self._wmemo = {}

    def atomic_type(self, M, tup):
        key = (id(M), tup)
        t = self._types.get(key)
        if t is None:
            t = tuple(_eval_atom(M, lit, tup) for _, lit in _literal_atoms(self.sig, len(tup)))
            self._types[key] = t
        return t

    def literals_true(self, M, tup):
        """Literals (atoms or negated atoms) true of tup in M, sorted by (size, text)."""
        atoms = _literal_atoms(self.sig, len(tup))
        out = []
        for (f, _), v in zip(atoms, self.atomic_type(M, tup)):
            out.append(f if v else Not(f))
        return sorted(out, key=_rank_key)

    def _tick(self):
        self.steps += 1
        if self.steps > self.cap:
            raise TemplateCapExceeded(f"game exceeded {self.cap} positions")

    # -- decision ------------------------------------------------------------

    def holds(self, mode, n, r, a, b):
        """True iff every formula of class (mode, n) and rank <= r true at a
        in A is true at b in B. mode is "E" (Sigma) or "A" (Pi)."""
        key = (mode, n, r, a, b)
        v = self._memo.get(key)
        if v is not None:
            return v
        self._tick()
        v = self._decide(mode, n, r, a, b)
        self._memo[key] = v
        return v

    def _decide(self, mode, n, r, a, b):
        if self.atomic_type(self.A, a) != self.atomic_type(self.B, b):
            return False
        if n == 0 or r == 0:
            return True
        dual = "A" if mode == "E" else "E"
        if n >= 2 and not self.holds(dual, n - 1, r, a, b):
            return False
        if mode == "E":
            return all(any(self.holds(mode, n, r - 1, a + (x,), b + (y,))
                           for y in range(self.B.size))
                       for x in range(self.A.size))
        return all(any(self.holds(mode, n, r - 1, a + (x,), b + (y,))
                       for x in range(self.A.size))
                   for y in range(self.B.size))

    # -- witnesses -----------------------------------------------------------

    def witness(self, mode, n, r, a, b):
        """A formula of class (mode, n), rank <= r, true at a in A and false
        at b in B; None when the transfer holds."""
        if self.holds(mode, n, r, a, b):
            return None
        key = (mode, n, r, a, b)
        if key not in self._wmemo:
            self._wmemo[key] = self._build(mode, n, r, a, b)
        return self._wmemo[key]

    def _build(self, mode, n, r, a, b):
        ta, tb = self.atomic_type(self.A, a), self.atomic_type(self.B, b)
        if ta != tb:
            cands = [f for f in self.literals_true(self.A, a)
                     if not self._true_in_b(f, b)]
            return cands[0]
        dual = "A" if mode == "E" else "E"
        if n >= 2 and not self.holds(dual, n - 1, r, a, b):
            return self.witness(dual, n - 1, r, a, b)
        m = len(a)
        z = var_name(m)
        if mode == "E":
            for x in range(self.A.size):
                ys = [y for y in range(self.B.size)]
                if any(self.holds(mode, n, r - 1, a + (x,), b + (y,)) for y in ys):
                    continue
                parts = self._cover(mode, n, r - 1, a + (x,), [b + (y,) for y in ys], side="B")
                return Exists(z, conj(*parts))
        else:
            for y in range(self.B.size):
                xs = list(range(self.A.size))
                if any(self.holds(mode, n, r - 1, a + (x,), b + (y,)) for x in xs):
                    continue
                parts = self._cover(mode, n, r - 1, [a + (x,) for x in xs], b + (y,), side="A")
                return Forall(z, disj(*parts))
        raise AssertionError("transfer failed without a failing move")

    def _true_in_b(self, f, b):
        from .structures import satisfies
        return satisfies(self.B, f, {var_name(i): v for i, v in enumerate(b)})

    def _true_in_a(self, f, a):
        from .structures import satisfies
        return satisfies(self.A, f, {var_name(i): v for i, v in enumerate(a)})

    def _cover(self, mode, n, r, a, b, side):
        """Smallest found family of formulas that jointly separate.

        side "B": a is one tuple of A, b a list of tuples of B; each chosen
        formula is true at a and the conjunction is false at every b.
        side "A": dually, a list of A-tuples, one B-tuple; the disjunction is
        true at every a and each formula is false at b.
        """
        if side == "B":
            targets = b
            if r == 0:
                cands = self.literals_true(self.A, a)
            else:
                cands = sorted({self.witness(mode, n, r, a, t) for t in targets}, key=_rank_key)
            hits = [frozenset(i for i, t in enumerate(targets) if not self._true_in_b(f, t))
                    for f in cands]
        else:
            targets = a
            if r == 0:
                pool = set()
                for t in targets:
                    pool.update(self.literals_true(self.A, t))
                cands = sorted((f for f in pool if not self._true_in_b(f, b)), key=_rank_key)
            else:
                cands = sorted({self.witness(mode, n, r, t, b) for t in targets}, key=_rank_key)
            hits = [frozenset(i for i, t in enumerate(targets) if self._true_in_a(f, t))
                    for f in cands]
        need = frozenset(range(len(targets)))
        chosen = _min_cover(hits, need, exact=(r == 0))
        return [cands[i] for i in sorted(chosen, key=lambda i: _rank_key(cands[i]))]


def _min_cover(hits, need, exact):
    useful = [i for i, h in enumerate(hits) if h]
    if exact:
        for k in range(1, len(need) + 1):
            for combo in combinations(useful, k):
                covered = frozenset().union(*(hits[i] for i in combo))
                if covered >= need:
                    return list(combo)
    chosen, covered = [], frozenset()
    while covered < need:
        best = max(useful, key=lambda i: (len(hits[i] - covered), -i))
        if not hits[best] - covered:
            raise AssertionError("no cover exists")
        chosen.append(best)
        covered |= hits[best]
    return chosen


@dataclass
class ElementarityReport:
    verdict: str  # "not-refuted-up-to-bound" or "refuted"
    witness: object = None
    assignment: dict = None
    true_in: str = None  # "source" or "target"

    @property
    def ok(self):
        return self.verdict != "refuted"

    def to_json(self):
        out = {"verdict": self.verdict}
        if self.witness is not None:
            out.update(witness=to_text(self.witness), assignment=self.assignment,
                       true_in=self.true_in)
        return out


def is_elementary_up_to(M, N, e, level, qrank, max_params=3, cap=DEFAULT_CAP):
    """Check that formulas of class ``level`` (a LevyClass) with rank <=
    qrank and <= max_params free variables transfer along the embedding e
    in both directions. Delta0 means quantifier-free."""
    mapping = e.map if hasattr(e, "map") else tuple(e)
    n = level.n
    mode = "A" if level.kind == "Pi" else "E"
    up, down = Game(M, N, cap), Game(N, M, cap)
    for k in range(max_params + 1):
        for a in product(range(M.size), repeat=k):
            b = tuple(mapping[x] for x in a)
            names = {var_name(i): v for i, v in enumerate(a)}
            w = up.witness(mode, n, qrank, a, b)
            if w is not None:
                return ElementarityReport("refuted", w, names, "source")
            w = down.witness(mode, n, qrank, b, a)
            if w is not None:
                return ElementarityReport("refuted", w, names, "target")
    return ElementarityReport("not-refuted-up-to-bound")
