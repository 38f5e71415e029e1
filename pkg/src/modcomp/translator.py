"""Compiling membership formulas into formulas about codes.

``translate`` maps a formula over {in, =} to one over {WFE, EQ, MEM} whose
variables range over binary relations on {0, ..., m-1}:

    x = y       ->  WFE(x) and (WFE(y) and EQ(x, y))
    x in y      ->  WFE(x) and (WFE(y) and MEM(x, y))
    exists y p  ->  exists y (p' and WFE(y))
    forall y p  ->  forall y (WFE(y) -> p')

and commutes with the boolean connectives. Bounded quantifiers are expanded
to their guarded form first. Verification compares the result, evaluated in
the structure of all relations, with the original formula evaluated over
the sets whose transitive closure has fewer than m elements.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product

import numpy as np

from .codes import PointedCode, collapse, enumerate_codes, encode, is_wfe
from .errors import GuardExceeded, TranslationError
from .formula import (
    And, Atom, BExists, BForall, Eq, Exists, Forall, Iff, Implies, Mem, Not, Or,
    Signature, Var, conj, desugar_bounded, forall_many, free_vars, size,
)
from .hf import sets_below_tc, set_eval, to_literal
from .normal import LevyClass, levy_classify
from .syntax import parse, to_text
from .tensor_eval import Table, evaluate, pair_table, to_dense

CODE_SIG = Signature((("WFE", 1), ("EQ", 2), ("MEM", 2)))
HYBRID_SIG = Signature((("Cod", 2),), membership="in")
MUTATIONS = (None, "drop-exists-guard", "drop-eq-guards", "drop-mem-guards")


def _wfe(v):
    return Atom("WFE", (v,))


def translate(f, mutation=None):
    """The code formula of a membership formula (see module docstring).

    ``mutation`` removes one family of guards; it exists to show that each
    guard is needed."""
    if mutation not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutation!r}")
    return _tr(desugar_bounded(f), mutation)


def _var(t):
    if not isinstance(t, Var):
        raise TranslationError("only variables may occur as terms")
    return t


def _tr(f, mut):
    if isinstance(f, (Eq, Mem)):
        x, y = _var(f.left), _var(f.right)
        pred = "EQ" if isinstance(f, Eq) else "MEM"
        core = Atom(pred, (x, y))
        if (mut == "drop-eq-guards" and pred == "EQ") or (mut == "drop-mem-guards" and pred == "MEM"):
            return core
        return And((_wfe(x), And((_wfe(y), core))))
    if isinstance(f, Atom):
        raise TranslationError(f"relation symbol {f.rel!r} is outside the membership language")
    if isinstance(f, Not):
        return Not(_tr(f.body, mut))
    if isinstance(f, And):
        return And(tuple(_tr(a, mut) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(_tr(a, mut) for a in f.args))
    if isinstance(f, Implies):
        return Implies(_tr(f.left, mut), _tr(f.right, mut))
    if isinstance(f, Iff):
        return Iff(_tr(f.left, mut), _tr(f.right, mut))
    if isinstance(f, Exists):
        body = _tr(f.body, mut)
        if mut == "drop-exists-guard":
            return Exists(f.var, body)
        return Exists(f.var, And((body, _wfe(Var(f.var)))))
    if isinstance(f, Forall):
        body = _tr(f.body, mut)
        if mut == "drop-exists-guard":
            return Forall(f.var, body)
        return Forall(f.var, Implies(_wfe(Var(f.var)), body))
    if isinstance(f, (BForall, BExists)):
        return _tr(desugar_bounded(f), mut)
    raise TranslationError(f"unsupported node {f!r}")


def is_guarded(theta):
    """Does every quantifier carry a WFE guard and every EQ/MEM atom sit in a
    WFE-guarded conjunction, as the unmutated translation produces?"""

    def atom_ok(g):
        if isinstance(g, Atom) and g.rel == "WFE":
            return True
        if not isinstance(g, And) or len(g.args) != 2:
            return False
        a, rest = g.args
        if not (isinstance(rest, And) and len(rest.args) == 2):
            return False
        b, core = rest.args
        return (isinstance(core, Atom) and core.rel in ("EQ", "MEM")
                and a == _wfe(core.args[0]) and b == _wfe(core.args[1]))

    def go(g):
        if isinstance(g, Atom):
            return g.rel == "WFE"
        if atom_ok(g) and not (isinstance(g, Atom)):
            return True
        if isinstance(g, Exists):
            b = g.body
            return (isinstance(b, And) and len(b.args) == 2 and b.args[1] == _wfe(Var(g.var))
                    and go(b.args[0]))
        if isinstance(g, Forall):
            b = g.body
            return isinstance(b, Implies) and b.left == _wfe(Var(g.var)) and go(b.right)
        if isinstance(g, Not):
            return go(g.body)
        if isinstance(g, (And, Or)):
            return all(go(a) for a in g.args)
        if isinstance(g, (Implies, Iff)):
            return go(g.left) and go(g.right)
        return False

    return go(theta)


# -- the structure of all relations on m nodes -------------------------------

def _raw_key(nodes, pairs, top):
    """Isomorphism-invariant key of (nodes, pairs) pointed at top."""
    others = sorted(n for n in nodes if n != top)
    best = None
    for perm in permutations(range(1, len(others) + 1)):
        lab = {top: 0}
        lab.update(zip(others, perm))
        k = tuple(sorted((lab[u], lab[v]) for u, v in pairs))
        if best is None or k < best:
            best = k
    return (len(nodes), best)


@lru_cache(maxsize=None)
def raw_key(rel):
    """Key of a relation as a pointed structure on its field plus 0."""
    nodes = {0}
    for u, v in rel:
        nodes.add(u)
        nodes.add(v)
    return _raw_key(nodes, rel, 0)


@lru_cache(maxsize=None)
def member_keys(rel):
    """Keys of the substructures below each node related to 0."""
    out = set()
    for alpha in sorted({u for u, v in rel if v == 0}):
        below = {alpha}
        frontier = [alpha]
        while frontier:
            w = frontier.pop()
            for u, v in rel:
                if v == w and u not in below:
                    below.add(u)
                    frontier.append(u)
        sub = frozenset((u, v) for u, v in rel if u in below and v in below)
        out.add(_raw_key(below, sub, alpha))
    return frozenset(out)


def relation_is_wfe(rel):
    """Valid code whose nodes form an initial segment {0, ..., d-1}."""
    nodes = {0}
    for u, v in rel:
        nodes.add(u)
        nodes.add(v)
    d = len(nodes)
    if nodes != set(range(d)):
        return False
    return is_wfe(PointedCode(d, rel))


@dataclass(frozen=True)
class Element:
    """A relation on m nodes, or the stand-in for every non-code (rel None)."""
    rel: frozenset = None

    @property
    def wfe(self):
        return self.rel is not None and relation_is_wfe(self.rel)

    def key(self):
        return None if self.rel is None else raw_key(self.rel)

    def members(self):
        return frozenset() if self.rel is None else member_keys(self.rel)


NONCODE = Element(None)


class CodeStructure:
    """Relations on {0..m-1}: WFE holds of valid codes, EQ of pointed
    isomorphic relations and MEM when the first is isomorphic to the part
    below some node related to 0 in the second."""

    def __init__(self, m):
        if m < 1 or m > 5:
            raise GuardExceeded("code structures are limited to 1 <= m <= 5")
        self.m = m
        self._codes = None
        self._classes = None

    @property
    def universe_size(self):
        return 2 ** (self.m * self.m)

    def relations(self):
        if self.m > 4:
            raise GuardExceeded("the full universe is only materialized for m <= 4")
        pairs = list(product(range(self.m), repeat=2))
        for mask in range(1 << len(pairs)):
            yield frozenset(p for i, p in enumerate(pairs) if mask >> i & 1)

    def codes(self):
        """All WFE elements, by domain then mask."""
        if self._codes is None:
            self._codes = [Element(c.rel) for c in enumerate_codes(self.m)]
        return self._codes

    def representatives(self):
        """One code per coded set, in Ackermann order of the set."""
        return [Element(encode(a).rel) for a in sets_below_tc(self.m)]

    def classes(self):
        """One element per combination of (key, WFE) over the full universe;
        WFE, EQ and MEM only depend on this pair."""
        if self._classes is None:
            seen = {}
            for rel in self.relations():
                e = Element(rel)
                seen.setdefault((e.key(), e.wfe), e)
            self._classes = list(seen.values())
        return self._classes

    def wfe_extension(self):
        return [e for e in (Element(r) for r in self.relations()) if e.wfe]

    def collapse(self, e):
        d = len({0} | {u for p in e.rel for u in p})
        return collapse(PointedCode(d, e.rel))


def build_code_structure(m):
    if m > 4:
        raise GuardExceeded("materialization is limited to m <= 4; use streaming verification")
    s = CodeStructure(m)
    s.classes()
    return s


def code_atom_table(atom, doms):
    name = atom.rel
    if name == "WFE":
        (x,) = atom.args
        return Table((x.name,), np.array([e.wfe for e in doms[x.name]], dtype=bool))
    x, y = atom.args[0].name, atom.args[1].name
    if name == "EQ":
        return pair_table(x, y, doms, _eq_matrix)
    if name == "MEM":
        return pair_table(x, y, doms, _mem_matrix)
    raise TranslationError(f"unknown code predicate {name!r}")


def _eq_matrix(xs, ys):
    kx = [e.key() if e.rel is not None else ("noncode",) for e in xs]
    ky = [e.key() if e.rel is not None else ("noncode",) for e in ys]
    return np.array([[a == b for b in ky] for a in kx], dtype=bool).reshape(len(xs), len(ys))


def _mem_matrix(xs, ys):
    kx = [e.key() for e in xs]
    my = [e.members() for e in ys]
    return np.array([[a is not None and a in m for m in my] for a in kx],
                    dtype=bool).reshape(len(xs), len(ys))


def set_atom_table(atom, doms):
    x, y = atom.left, atom.right
    if not (isinstance(x, Var) and isinstance(y, Var)):
        raise TranslationError("only variables may occur as terms")
    if isinstance(atom, Eq):
        fn = lambda xs, ys: np.array([[a == b for b in ys] for a in xs], dtype=bool).reshape(len(xs), len(ys))
    elif isinstance(atom, Mem):
        fn = lambda xs, ys: np.array([[a in b for b in ys] for a in xs], dtype=bool).reshape(len(xs), len(ys))
    else:
        raise TranslationError(f"relation {atom.rel!r} outside the membership language")
    return pair_table(x.name, y.name, doms, fn)


# -- verification ------------------------------------------------------------

@dataclass
class TranslationReport:
    formula: str
    m: int
    passed: bool
    semantics: str
    assignments: int
    counterexample: dict = None
    full_universe: bool = None
    mutation: str = None
    note: str = field(default="both sides relativized: sets with TC-size < m, relations on m nodes")

    def to_json(self):
        out = {"formula": self.formula, "m": self.m, "passed": self.passed,
               "semantics": self.semantics, "assignments": self.assignments,
               "relativization": self.note}
        if self.mutation:
            out["mutation"] = self.mutation
        if self.full_universe is not None:
            out["full_universe_check"] = self.full_universe
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def is_positive(f):
    """Built from atoms with and, or and exists only."""
    if isinstance(f, (Eq, Mem)):
        return True
    if isinstance(f, (And, Or)):
        return all(is_positive(a) for a in f.args)
    if isinstance(f, Exists):
        return is_positive(f.body)
    if isinstance(f, BExists):
        return is_positive(f.body)
    return False


def _cells(domain_sizes):
    n = 1
    for s in domain_sizes:
        n *= s
    return n


def choose_semantics(theta, structure, nfree, free_size, budget=20_000_000):
    """"exact" ranges quantifiers over every (key, WFE) class of relations;
    "guarded" ranges them over the codes plus one non-code stand-in, which
    is only sound for guarded formulas."""
    nbound = len({v for v in _bound_vars(theta)})
    if structure.m <= 3:
        est = _cells([len(structure.classes())] * min(nbound, 3) + [free_size] * nfree)
        if est <= budget:
            return "exact"
    if is_guarded(theta):
        return "guarded"
    raise GuardExceeded("unguarded formula is too large for exact evaluation at this m")


def _bound_vars(f):
    if isinstance(f, (Forall, Exists, BForall, BExists)):
        yield f.var
    for c in _children(f):
        yield from _bound_vars(c)


def _children(f):
    if isinstance(f, Not):
        return (f.body,)
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, (Implies, Iff)):
        return (f.left, f.right)
    if isinstance(f, (Forall, Exists, BForall, BExists)):
        return (f.body,)
    return ()


def verify_translation(f, m, mutation=None, free_domain=None, semantics=None,
                       full_universe=None):
    """Compare f over sets with TC-size < m against its translation over
    codes on m nodes, at every assignment of codes to the free variables.

    ``free_domain`` may restrict the sets used for free variables (all their
    codes are used); by default every set with TC-size < m is used.
    """
    theta = translate(f, mutation)
    xs = free_vars(desugar_bounded(f))
    S = CodeStructure(m)
    sets = sets_below_tc(m)
    free_sets = sets if free_domain is None else list(free_domain)
    if m <= 4:
        wanted = {a.code for a in free_sets}
        free_codes = [e for e in S.codes() if S.collapse(e).code in wanted]
    else:
        free_codes = [Element(encode(a).rel) for a in free_sets]
    if semantics is None:
        semantics = choose_semantics(theta, S, len(xs), len(free_codes))
    if semantics == "exact":
        qdom = S.classes()
    elif semantics == "guarded":
        if not is_guarded(theta):
            raise TranslationError("guarded semantics needs a guarded formula")
        qdom = (S.codes() if m <= 4 else S.representatives()) + [NONCODE]
    else:
        raise ValueError(semantics)
    code_side = evaluate(theta, {x: free_codes for x in xs}, code_atom_table, qdom)
    set_side = evaluate(f, {x: free_sets for x in xs}, set_atom_table, sets)
    code_arr = _dense(code_side, xs)
    set_arr = _dense(set_side, xs)
    index = {a.code: i for i, a in enumerate(free_sets)}
    proj = [np.array([index[S.collapse(e).code] for e in free_codes], dtype=np.intp)] * len(xs)
    expected = set_arr[np.ix_(*proj)] if xs else set_arr
    diff = np.argwhere(code_arr != expected) if xs else ([()] if bool(code_arr) != bool(expected) else [])
    counter = None
    if len(diff):
        idx = tuple(int(i) for i in diff[0])
        assign = {x: to_literal(S.collapse(free_codes[i])) for x, i in zip(xs, idx)}
        codes = {x: [list(p) for p in sorted(free_codes[i].rel)] for x, i in zip(xs, idx)}
        counter = {"sets": assign, "codes": codes,
                   "membership_side": bool(expected[idx]) if xs else bool(expected),
                   "code_side": bool(code_arr[idx]) if xs else bool(code_arr)}
    report = TranslationReport(to_text(f), m, counter is None, semantics,
                               len(free_codes) ** len(xs), counter, mutation=mutation)
    if full_universe or (full_universe is None and is_positive(f) and m <= 3):
        ok, witness = full_universe_check(f, theta, S, xs)
        report.full_universe = ok
        if not ok:
            report.passed = False
            if report.counterexample is None:
                report.counterexample = witness
    return report


def _dense(t, xs):
    if set(t.vars) != set(xs):
        raise AssertionError(f"table over {t.vars}, expected {xs}")
    return to_dense(t, list(xs))


_FALSE = Exists("false_", Not(Eq(Var("false_"), Var("false_"))))


def _falsify(f, bad):
    """Replace atoms mentioning a variable in ``bad`` by a false sentence."""
    if isinstance(f, (Eq, Mem)):
        return _FALSE if {f.left.name, f.right.name} & bad else f
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, _falsify(f.body, bad - {f.var}))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_falsify(a, bad) for a in f.args))
    raise TranslationError(f"unexpected node in a positive formula: {f!r}")


def full_universe_check(f, theta, S, xs):
    """For formulas without negation the translation holds of a tuple of
    relations exactly when f holds of their sets, with every atom that
    mentions a non-code read as false."""
    classes = S.classes()
    code_side = evaluate(theta, {x: classes for x in xs}, code_atom_table, classes)
    arr = _dense(code_side, xs)
    sets = sets_below_tc(S.m)
    for idx in product(range(len(classes)), repeat=len(xs)):
        es = [classes[i] for i in idx]
        bad = {x for x, e in zip(xs, es) if not e.wfe}
        env = {x: S.collapse(e) for x, e in zip(xs, es) if e.wfe}
        want = set_eval(_falsify(desugar_bounded(f), bad), sets, env)
        if bool(arr[idx] if xs else arr) != want:
            return False, {"relations": {x: [list(p) for p in sorted(e.rel)] for x, e in zip(xs, es)},
                           "wfe": {x: e.wfe for x, e in zip(xs, es)},
                           "code_side": bool(arr[idx] if xs else arr), "expected": want}
    return True, None


# -- classification shift ----------------------------------------------------

def expand_definitions(theta):
    """Replace each code predicate by a schematic definition of its known
    complexity: WFE by a universal formula, EQ and MEM by existential ones.
    The matrices are fresh atoms; only the quantifier shape matters."""
    counter = iter(range(10 ** 9))

    def go(g):
        if isinstance(g, Atom):
            w = f"d{next(counter)}"
            body = Atom(g.rel + "_def", g.args + (Var(w),))
            return Forall(w, body) if g.rel == "WFE" else Exists(w, body)
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(go(a) for a in g.args))
        if isinstance(g, (Implies, Iff)):
            return type(g)(go(g.left), go(g.right))
        return type(g)(g.var, go(g.body))

    return go(theta)


def classification_shift(f):
    """Least Sigma and Pi levels of f (bounded quantifiers expanded) and of
    its translation with expanded definitions."""
    from .normal import levy_levels
    return {"source": levy_levels(desugar_bounded(f)),
            "translation": levy_levels(expand_definitions(translate(f)))}


# -- universal form ----------------------------------------------------------

def universal_form(f):
    """forall r1..rn ((Cod r1 x1) and ... -> (Theta_f r1 .. rn)) for a Sigma_1
    membership formula with free variables x1..xn."""
    cls = levy_classify(f)
    if not (cls.kind == "Delta0" or (cls.kind == "Sigma" and cls.n == 1)):
        raise TranslationError(f"universal form needs a Sigma_1 formula, got {cls}")
    xs = free_vars(f)
    rs = ["r"] if len(xs) == 1 else [f"r{i + 1}" for i in range(len(xs))]
    theta = Atom("Theta_f", tuple(Var(r) for r in rs))
    if not xs:
        return theta
    links = conj(*[Atom("Cod", (Var(r), Var(x))) for r, x in zip(rs, xs)])
    return forall_many(rs, Implies(links, theta))


def universal_form_signature(f):
    n = len(free_vars(f))
    return Signature((("Cod", 2), ("Theta_f", n)), membership="in")


def check_universal_form(f, m):
    """Evaluate the universal form with Cod read as "collapses to" and
    Theta_f as the translation over codes, and compare with f over the sets
    with TC-size < m."""
    universal_form(f)
    xs = free_vars(f)
    S = CodeStructure(m)
    codes = S.codes() if m <= 4 else S.representatives()
    sets = sets_below_tc(m)
    theta = translate(f)
    table = evaluate(theta, {x: codes for x in xs}, code_atom_table, codes + [NONCODE])
    theta_ext = _dense(table, xs)
    coll = [S.collapse(e).code for e in codes]
    bad = None
    for tup in product(range(len(sets)), repeat=len(xs)):
        target = [sets[i].code for i in tup]
        lhs = set_eval(desugar_bounded(f), sets, {x: sets[i] for x, i in zip(xs, tup)})
        rhs = True
        for ctup in product(range(len(codes)), repeat=len(xs)):
            if all(coll[c] == t for c, t in zip(ctup, target)):
                if not (theta_ext[ctup] if xs else theta_ext):
                    rhs = False
                    break
        if lhs != rhs:
            bad = {x: to_literal(sets[i]) for x, i in zip(xs, tup)}
            break
    return {"formula": to_text(f), "universal_form": to_text(universal_form(f)),
            "m": m, "passed": bad is None, "counterexample": bad,
            "theta_extension_size": int(np.count_nonzero(theta_ext))}


# -- a direct evaluator, for cross-checking the vectorized one ---------------

def naive_code_eval(theta, S, env, quantifier_domain):
    """Recursive evaluation of a code formula; slow, used only in tests."""

    def atom(g, env):
        vals = [env[a.name] for a in g.args]
        if g.rel == "WFE":
            return vals[0].wfe
        a, b = vals
        if g.rel == "EQ":
            return a.key() == b.key() if a.rel is not None and b.rel is not None else a == b
        return a.rel is not None and a.key() in b.members()

    def go(g, env):
        if isinstance(g, Atom):
            return atom(g, env)
        if isinstance(g, Not):
            return not go(g.body, env)
        if isinstance(g, And):
            return all(go(a, env) for a in g.args)
        if isinstance(g, Or):
            return any(go(a, env) for a in g.args)
        if isinstance(g, Implies):
            return not go(g.left, env) or go(g.right, env)
        if isinstance(g, Iff):
            return go(g.left, env) == go(g.right, env)
        vals = (go(g.body, {**env, g.var: e}) for e in quantifier_domain)
        return all(vals) if isinstance(g, Forall) else any(vals)

    return go(theta, dict(env))
