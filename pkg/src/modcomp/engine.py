"""Bounded model-companionship checks over enumerated classes of models."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product

from .elementary import DEFAULT_CAP, Game, var_name
from .enumerate import enumerate_structures
from .errors import TemplateCapExceeded
from .formula import (
    Atom, Eq, Exists, Forall, Mem, Not, Or, Var, MEMBERSHIP, conj, disj,
    exists_many, forall_many, free_vars, size,
)
from .morley import morleyize
from .structures import enumerate_embeddings, expand_morley, satisfies
from .syntax import to_text

MAX_PARAMS = 2
TEMPLATE_CAP = 500_000


@dataclass
class BoundedClass:
    signature: object
    axioms: list
    size: int
    models: list

    def index(self, M):
        for i, N in enumerate(self.models):
            if N == M:
                return i
        raise ValueError("structure is not a listed model of the class")

    def to_json(self):
        return {
            "signature": self.signature.to_json(),
            "axioms": [to_text(a) for a in self.axioms],
            "size": self.size,
            "models": [M.to_json() for M in self.models],
        }


def build_class(sig, axioms, n):
    return BoundedClass(sig, list(axioms), n, enumerate_structures(sig, n, axioms))


def class_from_models(sig, models, n, axioms=()):
    return BoundedClass(sig, list(axioms), n, list(models))


# -- existential closedness --------------------------------------------------

@dataclass
class EcReport:
    index: int
    verdict: str  # "ec-within-bounds", "refuted" or "boundary-vacuous"
    extension: int = None
    embedding: tuple = None
    witness: object = None
    parameters: dict = None
    refuting_extensions: list = field(default_factory=list)

    def to_json(self):
        out = {"model": self.index, "verdict": self.verdict}
        if self.verdict == "refuted":
            out.update(extension=self.extension, embedding=list(self.embedding),
                       witness=to_text(self.witness), parameters=self.parameters,
                       refuting_extensions=self.refuting_extensions)
        return out


def _proper_extensions(M, C):
    """(index, N, embeddings) for every N in C strictly larger than M that M embeds in."""
    out = []
    for j, N in enumerate(C.models):
        if N.size <= M.size:
            continue
        es = enumerate_embeddings(M, N)
        if es:
            out.append((j, N, es))
    return out


def _reflection_failures(M, ext, p, r, cap):
    """Sigma_1 formulas of rank r with p parameters that hold in some
    extension at the image of the parameters but fail in M."""
    found = []
    for j, N, es in ext:
        game = Game(N, M, cap)
        for e in es:
            for a in product(range(M.size), repeat=p):
                b = tuple(e.map[x] for x in a)
                if not game.holds("E", 1, r, b, a):
                    w = game.witness("E", 1, r, b, a)
                    found.append(((size(w), to_text(w), j, e.map, a), w, j, e, a))
    return found


def is_ec_in_class(M, C, qrank, max_params=MAX_PARAMS, cap=DEFAULT_CAP, index=None):
    """Check that every Sigma_1 formula (rank <= qrank, <= max_params
    parameters) true in an extension inside C already holds in M."""
    if index is None:
        index = C.index(M)
    if M.size >= C.size:
        return EcReport(index, "boundary-vacuous")
    ext = _proper_extensions(M, C)
    for p in range(max_params + 1):
        for r in range(1, qrank + 1):
            found = _reflection_failures(M, ext, p, r, cap)
            if not found:
                continue
            key, w, j, e, a = min(found, key=lambda t: t[0])
            params = {var_name(i): v for i, v in enumerate(a)}
            # every extension that refutes within the full bounds
            refuting = sorted({t[2] for t in found} | _refuting_indices(M, ext, qrank, max_params, cap))
            report = EcReport(index, "refuted", j, e.map, w, params, refuting)
            _verify_ec_witness(M, C.models[j], report)
            return report
    return EcReport(index, "ec-within-bounds")


def _refuting_indices(M, ext, qrank, max_params, cap):
    out = set()
    for j, N, es in ext:
        game = Game(N, M, cap)
        if any(not game.holds("E", 1, qrank, tuple(e.map[x] for x in a), a)
               for e in es for p in range(max_params + 1)
               for a in product(range(M.size), repeat=p)):
            out.add(j)
    return out


def _verify_ec_witness(M, N, report):
    a = report.parameters
    b = {k: report.embedding[v] for k, v in a.items()}
    if not (satisfies(N, report.witness, b) and not satisfies(M, report.witness, a)):
        raise AssertionError("ec refutation witness does not re-evaluate as claimed")


def _ec_task(args):
    i, C, qrank, max_params = args
    return is_ec_in_class(C.models[i], C, qrank, max_params, index=i)


def ec_models(C, qrank, max_params=MAX_PARAMS, jobs=1):
    """One EcReport per model of C, in class order."""
    tasks = [(i, C, qrank, max_params) for i in range(len(C.models))]
    if jobs and jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_ec_task, tasks))
    return [_ec_task(t) for t in tasks]


# -- Robinson's test ---------------------------------------------------------

@dataclass
class ModelCompleteReport:
    passed: bool
    reports: list
    counterexample: EcReport = None

    def to_json(self):
        out = {"passed": self.passed, "verdicts": [r.verdict for r in self.reports]}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_json()
        return out


def check_model_complete_bounded(C, qrank, max_params=MAX_PARAMS, jobs=1):
    reports = ec_models(C, qrank, max_params, jobs)
    bad = [r for r in reports if r.verdict == "refuted"]
    return ModelCompleteReport(not bad, reports, bad[0] if bad else None)


# -- templates ---------------------------------------------------------------

def _atoms(sig, names, ordered_eq=True):
    """Atomic formulas over the given variable names: equalities between
    distinct variables, then relations in signature order."""
    vs = [Var(n) for n in names]
    out = []
    for i, j in combinations(range(len(vs)), 2):
        out.append(Eq(vs[i], vs[j]) if ordered_eq else Eq(vs[j], vs[i]))
    for name, arity in sig.relations:
        for t in product(range(len(vs)), repeat=arity):
            args = tuple(vs[k] for k in t)
            out.append(Mem(*args) if name == MEMBERSHIP and sig.membership else Atom(name, args))
    return out


def _literals(sig, names):
    out = []
    for a in _atoms(sig, names):
        out.append(a)
        out.append(Not(a))
    return out


def _mentions(f):
    return set(free_vars(f))


class _TruthTable:
    """Truth of formulas over all assignments of ``names`` in every model,
    packed as one int bitmask per model."""

    def __init__(self, models, names):
        self.models = models
        self.names = list(names)
        self.rows = [list(product(range(M.size), repeat=len(self.names))) for M in models]
        self.full = [(1 << len(r)) - 1 for r in self.rows]
        self._cache = {}

    def mask(self, f):
        m = self._cache.get(f)
        if m is None:
            m = []
            for M, rows in zip(self.models, self.rows):
                bits = 0
                for i, t in enumerate(rows):
                    if satisfies(M, f, dict(zip(self.names, t))):
                        bits |= 1 << i
                m.append(bits)
            m = tuple(m)
            self._cache[f] = m
        return m


def _clauses(lits, max_len, must_use):
    """Disjunctions of up to max_len literals mentioning every name in must_use."""
    out = []
    for k in range(1, max_len + 1):
        for combo in combinations(lits, k):
            used = set()
            for lit in combo:
                used |= _mentions(lit)
            if must_use <= used:
                f = disj(*sorted(combo, key=to_text))
                out.append(f)
    return out


# -- Pi_1 separation ---------------------------------------------------------

@dataclass
class SeparationReport:
    status: str  # "separated", "none", "none-within-bounds" or "unknown-within-bounds"
    separator: object = None
    embedding: dict = None

    def to_json(self):
        out = {"status": self.status}
        if self.separator is not None:
            out["separator"] = to_text(self.separator)
        if self.embedding is not None:
            out["embedding"] = self.embedding
        return out


def _universal_sentences(sig, k, max_literals):
    names = [var_name(i) for i in range(k)]
    lits = _literals(sig, names)
    return names, [(c, forall_many(names, c)) for c in _clauses(lits, max_literals, set(names))]


def pi1_separator(CT, CS, qrank, max_vars, max_literals=3, cap=TEMPLATE_CAP):
    """A universal sentence true in every model of CT and false in every
    model of CS; otherwise cite an embedding of a CS model into a CT model."""
    if CT.signature != CS.signature:
        raise ValueError("classes over different signatures")
    sig = CT.signature
    seen = 0
    best = None
    for k in range(1, min(qrank, max_vars) + 1):
        names, cands = _universal_sentences(sig, k, max_literals)
        seen += len(cands)
        if seen > cap:
            return SeparationReport("unknown-within-bounds")
        tt = _TruthTable(CT.models, names)
        ts = _TruthTable(CS.models, names)
        for clause, sentence in cands:
            mt, ms = tt.mask(clause), ts.mask(clause)
            if all(m == f for m, f in zip(mt, tt.full)) and all(m != f for m, f in zip(ms, ts.full)):
                key = (size(sentence), to_text(sentence))
                if best is None or key < best[0]:
                    best = (key, sentence)
        if best is not None:
            return SeparationReport("separated", best[1])
    for i, S in enumerate(CS.models):
        for j, T in enumerate(CT.models):
            if S.signature != T.signature or S.size > T.size:
                continue
            es = enumerate_embeddings(S, T, limit=1)
            if es:
                return SeparationReport("none", embedding={
                    "source": i, "target": j, "map": list(es[0].map)})
    return SeparationReport("none-within-bounds")


# -- universal equivalents ---------------------------------------------------

def find_universal_equivalent(phi, C, qrank, max_literals=2):
    """A universal formula with the free variables of phi, equivalent to phi
    on every model of C, or None."""
    xs = free_vars(phi)
    pool = [n for n in ["x", "y", "z", "u", "v", "w"] + [f"v{i}" for i in range(20)] if n not in xs]
    target = _TruthTable(C.models, xs)
    goal = target.mask(phi)
    trivial = [Eq(Var(x), Var(x)) for x in xs[:1]]
    for j in range(qrank + 1):
        bound = pool[:j]
        names = xs + bound
        lits = trivial + _literals(C.signature, names)
        cands = _clauses(lits, max_literals, set(bound))
        cands = sorted(set(cands), key=lambda c: (size(c), to_text(c)))
        tt = _TruthTable(C.models, names)
        width = len(C.models)
        for c in cands:
            if not set(free_vars(c)) <= set(names):
                continue
            m = tt.mask(c)
            got = tuple(_project_forall(m[i], tt.rows[i], len(xs), C.models[i].size) for i in range(width))
            if got == goal:
                return forall_many(bound, c)
    return None


def _project_forall(bits, rows, nfree, n):
    """Mask over free-variable tuples where the formula holds for all values
    of the trailing bound variables."""
    out = 0
    nb = len(rows[0]) - nfree if rows else 0
    block = n ** nb
    for i in range(len(rows) // block if block else 0):
        chunk = (bits >> (i * block)) & ((1 << block) - 1)
        if chunk == (1 << block) - 1:
            out |= 1 << i
    return out


# -- Kaiser hull -------------------------------------------------------------

@dataclass
class HullReport:
    sentences: list
    survivors: list
    vacuous: bool
    checked: int

    def to_json(self):
        return {"sentences": [to_text(s) for s in self.sentences],
                "survivors": self.survivors, "vacuous": self.vacuous,
                "templates_checked": self.checked}


def pi2_templates(sig, max_universal, max_existential, max_literals=2):
    """Sentences forall xs exists zs (conjunction of literals) using every
    variable, ordered by (variable count, existential count, size, text)."""
    out = []
    for total in range(1, max_universal + max_existential + 1):
        for j in range(0, max_existential + 1):
            k = total - j
            if k < 0 or k > max_universal:
                continue
            names = [var_name(i) for i in range(total)]
            lits = _literals(sig, names)
            group = []
            for n in range(1, max_literals + 1):
                for combo in combinations(lits, n):
                    used = set()
                    for lit in combo:
                        used |= _mentions(lit)
                    if used != set(names):
                        continue
                    matrix = conj(*sorted(combo, key=to_text))
                    group.append(forall_many(names[:k], exists_many(names[k:], matrix)))
            group.sort(key=lambda s: (size(s), to_text(s)))
            out.extend(group)
    return out


def kaiser_hull_pi2(C, qrank, max_vars, max_params=MAX_PARAMS, jobs=1, reports=None):
    """Pi_2 templates true in every ec-within-bounds model of C and in at
    least one model of C. Boundary-size models do not count as survivors;
    when no model survives the hull is reported as vacuous."""
    if reports is None:
        reports = ec_models(C, qrank, max_params, jobs)
    survivors = [r.index for r in reports if r.verdict == "ec-within-bounds"]
    templates = pi2_templates(C.signature, max_vars, qrank)
    if len(templates) > TEMPLATE_CAP:
        raise TemplateCapExceeded(f"{len(templates)} hull templates")
    out = []
    for s in templates:
        if not all(satisfies(C.models[i], s) for i in survivors):
            continue
        if not any(satisfies(M, s) for M in C.models):
            continue
        out.append(s)
    return HullReport(out, survivors, not survivors, len(templates))


# -- rank-1 Morleyization of a class -----------------------------------------

def rank1_selection(C, max_params=MAX_PARAMS):
    """Existential formulas "exists z tau" for every complete atomic type tau
    over p parameters and one more variable realized in some model of C."""
    sig = C.signature
    selected = []
    seen = set()
    for p in range(max_params + 1):
        names = [var_name(i) for i in range(p + 1)]
        atoms = _atoms(sig, names)
        for M in C.models:
            for t in product(range(M.size), repeat=p + 1):
                env = dict(zip(names, t))
                lits = tuple(a if satisfies(M, a, env) else Not(a) for a in atoms)
                if lits in seen:
                    continue
                seen.add(lits)
                selected.append((Exists(names[-1], conj(*lits)), "relation"))
    return selected


def morleyize_class(C, max_params=MAX_PARAMS):
    """Expand every model of C by the rank-1 Morleyization."""
    mr = morleyize(C.signature, rank1_selection(C, max_params))
    models = [expand_morley(M, mr) for M in C.models]
    return mr, BoundedClass(mr.signature, C.axioms + mr.axioms, C.size, models)
