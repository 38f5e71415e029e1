"""Pointed codes: finite well-founded extensional relations with top 0.

A pair (u, v) in the relation says that node u stands for a member of the
set coded by node v. Collapsing node 0 gives the coded set.
"""
import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .errors import InvalidCode, GuardExceeded
from .hf import HFSet, hf_universe, tc_size, to_literal


@dataclass(frozen=True)
class PointedCode:
    domain: int
    rel: frozenset

    def __init__(self, domain, rel=()):
        object.__setattr__(self, "domain", int(domain))
        object.__setattr__(self, "rel", frozenset((int(u), int(v)) for u, v in rel))

    def preds(self, v):
        return sorted(u for u, w in self.rel if w == v)

    def to_json(self):
        return {"domain": self.domain, "rel": [list(p) for p in sorted(self.rel)]}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["domain"], [tuple(p) for p in data["rel"]])


def _has_cycle(c):
    succ = {v: [] for v in range(c.domain)}
    for u, v in c.rel:
        succ[u].append(v)
    state = [0] * c.domain  # 0 new, 1 on stack, 2 done
    for s in range(c.domain):
        if state[s]:
            continue
        stack = [(s, iter(succ[s]))]
        state[s] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state[nxt] == 1:
                return True
            elif state[nxt] == 0:
                state[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
    return False


def check_wfe(c):
    """(ok, reason). Clauses are checked in a fixed order and the first
    failing one is named."""
    if c.domain < 1:
        return False, "range: empty domain"
    for u, v in sorted(c.rel):
        if not (0 <= u < c.domain and 0 <= v < c.domain):
            return False, f"range: pair ({u},{v}) outside domain"
    field = {0}
    for u, v in c.rel:
        field.add(u)
        field.add(v)
    if len(field) != c.domain:
        junk = min(set(range(c.domain)) - field)
        return False, f"junk node: {junk} is outside the field"
    if _has_cycle(c):
        return False, "cycle"
    if any(u == 0 for u, _ in c.rel):
        return False, "top has a successor"
    reach = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for u in c.preds(v):
            if u not in reach:
                reach.add(u)
                frontier.append(u)
    if len(reach) != c.domain:
        bad = min(set(range(c.domain)) - reach)
        return False, f"unreachable: node {bad} does not reach 0"
    seen = {}
    for v in range(c.domain):
        key = tuple(c.preds(v))
        if key in seen:
            return False, f"extensionality: nodes {seen[key]},{v} share predecessor set"
        seen[key] = v
    return True, "ok"


def is_wfe(c):
    return check_wfe(c)[0]


def _require(c):
    ok, reason = check_wfe(c)
    if not ok:
        raise InvalidCode(reason)


def collapse_all(c):
    """The collapse of every node, as a list indexed by node."""
    _require(c)
    out = [None] * c.domain
    preds = [c.preds(v) for v in range(c.domain)]

    def go(v):
        if out[v] is None:
            out[v] = HFSet(go(u) for u in preds[v])
        return out[v]

    for v in range(c.domain):
        go(v)
    return out


@lru_cache(maxsize=1 << 16)
def collapse(c):
    return collapse_all(c)[0]


def encode(a):
    """Canonical code of a: breadth-first from the top, members visited in
    Ackermann order."""
    label = {a.code: 0}
    order = [a]
    rel = []
    i = 0
    while i < len(order):
        x = order[i]
        for b in x.elements:
            if b.code not in label:
                label[b.code] = len(order)
                order.append(b)
            rel.append((label[b.code], label[x.code]))
        i += 1
    return PointedCode(len(order), rel)


def subcode(c, alpha):
    """The code of node alpha: nodes below alpha, relabelled breadth-first
    with alpha as the new top."""
    label = {alpha: 0}
    order = [alpha]
    i = 0
    while i < len(order):
        for u in c.preds(order[i]):
            if u not in label:
                label[u] = len(order)
                order.append(u)
        i += 1
    rel = [(label[u], label[v]) for u, v in c.rel if u in label and v in label]
    return PointedCode(len(order), rel)


def pointed_isomorphic(c1, c2):
    """Search for a bijection fixing 0 that preserves and reflects the relation."""
    if c1.domain != c2.domain or len(c1.rel) != len(c2.rel):
        return False
    n = c1.domain
    indeg1 = [len(c1.preds(v)) for v in range(n)]
    indeg2 = [len(c2.preds(v)) for v in range(n)]
    image = {0: 0}
    used = {0}

    def consistent(u):
        fu = image[u]
        for w, fw in image.items():
            if ((u, w) in c1.rel) != ((fu, fw) in c2.rel):
                return False
            if ((w, u) in c1.rel) != ((fw, fu) in c2.rel):
                return False
        return True

    if not consistent(0):
        return False

    def go(u):
        if u == n:
            return True
        for y in range(n):
            if y in used or indeg1[u] != indeg2[y]:
                continue
            image[u] = y
            used.add(y)
            if consistent(u) and go(u + 1):
                return True
            used.discard(y)
            del image[u]
        return False

    return go(1)


def graphs_equal(c1, c2, method="collapse"):
    """Do the two codes denote the same set?"""
    if method == "collapse":
        return collapse(c1) == collapse(c2)
    if method == "iso":
        _require(c1)
        _require(c2)
        return pointed_isomorphic(c1, c2)
    raise ValueError(f"unknown method {method!r}")


def graph_mem(c1, c2, method="collapse"):
    """Is the set coded by c1 a member of the set coded by c2?"""
    if method == "collapse":
        return collapse(c1) in collapse(c2)
    if method == "iso":
        _require(c1)
        _require(c2)
        return any(pointed_isomorphic(c1, subcode(c2, alpha)) for alpha in c2.preds(0))
    raise ValueError(f"unknown method {method!r}")


# -- enumeration -------------------------------------------------------------

def candidate_pairs(m):
    """Pairs that can occur in a valid code on m nodes (no loops, nothing out of 0)."""
    return [(u, v) for u, v in product(range(m), repeat=2) if u != v and u != 0]


def relation_from_mask(m, mask, pairs=None):
    pairs = pairs or [(u, v) for u, v in product(range(m), repeat=2)]
    return PointedCode(m, [p for i, p in enumerate(pairs) if mask >> i & 1])


def enumerate_codes(max_domain):
    """All valid codes with domain 1..max_domain, by domain then mask."""
    if max_domain > 5:
        raise GuardExceeded("code enumeration is limited to 5 nodes")
    out = []
    for m in range(1, max_domain + 1):
        pairs = candidate_pairs(m)
        for mask in range(1 << len(pairs)):
            c = relation_from_mask(m, mask, pairs)
            if is_wfe(c):
                out.append(c)
    return out


def enumerate_all_relations(m):
    """Every binary relation on m nodes (valid or not), by bitmask over the
    row-major pair order."""
    if m > 4:
        raise GuardExceeded("full relation enumeration is limited to m <= 4")
    pairs = [(u, v) for u, v in product(range(m), repeat=2)]
    return [relation_from_mask(m, mask, pairs) for mask in range(1 << (m * m))]


# -- quotient ----------------------------------------------------------------

@dataclass
class QuotientReport:
    m: int
    k: int
    codes: int
    classes: list
    equivalence: bool
    congruence: bool
    isomorphic: bool

    @property
    def ok(self):
        return self.equivalence and self.congruence and self.isomorphic

    def to_json(self):
        return {"m": self.m, "k": self.k, "codes": self.codes,
                "classes": [to_literal(a) for a in self.classes],
                "equivalence": self.equivalence, "congruence": self.congruence,
                "isomorphic": self.isomorphic, "ok": self.ok}


def quotient_check(m, k=None):
    """Check that valid codes on at most m nodes, modulo graphs_equal and
    with graph_mem, form a structure isomorphic via collapse to the sets of
    HF(k) with transitive closure smaller than m."""
    if k is None:
        k = m
    if m < 1 or m > 5:
        raise GuardExceeded("quotient_check needs 1 <= m <= 5")
    if k < m or k > 5:
        raise ValueError(f"k={k} must satisfy m <= k <= 5 so HF(k) holds every set with TC-size < m")
    codes = enumerate_codes(m)
    n = len(codes)
    sets = [collapse(c) for c in codes]
    # both relations as bit rows, computed pair by pair
    eq = [0] * n
    mem = [0] * n
    memT = [0] * n
    for i in range(n):
        for j in range(n):
            if graphs_equal(codes[i], codes[j]):
                eq[i] |= 1 << j
            if graph_mem(codes[i], codes[j]):
                mem[i] |= 1 << j
                memT[j] |= 1 << i
    reflexive = all(eq[i] >> i & 1 for i in range(n))
    symmetric = all((eq[j] >> i & 1) == (eq[i] >> j & 1) for i in range(n) for j in range(n))
    transitive = all(eq[i] == eq[j] for i in range(n) for j in range(n) if eq[i] >> j & 1)
    equivalence = reflexive and symmetric and transitive
    congruence = all(mem[i] == mem[j] and memT[i] == memT[j]
                     for i in range(n) for j in range(n) if eq[i] >> j & 1)
    reps = {}
    for i in range(n):
        reps.setdefault(sets[i].code, i)
    classes = sorted({s.code: s for s in sets}.values())
    target = [a for a in hf_universe(k) if tc_size(a) < m]
    isomorphic = [a.code for a in classes] == [a.code for a in target]
    if isomorphic:
        for a in classes:
            for b in classes:
                i, j = reps[a.code], reps[b.code]
                if bool(mem[i] >> j & 1) != (a in b):
                    isomorphic = False
    return QuotientReport(m, k, n, classes, equivalence, congruence, isomorphic)
