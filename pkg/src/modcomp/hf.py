"""Hereditarily finite sets with Ackermann codes."""
from .errors import EvaluationError, GuardExceeded, ParseError
from .formula import (
    And, Atom, BExists, BForall, Eq, Exists, Forall, Iff, Implies, Mem, Not, Or, Var,
)

MAX_DECODE_BITS = 1 << 16
UNIVERSE_SIZES = [0, 1, 2, 4, 16, 65536]


class HFSet:
    """A hereditarily finite set; elements are kept sorted by Ackermann code."""

    __slots__ = ("elements", "code", "_codes")

    def __init__(self, elements=()):
        uniq = {e.code: e for e in elements}
        self.elements = tuple(uniq[c] for c in sorted(uniq))
        self.code = sum(1 << c for c in uniq)
        self._codes = frozenset(uniq)

    def __eq__(self, other):
        return isinstance(other, HFSet) and self.code == other.code

    def __hash__(self):
        return hash(self.code)

    def __lt__(self, other):
        return self.code < other.code

    def __contains__(self, item):
        return item.code in self._codes

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"HFSet({to_literal(self)})"

    def __str__(self):
        return to_literal(self)


EMPTY = HFSet()


def ackermann(a):
    return a.code


def ackermann_decode(n, max_bits=MAX_DECODE_BITS):
    if n < 0:
        raise ValueError("Ackermann codes are non-negative")
    if n.bit_length() > max_bits:
        raise GuardExceeded(f"code has {n.bit_length()} bits, limit {max_bits}")
    memo = {}

    def go(k):
        s = memo.get(k)
        if s is None:
            s = HFSet(go(i) for i in range(k.bit_length()) if k >> i & 1)
            memo[k] = s
        return s

    return go(n)


def to_literal(a):
    return "{" + ",".join(to_literal(b) for b in a.elements) + "}"


def parse_literal(text):
    text = "".join(text.split())
    pos = 0

    def go():
        nonlocal pos
        if pos >= len(text) or text[pos] != "{":
            raise ParseError("expected '{'", pos)
        pos += 1
        items = []
        if pos < len(text) and text[pos] == "}":
            pos += 1
            return HFSet()
        while True:
            items.append(go())
            if pos < len(text) and text[pos] == ",":
                pos += 1
                continue
            if pos < len(text) and text[pos] == "}":
                pos += 1
                return HFSet(items)
            raise ParseError("expected ',' or '}'", pos)

    out = go()
    if pos != len(text):
        raise ParseError("trailing characters after set literal", pos)
    return out


def transitive_closure(a):
    out = {}
    stack = list(a.elements)
    while stack:
        b = stack.pop()
        if b.code not in out:
            out[b.code] = b
            stack.extend(b.elements)
    return [out[c] for c in sorted(out)]


def tc_size(a):
    return len(transitive_closure(a))


def rank(a):
    return 1 + max((rank(b) for b in a.elements), default=-1)


def hf_universe(k):
    """HF(k), the k-fold iterated powerset of the empty set, in code order."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > 5:
        raise GuardExceeded("hf_universe is limited to k <= 5")
    cache = {}
    out = []
    for n in range(UNIVERSE_SIZES[k]):
        s = HFSet(cache[i] for i in range(n.bit_length()) if n >> i & 1)
        cache[n] = s
        out.append(s)
    return out


def sets_below_tc(m, k=5):
    """Sets of HF(k) whose transitive closure has fewer than m elements.

    Such a set has rank < m, so k = m is always enough; the default covers
    every m <= 5.
    """
    return [a for a in hf_universe(min(k, max(m, 0))) if tc_size(a) < m]


# -- evaluation --------------------------------------------------------------

def set_eval(f, domain, a):
    """Tarski truth over a transitive family of sets with true membership."""
    env = dict(a)
    return _ev(f, list(domain), env)


def _val(t, env):
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise EvaluationError(f"unassigned variable {t.name!r}") from None
    raise EvaluationError("function symbols are not interpreted over sets")


def _ev(f, dom, env):
    if isinstance(f, Mem):
        return _val(f.left, env) in _val(f.right, env)
    if isinstance(f, Eq):
        return _val(f.left, env) == _val(f.right, env)
    if isinstance(f, Atom):
        raise EvaluationError(f"relation {f.rel!r} is not interpreted over sets")
    if isinstance(f, Not):
        return not _ev(f.body, dom, env)
    if isinstance(f, And):
        return all(_ev(g, dom, env) for g in f.args)
    if isinstance(f, Or):
        return any(_ev(g, dom, env) for g in f.args)
    if isinstance(f, Implies):
        return not _ev(f.left, dom, env) or _ev(f.right, dom, env)
    if isinstance(f, Iff):
        return _ev(f.left, dom, env) == _ev(f.right, dom, env)
    if isinstance(f, (Forall, Exists)):
        rng = dom
    else:
        rng = _val(f.bound, env).elements
    old = env.get(f.var)
    universal = isinstance(f, (Forall, BForall))
    result = universal
    for e in rng:
        env[f.var] = e
        if _ev(f.body, dom, env) != universal:
            result = not universal
            break
    if old is None:
        env.pop(f.var, None)
    else:
        env[f.var] = old
    return result


def hf_eval(f, k, a):
    """Truth of a membership formula in (HF(k), in) under assignment a."""
    dom = hf_universe(k)
    codes = {x.code for x in dom}
    for name, v in a.items():
        if v.code not in codes:
            raise EvaluationError(f"{name} = {v} is not in HF({k})")
    return set_eval(f, dom, a)
