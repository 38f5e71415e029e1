"""S-expression concrete syntax for formulas.

    form := "(" head items ")"
    term := variable | "(" fn term* ")"

Offsets in error messages are UTF-8 byte offsets into the input.
"""
import re

from .errors import ParseError, SignatureError
from .formula import (
    And, App, Atom, BExists, BForall, Eq, Exists, Forall, Iff, Implies, Mem,
    Not, Or, Var, VAR_RE, alpha_normalize, check_formula,
)

_TOKEN = re.compile(rb"\s*(?:(\()|(\))|([^\s()]+))")
_SYMBOL = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*\Z")

CONNECTIVES = {"and", "or", "not", "->", "iff"}
BINDERS = {"forall", "exists", "forall-in", "exists-in"}


class _Node:
    __slots__ = ("items", "offset", "atom")

    def __init__(self, offset, items=None, atom=None):
        self.offset = offset
        self.items = items
        self.atom = atom

    @property
    def is_list(self):
        return self.items is not None


def _read(data: bytes):
    """Turn bytes into a tree of _Node values."""
    pos = 0
    stack = [[]]
    starts = []
    n = len(data)
    while True:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(data, pos)
        if m is None:
            raise ParseError("unexpected character", pos)
        if m.group(1):
            starts.append(m.start(1))
            stack.append([])
        elif m.group(2):
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", m.start(2))
            items = stack.pop()
            stack[-1].append(_Node(starts.pop(), items=items))
        else:
            tok = m.group(3)
            try:
                text = tok.decode("utf-8")
            except UnicodeDecodeError:
                raise ParseError("invalid UTF-8", m.start(3)) from None
            stack[-1].append(_Node(m.start(3), atom=text))
        pos = m.end()
    if len(stack) > 1:
        raise ParseError("unbalanced '('", starts[-1])
    top = stack[0]
    if not top:
        raise ParseError("empty input", 0)
    if len(top) > 1:
        raise ParseError("trailing input after formula", top[1].offset)
    return top[0]


class _Builder:
    def __init__(self, sig):
        self.sig = sig

    def term(self, node):
        if not node.is_list:
            if not VAR_RE.match(node.atom):
                raise ParseError(f"bad variable name {node.atom!r}", node.offset)
            return Var(node.atom)
        if not node.items or node.items[0].is_list:
            raise ParseError("expected function symbol", node.offset)
        head = node.items[0]
        name = head.atom
        args = tuple(self.term(x) for x in node.items[1:])
        if self.sig is not None:
            arity = self.sig.fn_arity(name)
            if arity is None:
                raise SignatureError(f"undeclared function symbol {name!r}", head.offset)
            if arity != len(args):
                raise SignatureError(
                    f"arity mismatch for {name!r}: expected {arity}, got {len(args)}",
                    head.offset)
        elif not _SYMBOL.match(name):
            raise ParseError(f"bad function symbol {name!r}", head.offset)
        return App(name, args)

    def var(self, node):
        if node.is_list or not VAR_RE.match(node.atom):
            raise ParseError("expected a variable", node.offset)
        return node.atom

    def formula(self, node):
        if not node.is_list:
            raise ParseError(f"expected '(' but found {node.atom!r}", node.offset)
        if not node.items:
            raise ParseError("empty form", node.offset)
        head = node.items[0]
        if head.is_list:
            raise ParseError("form head must be a symbol", head.offset)
        h = head.atom
        rest = node.items[1:]

        def need(k):
            if len(rest) != k:
                raise ParseError(f"'{h}' takes {k} argument(s), got {len(rest)}", node.offset)

        if h == "not":
            need(1)
            return Not(self.formula(rest[0]))
        if h in ("and", "or"):
            if not rest:
                raise ParseError(f"'{h}' needs at least one argument", node.offset)
            args = tuple(self.formula(x) for x in rest)
            return And(args) if h == "and" else Or(args)
        if h in ("->", "iff"):
            need(2)
            a, b = self.formula(rest[0]), self.formula(rest[1])
            return Implies(a, b) if h == "->" else Iff(a, b)
        if h in ("forall", "exists"):
            need(2)
            v = self.var(rest[0])
            body = self.formula(rest[1])
            return Forall(v, body) if h == "forall" else Exists(v, body)
        if h in ("forall-in", "exists-in"):
            need(3)
            if self.sig is not None and self.sig.membership is None:
                raise SignatureError("bounded quantifier needs a membership symbol", head.offset)
            v = self.var(rest[0])
            bound = self.term(rest[1])
            if any(x == v for x in _vars_of(bound)):
                raise ParseError(f"bound term mentions the bound variable {v!r}", rest[1].offset)
            body = self.formula(rest[2])
            return BForall(v, bound, body) if h == "forall-in" else BExists(v, bound, body)
        if h == "=":
            need(2)
            return Eq(self.term(rest[0]), self.term(rest[1]))
        if h == "in":
            need(2)
            if self.sig is not None and self.sig.membership is None:
                raise SignatureError("membership used but not declared", head.offset)
            return Mem(self.term(rest[0]), self.term(rest[1]))
        args = tuple(self.term(x) for x in rest)
        if self.sig is not None:
            arity = self.sig.rel_arity(h)
            if arity is None:
                raise SignatureError(f"undeclared relation symbol {h!r}", head.offset)
            if arity != len(args):
                raise SignatureError(
                    f"arity mismatch for {h!r}: expected {arity}, got {len(args)}", head.offset)
        elif not _SYMBOL.match(h):
            raise ParseError(f"bad relation symbol {h!r}", head.offset)
        return Atom(h, args)


def _vars_of(t):
    if isinstance(t, Var):
        yield t.name
    else:
        for a in t.args:
            yield from _vars_of(a)


def parse(text, sig=None):
    """Parse one formula; with ``sig`` every symbol must be declared there."""
    data = text.encode("utf-8") if isinstance(text, str) else bytes(text)
    f = _Builder(sig).formula(_read(data))
    if sig is not None:
        check_formula(f, sig)
    return f


def parse_term(text, sig=None):
    data = text.encode("utf-8") if isinstance(text, str) else bytes(text)
    return _Builder(sig).term(_read(data))


def term_to_text(t):
    if isinstance(t, Var):
        return t.name
    return "(" + " ".join([t.fn] + [term_to_text(a) for a in t.args]) + ")"


def to_text(f):
    """Canonical text of a formula."""
    if isinstance(f, Atom):
        return "(" + " ".join([f.rel] + [term_to_text(a) for a in f.args]) + ")"
    if isinstance(f, Eq):
        return f"(= {term_to_text(f.left)} {term_to_text(f.right)})"
    if isinstance(f, Mem):
        return f"(in {term_to_text(f.left)} {term_to_text(f.right)})"
    if isinstance(f, Not):
        return f"(not {to_text(f.body)})"
    if isinstance(f, And):
        return "(and " + " ".join(to_text(a) for a in f.args) + ")"
    if isinstance(f, Or):
        return "(or " + " ".join(to_text(a) for a in f.args) + ")"
    if isinstance(f, Implies):
        return f"(-> {to_text(f.left)} {to_text(f.right)})"
    if isinstance(f, Iff):
        return f"(iff {to_text(f.left)} {to_text(f.right)})"
    if isinstance(f, Forall):
        return f"(forall {f.var} {to_text(f.body)})"
    if isinstance(f, Exists):
        return f"(exists {f.var} {to_text(f.body)})"
    if isinstance(f, BForall):
        return f"(forall-in {f.var} {term_to_text(f.bound)} {to_text(f.body)})"
    if isinstance(f, BExists):
        return f"(exists-in {f.var} {term_to_text(f.bound)} {to_text(f.body)})"
    raise TypeError(f"not a formula: {f!r}")


def same_up_to_renaming(f, g):
    return alpha_normalize(f) == alpha_normalize(g)
