"""Prenex normal form and Levy classification.

Bounded quantifiers stay in the matrix unless an unbounded quantifier sits
below them, in which case they are expanded to their guarded form first.
"""
from dataclasses import dataclass

from .formula import (
    ATOMIC, And, BExists, BForall, Exists, Forall, Iff, Implies, Mem, Not, Or, Var,
    all_var_names, fresh_names, free_vars, has_unbounded, map_children, substitute,
)


@dataclass(frozen=True)
class LevyClass:
    kind: str  # "Delta0", "Sigma" or "Pi"
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("Delta0", "Sigma", "Pi"):
            raise ValueError(self.kind)
        if self.n == 0 and self.kind != "Delta0":
            object.__setattr__(self, "kind", "Delta0")
        if self.kind == "Delta0":
            object.__setattr__(self, "n", 0)

    def __str__(self):
        return "Delta0" if self.kind == "Delta0" else f"{self.kind}({self.n})"

    @classmethod
    def parse(cls, text):
        if text == "Delta0":
            return cls("Delta0")
        kind, _, rest = text.partition("(")
        return cls(kind, int(rest.rstrip(")")))


def _expand(f):
    """Expand what cannot stay in a matrix: bounded quantifiers over unbounded
    material, and biconditionals with quantified sides."""
    if isinstance(f, ATOMIC):
        return f
    if isinstance(f, (BForall, BExists)):
        if not has_unbounded(f.body):
            return f
        guard = Mem(Var(f.var), f.bound)
        body = _expand(f.body)
        if isinstance(f, BForall):
            return Forall(f.var, Implies(guard, body))
        return Exists(f.var, And((guard, body)))
    if isinstance(f, Iff) and (has_unbounded(f.left) or has_unbounded(f.right)):
        a, b = _expand(f.left), _expand(f.right)
        return And((Implies(a, b), Implies(b, a)))
    return map_children(f, _expand)


def _rename_apart(f):
    """Give every unbounded binder a name that is neither free in ``f`` nor
    used by another unbounded binder. Names are kept when there is no clash."""
    used = set(free_vars(f))
    fresh = fresh_names(all_var_names(f))

    def go(g):
        if isinstance(g, (Forall, Exists)):
            var, body = g.var, g.body
            if var in used:
                new = next(fresh)
                body = substitute(body, {var: Var(new)})
                var = new
            used.add(var)
            return type(g)(var, go(body))
        if isinstance(g, (BForall, BExists)) or isinstance(g, ATOMIC):
            return g
        return map_children(g, go)

    return go(f)


def _blocks(prefix):
    out = []
    for q, v in prefix:
        if out and out[-1][0] == q:
            out[-1][1].append(v)
        else:
            out.append((q, [v]))
    return out


def _other(q):
    return "E" if q == "A" else "A"


def _merge(forms):
    """Blockwise union of forms that all start with the same quantifier kind."""
    width = max((len(f) for f in forms), default=0)
    return [sum((list(f[i]) if i < len(f) else [] for f in forms), []) for i in range(width)]


def _forms(f):
    """Alternation-minimal prenex forms of f.

    Returns (matrix, forms) where forms[q] is a list of variable blocks whose
    kinds alternate starting with q; the first block may be empty. The
    length of forms["E"] is the least n with f in Sigma_n by the prenex
    rules, and likewise forms["A"] for Pi_n.
    """
    if isinstance(f, ATOMIC) or isinstance(f, (BForall, BExists, Iff)):
        return f, {"E": [], "A": []}
    if isinstance(f, Not):
        m, fs = _forms(f.body)
        return Not(m), {"E": fs["A"], "A": fs["E"]}
    if isinstance(f, (And, Or)):
        mats, parts = [], []
        for a in f.args:
            m, fs = _forms(a)
            mats.append(m)
            parts.append(fs)
        return type(f)(tuple(mats)), {q: _merge([p[q] for p in parts]) for q in "EA"}
    if isinstance(f, Implies):
        ma, fa = _forms(f.left)
        mb, fb = _forms(f.right)
        return Implies(ma, mb), {q: _merge([fa[_other(q)], fb[q]]) for q in "EA"}
    if isinstance(f, (Forall, Exists)):
        q = "A" if isinstance(f, Forall) else "E"
        m, fs = _forms(f.body)
        inner = fs[q]
        same = [[f.var] + (list(inner[0]) if inner else [])] + [list(b) for b in inner[1:]]
        return m, {q: same, _other(q): [[]] + same}
    raise TypeError(f"not a formula: {f!r}")


def _first_quantifier(f):
    if isinstance(f, Forall):
        return "A"
    if isinstance(f, Exists):
        return "E"
    if isinstance(f, (ATOMIC, BForall, BExists)):
        return None
    for c in (f.args if isinstance(f, (And, Or)) else
              (f.body,) if isinstance(f, Not) else (f.left, f.right)):
        q = _first_quantifier(c)
        if q is not None:
            return q
    return None


def levy_levels(f):
    """(sigma, pi): least n with f in Sigma_n, and in Pi_n, by prenex rules."""
    _, fs = _forms(_rename_apart(_expand(f)))
    return len(fs["E"]), len(fs["A"])


def prenex_parts(f):
    """Quantifier prefix as a list of ("A"|"E", var) and the matrix.

    The prefix has the fewest alternations possible; when a Sigma form and
    a Pi form are equally short, the kind of the first quantifier decides.
    """
    g = _rename_apart(_expand(f))
    matrix, fs = _forms(g)
    se, sa = len(fs["E"]), len(fs["A"])
    if se != sa:
        lead = "E" if se < sa else "A"
    else:
        lead = _first_quantifier(g) or "E"
    prefix = []
    q = lead
    for block in fs[lead]:
        prefix.extend((q, v) for v in block)
        q = _other(q)
    return prefix, matrix


def to_prenex(f):
    prefix, matrix = prenex_parts(f)
    for q, v in reversed(prefix):
        matrix = Forall(v, matrix) if q == "A" else Exists(v, matrix)
    return matrix


def levy_classify(f) -> LevyClass:
    prefix, _ = prenex_parts(f)
    blocks = _blocks(prefix)
    if not blocks:
        return LevyClass("Delta0")
    return LevyClass("Sigma" if blocks[0][0] == "E" else "Pi", len(blocks))
