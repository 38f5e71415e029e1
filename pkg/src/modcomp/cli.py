"""Command-line front end. Every subcommand prints one JSON report."""
import argparse
import json
import os
import sys

from . import codes as codes_mod
from . import engine, hf, normal, structures, translator
from .classes import BUILTIN, builtin
from .errors import GuardExceeded, ModcompError
from .formula import Signature, free_vars
from .morley import morleyize
from .syntax import parse, to_text


class UsageError(Exception):
    pass


def load_json(arg):
    """Inline JSON or the path of a JSON file."""
    if arg is None:
        return None
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            return json.load(fh)
    try:
        return json.loads(arg)
    except json.JSONDecodeError:
        raise UsageError(f"not a file or JSON value: {arg!r}") from None


def need(args, name):
    value = getattr(args, name)
    if value is None or value == []:
        raise UsageError(f"--{name.replace('_', '-')} is required")
    return value


def load_sig(args):
    if args.sig is None:
        return None
    if args.sig in BUILTIN:
        return builtin(args.sig)[0]
    return Signature.from_json(load_json(args.sig))


def load_class(source, size):
    """A builtin class name, a class file with models, or a file holding a
    signature and axioms to be enumerated up to ``size``."""
    if source in BUILTIN:
        sig, axioms = builtin(source)
        if size is None:
            raise UsageError("--size is required with a builtin class")
        return engine.build_class(sig, axioms, size)
    data = load_json(source)
    sig = Signature.from_json(data["signature"])
    axioms = [parse(t, sig) for t in data.get("axioms", [])]
    if "models" in data:
        models = [structures.FinStructure.from_json(sig, m) for m in data["models"]]
        return engine.class_from_models(sig, models, data.get("size", size), axioms)
    if size is None:
        raise UsageError("--size is required to enumerate a class")
    return engine.build_class(sig, axioms, size)


def load_structure(arg, sig):
    if sig is None:
        raise UsageError("--sig is required to read a structure")
    return structures.FinStructure.from_json(sig, load_json(arg))


def formula(args, sig=None):
    return parse(need(args, "formula"), sig)


# -- handlers: each returns (report, failed) ----------------------------------

def cmd_classify(args):
    f = formula(args, load_sig(args))
    sigma, pi = normal.levy_levels(f)
    return {"class": str(normal.levy_classify(f)), "sigma": sigma, "pi": pi}, False


def cmd_prenex(args):
    f = formula(args, load_sig(args))
    return {"prenex": to_text(normal.to_prenex(f)), "class": str(normal.levy_classify(f))}, False


def cmd_morleyize(args):
    sig = need(args, "sig") and load_sig(args)
    kinds = (args.kinds or "").split(",") if args.kinds else ["relation"] * len(args.formula)
    if len(kinds) != len(args.formula):
        raise UsageError("--kinds needs one entry per --formula")
    selected = [(parse(t, sig), k) for t, k in zip(args.formula, kinds)]
    return morleyize(sig, selected).to_json(), False


def _assignment(args):
    return {k: int(v) for k, v in (load_json(args.assign) or {}).items()}


def cmd_eval(args):
    sig = load_sig(args)
    M = load_structure(need(args, "structure")[0], sig)
    f = formula(args, sig)
    out = {"formula": to_text(f)}
    xs = free_vars(f)
    if args.assign is not None or not xs:
        a = _assignment(args)
        out["assignment"] = a
        out["value"] = structures.satisfies(M, f, a)
    else:
        out["variables"] = xs
        out["extension"] = [list(t) for t in sorted(structures.definable_set(M, f, xs))]
    return out, False


def cmd_embeddings(args):
    sig = load_sig(args)
    paths = need(args, "structure")
    if len(paths) != 2:
        raise UsageError("embeddings needs --structure twice (source, then target)")
    M, N = (load_structure(p, sig) for p in paths)
    es = structures.enumerate_embeddings(M, N, limit=args.limit)
    return {"count": len(es), "embeddings": [list(e.map) for e in es]}, False


def cmd_diagram(args):
    sig = load_sig(args)
    M = load_structure(need(args, "structure")[0], sig)
    return {"signature": structures.diagram_signature(M).to_json(),
            "diagram": [to_text(d) for d in structures.atomic_diagram(M)]}, False


def cmd_enum(args):
    C = load_class(need(args, "class")[0], args.size)
    return C.to_json() | {"count": len(C.models)}, False


def cmd_ec(args):
    C = load_class(need(args, "class")[0], args.size)
    reports = engine.ec_models(C, args.qrank, jobs=args.jobs)
    if args.model is not None:
        reports = [reports[args.model]]
    failed = any(r.verdict == "refuted" for r in reports)
    return {"reports": [r.to_json() for r in reports]}, failed


def cmd_separate(args):
    specs = need(args, "class")
    if len(specs) != 2:
        raise UsageError("separate needs --class twice (C_T, then C_S)")
    CT, CS = (load_class(s, args.size) for s in specs)
    r = engine.pi1_separator(CT, CS, args.qrank, args.max_vars)
    return r.to_json(), r.status != "separated"


def cmd_modelcomplete(args):
    C = load_class(need(args, "class")[0], args.size)
    if args.morleyize:
        _, C = engine.morleyize_class(C)
    r = engine.check_model_complete_bounded(C, args.qrank, jobs=args.jobs)
    return r.to_json(), not r.passed


def cmd_hull(args):
    C = load_class(need(args, "class")[0], args.size)
    r = engine.kaiser_hull_pi2(C, args.qrank, args.max_vars, jobs=args.jobs)
    return r.to_json(), False


def cmd_univ_equiv(args):
    C = load_class(need(args, "class")[0], args.size)
    phi = formula(args, C.signature)
    r = engine.find_universal_equivalent(phi, C, args.qrank)
    return {"formula": to_text(phi), "equivalent": to_text(r) if r is not None else None}, r is None


def _set(args):
    return hf.parse_literal(need(args, "set"))


def cmd_hf_encode(args):
    return codes_mod.encode(_set(args)).to_json(), False


def cmd_hf_decode(args):
    if args.code is not None:
        c = codes_mod.PointedCode.from_json(load_json(args.code))
        return {"set": hf.to_literal(codes_mod.collapse(c))}, False
    a = hf.ackermann_decode(need(args, "number"))
    return {"set": hf.to_literal(a)}, False


def cmd_hf_eval(args):
    f = formula(args)
    env = {k: hf.parse_literal(v) for k, v in (load_json(args.assign) or {}).items()}
    k = args.k if args.k is not None else 4
    return {"formula": to_text(f), "k": k, "value": hf.hf_eval(f, k, env)}, False


def cmd_hf_universe(args):
    k = need(args, "k")
    return {"k": k, "sets": [{"set": hf.to_literal(a), "code": a.code}
                             for a in hf.hf_universe(k)]}, False


def cmd_hf_quotient(args):
    r = codes_mod.quotient_check(need(args, "m"), args.k)
    return r.to_json(), not r.ok


def cmd_translate(args):
    f = formula(args)
    theta = translator.translate(f, args.mutation)
    return {"formula": to_text(f), "translation": to_text(theta),
            "shift": translator.classification_shift(f)}, False


def cmd_verify_translation(args):
    f = formula(args)
    r = translator.verify_translation(f, need(args, "m"), mutation=args.mutation)
    return r.to_json(), not r.passed


def cmd_universal_form(args):
    f = formula(args)
    out = {"formula": to_text(f), "universal_form": to_text(translator.universal_form(f))}
    failed = False
    if args.m is not None:
        out["check"] = translator.check_universal_form(f, args.m)
        failed = not out["check"]["passed"]
    return out, failed


def cmd_suite(args):
    from .suite import run_suite
    only = [int(x) for x in args.only.split(",")] if args.only else None
    r = run_suite(jobs=args.jobs, seed=args.seed, only=only)
    return r, not r["passed"]


# -- argument parsing ---------------------------------------------------------

def _common(p, *names):
    adders = {
        "formula": lambda: p.add_argument("--formula", help="formula in concrete syntax"),
        "sig": lambda: p.add_argument("--sig", help="signature JSON (file or inline) or builtin class name"),
        "structure": lambda: p.add_argument("--structure", action="append",
                                            help="structure JSON (file or inline)"),
        "class": lambda: p.add_argument("--class", dest="class_", action="append", metavar="CLASS",
                                        help="builtin class name or class JSON file"),
        "size": lambda: p.add_argument("--size", type=int, help="largest model size"),
        "qrank": lambda: p.add_argument("--qrank", type=int, default=1, help="quantifier rank bound"),
        "max_vars": lambda: p.add_argument("--max-vars", type=int, default=2, help="variable bound"),
        "m": lambda: p.add_argument("--m", type=int, help="number of code nodes"),
        "k": lambda: p.add_argument("--k", type=int, help="HF level"),
        "jobs": lambda: p.add_argument("--jobs", type=int, default=1, help="worker processes"),
        "assign": lambda: p.add_argument("--assign", help="assignment as a JSON object"),
        "mutation": lambda: p.add_argument("--mutation", choices=[m for m in translator.MUTATIONS if m],
                                           help="drop a family of guards"),
    }
    for n in names:
        adders[n]()


COMMANDS = [
    ("classify", "normal.levy_classify: Levy class of a formula", cmd_classify, ["formula", "sig"]),
    ("prenex", "normal.to_prenex: alternation-minimal prenex form", cmd_prenex, ["formula", "sig"]),
    ("morleyize", "morley.morleyize: expand a signature by defined symbols",
     cmd_morleyize, ["sig"]),
    ("eval", "structures.satisfies / definable_set: evaluate in a finite structure",
     cmd_eval, ["formula", "sig", "structure", "assign"]),
    ("embeddings", "structures.enumerate_embeddings: embeddings between two structures",
     cmd_embeddings, ["sig", "structure"]),
    ("diagram", "structures.atomic_diagram: atomic diagram of a structure",
     cmd_diagram, ["sig", "structure"]),
    ("enum", "enumerate.enumerate_structures: models of a class up to isomorphism",
     cmd_enum, ["class", "size"]),
    ("ec", "engine.is_ec_in_class: bounded existential closedness of each model",
     cmd_ec, ["class", "size", "qrank", "jobs"]),
    ("separate", "engine.pi1_separator: universal separator between two classes",
     cmd_separate, ["class", "size", "qrank", "max_vars"]),
    ("modelcomplete", "engine.check_model_complete_bounded: bounded Robinson test",
     cmd_modelcomplete, ["class", "size", "qrank", "jobs"]),
    ("hull", "engine.kaiser_hull_pi2: Pi_2 sentences true in the ec models",
     cmd_hull, ["class", "size", "qrank", "max_vars", "jobs"]),
    ("univ-equiv", "engine.find_universal_equivalent: universal formula equivalent on a class",
     cmd_univ_equiv, ["class", "size", "qrank", "formula"]),
    ("translate", "translator.translate: membership formula to code formula",
     cmd_translate, ["formula", "mutation"]),
    ("verify-translation", "translator.verify_translation: compare a formula with its translation",
     cmd_verify_translation, ["formula", "m", "mutation"]),
    ("universal-form", "translator.universal_form: universal form of a Sigma_1 formula",
     cmd_universal_form, ["formula", "m"]),
    ("suite", "suite.run_suite: run the acceptance criteria", cmd_suite, ["jobs"]),
]

HF_COMMANDS = [
    ("encode", "codes.encode: canonical code of a set", cmd_hf_encode, []),
    ("decode", "codes.collapse / hf.ackermann_decode: set of a code or number", cmd_hf_decode, []),
    ("eval", "hf.hf_eval: evaluate a membership formula in HF(k)", cmd_hf_eval, ["formula", "k", "assign"]),
    ("universe", "hf.hf_universe: the sets of HF(k)", cmd_hf_universe, ["k"]),
    ("quotient", "codes.quotient_check: codes modulo equality against HF", cmd_hf_quotient, ["m", "k"]),
]


def _globals(default):
    # accepted both before and after the subcommand
    p = argparse.ArgumentParser(add_help=False, argument_default=default)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--strict", action="store_true", help="exit 1 on a failing verdict")
    p.add_argument("--seed", type=int, help="seed for randomized checks")
    return p


def build_parser():
    parser = argparse.ArgumentParser(prog="modcomp", description=__doc__, parents=[_globals(None)])
    parser.set_defaults(seed=0)
    shared = _globals(argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, desc, fn, opts in COMMANDS:
        p = sub.add_parser(name, help=desc, description=desc, parents=[shared])
        _common(p, *opts)
        p.set_defaults(func=fn)
        if name == "morleyize":
            p.add_argument("--formula", action="append", default=[], help="selected formula (repeatable)")
            p.add_argument("--kinds", help="comma-separated kinds: relation or skolem")
        elif name == "embeddings":
            p.add_argument("--limit", type=int, help="stop after this many")
        elif name == "ec":
            p.add_argument("--model", type=int, help="report only this model index")
        elif name == "modelcomplete":
            p.add_argument("--morleyize", action="store_true", help="expand by the rank-1 Morleyization first")
        elif name == "suite":
            p.add_argument("--only", help="comma-separated criterion numbers")
    hp = sub.add_parser("hf", help="hereditarily finite sets and their codes", parents=[shared])
    hsub = hp.add_subparsers(dest="hf_command", required=True)
    for name, desc, fn, opts in HF_COMMANDS:
        p = hsub.add_parser(name, help=desc, description=desc, parents=[shared])
        _common(p, *opts)
        p.set_defaults(func=fn)
        if name == "encode":
            p.add_argument("--set", help="set literal such as {{},{{}}}")
        elif name == "decode":
            p.add_argument("--code", help="code JSON (file or inline)")
            p.add_argument("--number", type=int, help="Ackermann number")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    for name in ("jobs", "size", "qrank", "max_vars", "m", "k"):
        if getattr(args, name, None) is not None and getattr(args, name) < (1 if name != "qrank" else 0):
            print(f"--{name.replace('_', '-')} must be positive", file=sys.stderr)
            return 2
    if hasattr(args, "class_"):
        setattr(args, "class", args.class_)
    for name in ("formula", "structure", "set", "assign", "m", "k", "sig", "size",
                 "mutation", "code", "number", "kinds", "only", "jobs"):
        if not hasattr(args, name):
            setattr(args, name, None)
    if args.jobs is None:
        args.jobs = 1
    try:
        report, failed = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return 3
    except (ModcompError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if failed and args.strict else 0
