"""``spanforge`` command-line tool.

Exit codes: 0 verdict true, 1 verdict false, 2 input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import catalog
from .category import (FiniteCategory, Functor, category_to_dict, functor_to_dict, hom_set, invert,
                       validate_category, validate_functor)
from .errors import BudgetExceeded, SpanforgeError, ValidationError
from .genspan import (build_span_category, check_category_laws, classic_equivalence, find_f_pullbacks,
                      is_span_tight, span_compose)
from .pullbacks import find_pullbacks, has_pullbacks, is_pullback, preserves_pullbacks
from .report import Budget, CheckReport
from .spans import canonicalize, describe_span, make_cospan, make_span, parse_pair, span_class


class InputError(SpanforgeError):
    pass


# file I/O

def _read_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _located(path, exc: ValidationError) -> InputError:
    lines = [f"{path}: {exc}"]
    for issue in exc.report.issues[1:]:
        where = f" (at {issue.where})" if issue.where else ""
        lines.append(f"{path}: {issue.kind}: {issue.message}{where}")
    err = InputError("\n".join(lines))
    err.report = exc.report
    return err


def load_category(path) -> FiniteCategory:
    raw = _read_json(path)
    try:
        return validate_category(raw)
    except ValidationError as exc:
        raise _located(path, exc) from None
    except (TypeError, AttributeError) as exc:
        raise InputError(f"{path}: malformed category file: {exc}") from None


def load_functor(path) -> Functor:
    raw = _read_json(path)
    base = Path(path).parent
    try:
        src_path, tgt_path = base / raw["source"], base / raw["target"]
    except (KeyError, TypeError):
        raise InputError(f"{path}: functor file needs 'source' and 'target' paths") from None
    src, tgt = load_category(src_path), load_category(tgt_path)
    try:
        return validate_functor(raw, src, tgt)
    except ValidationError as exc:
        raise _located(path, exc) from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _write(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# human rendering

def _span_line(d: dict) -> str:
    if "s_L" in d:
        a, b = d["s_L"], d["s_R"]
        return f"{d['feet'][0]} <-[s_L={a}]- {d['apex']} -[s_R={b}]-> {d['feet'][1]}"
    a, b = d["c_L"], d["c_R"]
    return f"{d['feet'][0]} -[c_L={a}]-> {d['apex']} <-[c_R={b}]- {d['feet'][1]}"


def _render(value, indent=0) -> list[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        if {"apex", "feet"} <= value.keys():
            return [pad + _span_line(value)]
        out = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                sub = _render(v, indent + 1)
                if len(sub) == 1 and isinstance(v, dict) and {"apex", "feet"} <= v.keys():
                    out.append(f"{pad}{k}: {sub[0].strip()}")
                else:
                    out.append(f"{pad}{k}:")
                    out.extend(sub)
            else:
                out.append(f"{pad}{k}: {v}")
        return out
    if isinstance(value, list):
        out = []
        for item in value:
            sub = _render(item, indent + 1)
            out.append(pad + "- " + sub[0].strip())
            out.extend(sub[1:])
        return out
    return [pad + str(value)]


def render_human(doc: dict) -> str:
    lines = []
    if "check" in doc:
        lines.append(f"{doc['check']}: {'TRUE' if doc['verdict'] else 'FALSE'}")
        if doc.get("budget_hit"):
            lines.append("budget exhausted")
        if doc.get("counterexample"):
            lines.append("counterexample:")
            lines.extend(_render(doc["counterexample"], 1))
        if doc.get("witnesses"):
            lines.append(f"witnesses ({len(doc['witnesses'])}):")
            lines.extend(_render(doc["witnesses"], 1))
        if doc.get("stats"):
            lines.append("stats:")
            lines.extend(_render(doc["stats"], 1))
    else:
        lines.extend(_render(doc))
    return "\n".join(lines) + "\n"


def _emit(args, doc: dict) -> None:
    _write(_dump(doc) if args.json else render_human(doc), args.output)


def _report(args, report: CheckReport) -> int:
    _emit(args, report.to_dict())
    return 0 if report.verdict else 1


# commands

def cmd_validate(args):
    raw = _read_json(args.category)
    try:
        cat = validate_category(raw)
    except ValidationError as exc:
        doc = {"file": args.category, **exc.report.to_dict()}
        _emit(args, doc)
        return 1
    except (TypeError, AttributeError) as exc:
        raise InputError(f"{args.category}: malformed category file: {exc}") from None
    _emit(args, {"file": args.category, "valid": True, "name": cat.name,
                 "objects": cat.n_objects, "morphisms": cat.n_morphisms})
    return 0


def cmd_compose(args):
    if args.span1 or args.span2:
        if not (args.span1 and args.span2):
            raise InputError("span composition needs both --span1 and --span2")
        F = load_functor(args.file)
        cat = F.source
        S, Q = make_span(cat, *parse_pair(cat, args.span1)), make_span(cat, *parse_pair(cat, args.span2))
        SC = build_span_category(F, _budget(args), force=args.force)
        K = span_compose(SC, span_class(cat, S), span_class(cat, Q), _budget(args))
        _emit(args, {"first": describe_span(cat, canonicalize(cat, S)),
                     "second": describe_span(cat, canonicalize(cat, Q)),
                     "composite": describe_span(cat, K.representative)})
        return 0
    if len(args.morphisms) != 2:
        raise InputError("compose needs two morphism ids FIRST THEN (or --span1/--span2)")
    cat = load_category(args.file)
    f, g = (cat.mor(m) for m in args.morphisms)
    h = cat.compose(f, g)
    _emit(args, {"first": args.morphisms[0], "then": args.morphisms[1], "equals": cat.mor_names[h]})
    return 0


def cmd_hom(args):
    cat = load_category(args.category)
    a, b = cat.obj(args.source), cat.obj(args.target)
    _emit(args, {"source": args.source, "target": args.target,
                 "morphisms": [cat.mor_names[m] for m in hom_set(cat, a, b)]})
    return 0


def cmd_invert(args):
    cat = load_category(args.category)
    g = invert(cat, cat.mor(args.morphism))
    _emit(args, {"morphism": args.morphism, "inverse": cat.mor_names[g]})
    return 0


def cmd_pullback(args):
    cat = load_category(args.category)
    C = make_cospan(cat, *parse_pair(cat, args.cospan))
    cdesc = describe_span(cat, C, "cospan")
    if args.span:
        S = make_span(cat, *parse_pair(cat, args.span))
        return _report(args, is_pullback(cat, S, C, _budget(args)))
    pbs = find_pullbacks(cat, C, _budget(args))
    stats = {"pullbacks_found": len(pbs)}
    if args.canonical and pbs:
        pbs = [canonicalize(cat, pbs[0])]
    elif not args.all:
        pbs = pbs[:1]
    if not pbs:
        return _report(args, CheckReport(False, counterexample={"reason": "no pullback", "cospan": cdesc},
                                         stats=stats, check="pullback"))
    witnesses = [{"cospan": cdesc, "pullback": describe_span(cat, S)} for S in pbs]
    return _report(args, CheckReport(True, witnesses=witnesses, stats=stats, check="pullback"))


def cmd_has_pullbacks(args):
    return _report(args, has_pullbacks(load_category(args.category), _budget(args), args.workers))


def cmd_preserves(args):
    return _report(args, preserves_pullbacks(load_functor(args.functor), _budget(args), args.workers))


def cmd_fpullback(args):
    F = load_functor(args.functor)
    cat = F.source
    C = make_cospan(cat, *parse_pair(cat, args.cospan))
    cdesc = describe_span(cat, C, "cospan")
    pbs = find_f_pullbacks(F, C, _budget(args))
    stats = {"f_pullbacks_found": len(pbs)}
    if not pbs:
        return _report(args, CheckReport(False, counterexample={"reason": "no F-pullback", "cospan": cdesc},
                                         stats=stats, check="fpullback"))
    witnesses = [{"cospan": cdesc, "f_pullback": describe_span(cat, S)} for S in pbs]
    return _report(args, CheckReport(True, witnesses=witnesses, stats=stats, check="fpullback"))


def cmd_span_tight(args):
    return _report(args, is_span_tight(load_functor(args.functor), _budget(args), args.workers))


def cmd_check_laws(args):
    if args.mode == "sampled" and args.seed is None:
        raise InputError("--mode sampled requires --seed")
    F = load_functor(args.functor)
    SC = build_span_category(F, _budget(args), force=args.force)
    return _report(args, check_category_laws(SC, args.mode, args.samples, args.seed, _budget(args)))


def cmd_classic_equiv(args):
    return _report(args, classic_equivalence(load_category(args.category), _budget(args)))


# gen

def _emit_category(args, cat):
    _write(_dump(category_to_dict(cat)), args.output)
    return 0


def _rel_path(path, out):
    """``path`` as seen from the directory the functor file will live in."""
    if not out:
        return str(path)
    return os.path.relpath(os.path.abspath(path), os.path.dirname(os.path.abspath(out)))


def _emit_functor(args, F, src_path, tgt_path):
    doc = functor_to_dict(F, _rel_path(src_path, args.output), _rel_path(tgt_path, args.output))
    _write(_dump(doc), args.output)
    return 0


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_gen(args):
    kind = args.kind
    if kind == "finset":
        return _emit_category(args, catalog.gen_finset(args.max_size))
    if kind == "finsurj":
        return _emit_category(args, catalog.gen_finsurj(args.sizes))
    if kind == "fintop":
        return _emit_category(args, catalog.gen_fintop(args.max_points))
    if kind == "poset":
        raw = _read_json(args.relation)
        return _emit_category(args, catalog.gen_poset(raw["elements"], [tuple(p) for p in raw["relation"]],
                                                      raw.get("name", "poset")))
    if kind == "group":
        raw = _read_json(args.table)
        return _emit_category(args, catalog.gen_group(raw["table"], raw.get("elements"),
                                                      raw.get("name", "group")))
    if kind == "free":
        raw = _read_json(args.graph)
        return _emit_category(args, catalog.gen_free(raw["objects"], [tuple(e) for e in raw["edges"]],
                                                     args.max_path_len, raw.get("name", "free")))
    if kind == "hom":
        cat, tgt = load_category(args.cat), load_category(args.target)
        F = catalog.gen_hom_functor(cat, cat.obj(args.base), tgt)
        return _emit_functor(args, F, args.cat, args.target)
    if kind == "inclusion":
        sub, sup = load_category(args.sub), load_category(args.super)
        matching = _read_json(args.matching) if args.matching else {}
        F = catalog.gen_inclusion(sub, sup, matching.get("objects"), matching.get("morphisms"), args.name)
        return _emit_functor(args, F, args.sub, args.super)
    raise InputError(f"unknown generator {kind!r}")  # pragma: no cover


def _budget(args):
    return Budget(args.budget)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--budget", type=int, default=None,
                        help="candidate cap per query (default: $SPANFORGE_BUDGET or 10^6)")
    common.add_argument("--workers", type=int, default=1, help="threads for per-cospan checks")
    common.add_argument("-o", "--output", default=None, help="write output to this file")

    p = argparse.ArgumentParser(prog="spanforge", description="Spans, pullbacks and span categories "
                                "over finite categories.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, "validate a category file")
    sp.add_argument("category")
    sp = add("compose", cmd_compose, "compose two morphisms, or two span classes of a functor")
    sp.add_argument("file", help="category file (or functor file with --span1/--span2)")
    sp.add_argument("morphisms", nargs="*", metavar="MOR", help="FIRST THEN")
    sp.add_argument("--span1", help="left factor L,R")
    sp.add_argument("--span2", help="right factor L,R")
    sp.add_argument("--force", action="store_true", help="build the span category even if not span tight")
    sp = add("hom", cmd_hom, "list hom(A, B)")
    sp.add_argument("category")
    sp.add_argument("source")
    sp.add_argument("target")
    sp = add("invert", cmd_invert, "inverse of a morphism")
    sp.add_argument("category")
    sp.add_argument("morphism")
    sp = add("pullback", cmd_pullback, "pullbacks of a cospan")
    sp.add_argument("category")
    sp.add_argument("--cospan", required=True, help="c_L,c_R")
    sp.add_argument("--span", help="test this span s_L,s_R instead of searching")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--all", action="store_true", help="list every pullback")
    g.add_argument("--canonical", action="store_true", help="report the canonical representative")
    sp = add("has-pullbacks", cmd_has_pullbacks, "does every cospan have a pullback")
    sp.add_argument("category")
    sp = add("preserves", cmd_preserves, "does a functor preserve pullbacks")
    sp.add_argument("functor")
    sp = add("fpullback", cmd_fpullback, "F-pullbacks of a cospan in the source")
    sp.add_argument("functor")
    sp.add_argument("--cospan", required=True, help="c_L,c_R")
    sp = add("span-tight", cmd_span_tight, "is a functor span tight")
    sp.add_argument("functor")
    sp = add("check-laws", cmd_check_laws, "category laws of Span(C, F)")
    sp.add_argument("functor")
    sp.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--force", action="store_true", help="check even if the functor is not span tight")
    sp = add("classic-equiv", cmd_classic_equiv, "compare with classic span composition")
    sp.add_argument("category")

    gen = sub.add_parser("gen", help="generate catalog categories and functors")
    gsub = gen.add_subparsers(dest="kind", required=True)

    def gadd(name, help):
        sp = gsub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=cmd_gen)
        return sp

    gadd("finset", "finite sets S0..Sn").add_argument("--max-size", type=int, required=True)
    gadd("finsurj", "surjections between listed sizes").add_argument("--sizes", type=_int_list,
                                                                      required=True)
    gadd("fintop", "finite topological spaces").add_argument("--max-points", type=int, required=True)
    gadd("poset", "poset from {elements, relation}").add_argument("--relation", required=True)
    gadd("group", "group from {elements, table}").add_argument("--table", required=True)
    sp = gadd("free", "free category from {objects, edges}")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--max-path-len", type=int, default=catalog.FREE_PATH_CAP)
    sp = gadd("hom", "hom functor Hom(B, -) into a finite-set category")
    sp.add_argument("--base", required=True)
    sp.add_argument("--cat", required=True)
    sp.add_argument("--target", required=True)
    sp = gadd("inclusion", "inclusion functor (names matched, or via --matching)")
    sp.add_argument("--sub", required=True)
    sp.add_argument("--super", required=True)
    sp.add_argument("--matching", help="JSON {objects: {...}, morphisms: {...}}")
    sp.add_argument("--name", default=None)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        if getattr(args, "json", False):
            doc = CheckReport(False, budget_hit=True, check=args.command,
                              stats={"message": str(exc)}).to_dict()
            _write(_dump(doc), args.output)
        print(f"spanforge: budget exceeded: {exc}", file=sys.stderr)
        return exc.exit_code
    except SpanforgeError as exc:
        report = getattr(exc, "report", None)
        if exc.exit_code == 1 and isinstance(report, CheckReport):
            _emit(args, report.to_dict())
        print(f"spanforge: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (KeyError, ValueError) as exc:
        print(f"spanforge: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
