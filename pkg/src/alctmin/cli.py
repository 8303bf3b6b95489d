"""Command-line front end.

Exit status: 0 when the command ran (the verdict is in the output), 1 for
usage and parse errors, 2 when the enumeration ceiling was hit.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .bridge import crosscheck, crosscheck_reverse, from_circumscribed, to_circumscribed
from .circumscription import CircKB, circ_query, parse_circ_kb, render_circ_kb
from .interpretation import Interpretation, PreferenceOrder, mask_of, relation_masks
from .model_space import DEFAULT_CEILING, EnumerationLimitError, enumerate_models
from .reasoner import Query, QueryResult, minimal_models, query
from .syntax import (
    KnowledgeBase,
    Name,
    ParseError,
    Typical,
    compute_signature,
    parse_assertion,
    parse_concept,
    parse_gcis,
    parse_kb,
    parse_name_list,
    render_concept,
    render_kb,
    validate_kb,
)

# ---------------------------------------------------------------------------
# Model serialization


def model_record(interp: Interpretation) -> dict:
    """Plain-data form of an interpretation; empty extensions are omitted."""
    return {
        "domain": interp.size,
        "concepts": {c: sorted(interp.extension(c)) for c in sorted(interp.concepts) if interp.concepts[c]},
        "roles": {r: [list(p) for p in interp.role_pairs(r)] for r in sorted(interp.roles) if any(interp.roles[r])},
        "prefs": [[list(p) for p in sorted(interp.order(i).pairs)] for i in range(1, interp.k + 1)],
        "individuals": dict(sorted(interp.individuals.items())),
    }


def serialize_model(interp: Interpretation) -> str:
    """Deterministic JSON text of an interpretation."""
    return json.dumps(model_record(interp), sort_keys=True)


def model_from_record(record: dict) -> Interpretation:
    n = int(record["domain"])
    return Interpretation(
        n,
        {c: mask_of(ext) for c, ext in record.get("concepts", {}).items()},
        {r: relation_masks([tuple(p) for p in pairs], n) for r, pairs in record.get("roles", {}).items()},
        [PreferenceOrder(tuple(p) for p in pairs).predecessors(n) for pairs in record.get("prefs", [])],
        {a: int(x) for a, x in record.get("individuals", {}).items()},
    )


def parse_model(text: str) -> Interpretation:
    return model_from_record(json.loads(text))


def result_record(result: QueryResult, timing: bool = False) -> dict:
    """Plain-data form of a query result.

    Wall-clock time is only included with ``timing`` so that the default
    output is byte-identical across runs.
    """
    record = {
        "verdict": result.verdict.value,
        "exact": result.exact,
        "bound": result.bound,
        "domain_size": result.domain_size,
        "sizes_checked": result.sizes_checked,
        "witness": None if result.witness is None else model_record(result.witness),
        "nodes": result.nodes,
    }
    if timing:
        record["elapsed"] = round(result.elapsed, 6)
    return record


# ---------------------------------------------------------------------------
# Configuration


@dataclass
class CliConfig:
    max_domain: int = 3
    ceiling: int = DEFAULT_CEILING
    workers: int = 1
    structured: bool = False
    minimize: tuple[str, ...] = ()


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser):
    p.add_argument("kb", help="knowledge base file ('-' for stdin)")
    p.add_argument("--max-domain", type=int, default=3, help="largest domain size searched (default 3)")
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING, help="search node ceiling")
    p.add_argument("--workers", type=int, default=1, help="worker processes (only 1 is supported)")
    p.add_argument("--json", action="store_true", help="structured JSON output")
    p.add_argument("--timing", action="store_true", help="include wall-clock times in the output")
    p.add_argument(
        "--minimize",
        action="append",
        default=[],
        metavar="'T<i>: A, B'",
        help="override a minimization set (repeatable)",
    )
    p.add_argument("--circ", action="store_true", help="read a circumscribed KB (implied by a .circ suffix)")
    p.add_argument("--allow-reserved", action="store_true", help="accept '__' names in the input")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="alctmin", description="Bounded minimal-model reasoning for ALC+T+ and circumscription.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="consistency")
    _common(p)
    p = sub.add_parser("sat", help="concept satisfiability")
    _common(p)
    p.add_argument("--concept", required=True)
    p = sub.add_parser("entails", help="subsumption 'C <= D'")
    _common(p)
    p.add_argument("--sub", required=True)
    p = sub.add_parser("instance", help="instance checking 'C(a)'")
    _common(p)
    p.add_argument("--assert", dest="assertion", required=True)
    p = sub.add_parser("models", help="list the models of one domain size")
    _common(p)
    p.add_argument("--domain", type=int, required=True)
    p.add_argument("--minimal-only", action="store_true")
    p = sub.add_parser("translate", help="translate between the two formats")
    p.add_argument("direction", choices=["circ", "typ"])
    _common(p)
    p.add_argument("--concept", help="query concept to translate along")
    p.add_argument("--mapping", help="write the fresh-name mapping (JSON) to this file")
    p = sub.add_parser("crosscheck", help="answer queries directly and through the translation")
    _common(p)
    p.add_argument("--concept", action="append", default=[], help="satisfiability query (repeatable)")
    p.add_argument("--assert", dest="assertions", action="append", default=[], help="instance query (repeatable)")
    return parser


# ---------------------------------------------------------------------------
# Helpers


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


_OVERRIDE_RE = re.compile(r"^\s*T([0-9]+)\s*:(.*)$")


def _apply_overrides(kb: KnowledgeBase, overrides: Sequence[str], allow_reserved: bool) -> KnowledgeBase:
    if not overrides:
        return kb
    sets = list(kb.minimize)
    for text in overrides:
        m = _OVERRIDE_RE.match(text)
        if not m:
            raise UsageError(f"bad --minimize value {text!r}; expected 'T<i>: A, B'")
        i = int(m.group(1))
        if not 1 <= i <= kb.k:
            raise UsageError(f"--minimize T{i}: operator not declared (operators: {kb.k})")
        sets[i - 1] = parse_name_list(m.group(2), 0, 0, allow_reserved)
    return kb.extend(minimize=sets)


def _is_circ(args) -> bool:
    return args.circ or args.kb.endswith(".circ")


def _load_typ(args) -> KnowledgeBase:
    kb = parse_kb(_read(args.kb), args.allow_reserved)
    report = validate_kb(kb)
    if not report.ok:
        raise UsageError("invalid knowledge base: " + "; ".join(i.message for i in report.errors))
    return _apply_overrides(kb, args.minimize, args.allow_reserved)


def _load_circ(args) -> CircKB:
    if args.minimize:
        raise UsageError("--minimize applies to typicality knowledge bases only")
    return parse_circ_kb(_read(args.kb), args.allow_reserved)


def _query_from_args(args, k: int) -> Query:
    reserved = args.allow_reserved
    if args.command == "check":
        return Query.consistency()
    if args.command == "sat":
        return Query.satisfiable(parse_concept(args.concept, k, reserved))
    if args.command == "entails":
        gcis = parse_gcis(args.sub, k, reserved)
        if len(gcis) != 1:
            raise UsageError("--sub expects a single 'C <= D'")
        return Query.subsumes(gcis[0].lhs, gcis[0].rhs)
    a = parse_assertion(args.assertion, k, reserved)
    if not hasattr(a, "concept"):
        raise UsageError("--assert expects a concept assertion 'C(a)'")
    return Query.instance(a.concept, a.individual)


def _emit(out, structured: bool, record: dict, human: str):
    if structured:
        out.write(json.dumps(record, sort_keys=True, indent=2) + "\n")
    else:
        out.write(human.rstrip("\n") + "\n")


def _human_result(result: QueryResult) -> str:
    lines = [f"{result.verdict.value} (domain sizes {result.sizes_checked[0]}..{result.sizes_checked[-1]})"]
    if result.witness is not None:
        lines.append(f"witness at size {result.domain_size}: {serialize_model(result.witness)}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Commands


def _cmd_query(args, out):
    if _is_circ(args):
        circkb = _load_circ(args)
        q = _query_from_args(args, 0)
        result = circ_query(circkb, q, args.max_domain, ceiling=args.ceiling)
    else:
        kb = _load_typ(args)
        q = _query_from_args(args, kb.k)
        result = query(kb, q, args.max_domain, args.ceiling)
    human = _human_result(result)
    if args.timing:
        human += f"\n{result.elapsed:.3f}s, {result.nodes} search nodes"
    _emit(out, args.json, result_record(result, args.timing), human)


def _cmd_models(args, out):
    if args.domain < 1:
        raise UsageError("--domain must be at least 1")
    if _is_circ(args):
        raise UsageError("models lists typicality models only")
    kb = _load_typ(args)
    if args.minimal_only:
        models = list(minimal_models(kb, args.domain, args.ceiling))
    else:
        models = list(enumerate_models(kb, args.domain, ceiling=args.ceiling))
    records = [model_record(m) for m in models]
    human = "\n".join(serialize_model(m) for m in models) + f"\n{len(models)} model(s)"
    _emit(out, args.json, {"domain": args.domain, "count": len(models), "models": records}, human)


def _cmd_translate(args, out):
    if args.direction == "circ":
        kb = _load_typ(args)
        concept = parse_concept(args.concept, kb.k, args.allow_reserved) if args.concept else None
        sigma = compute_signature(kb, concept) if concept is not None else None
        circkb, ctx = to_circumscribed(kb, sigma)
        text = render_circ_kb(circkb)
        mapping = ctx.sidecar()
        if concept is not None:
            from .bridge import rewrite_bar

            mapping["concept"] = render_concept(rewrite_bar(concept, ctx))
    else:
        circkb = _load_circ(args)
        if not args.concept:
            raise UsageError("translate typ needs --concept (the concept whose satisfiability is encoded)")
        concept = parse_concept(args.concept, 0, args.allow_reserved)
        kb, c0, ctx = from_circumscribed(circkb, concept)
        text = render_kb(kb)
        mapping = {
            "marker": ctx.marker,
            "top": ctx.top,
            "individual": ctx.main,
            "witnesses": dict(sorted(ctx.witnesses.items())),
            "concept": render_concept(c0),
        }
    if args.mapping:
        Path(args.mapping).write_text(json.dumps(mapping, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    _emit(out, args.json, {"kb": text, "mapping": mapping}, text)


def _default_queries(kb: KnowledgeBase) -> list[Query]:
    sig = compute_signature(kb)
    queries = [Query.consistency()]
    queries += [Query.satisfiable(Typical(i, Name(a))) for i, a in sorted(sig.typicality)]
    queries += [Query.instance(Name(c), a) for a in kb.individuals() for c in sorted(sig.concepts)]
    return queries


def _cmd_crosscheck(args, out):
    if _is_circ(args):
        circkb = _load_circ(args)
        if args.assertions:
            raise UsageError("circumscribed crosschecks take --concept queries only")
        concepts = [parse_concept(c, 0, args.allow_reserved) for c in args.concept]
        if not concepts:
            concepts = [Name(c) for c in sorted(compute_signature(circkb.as_kb()).concepts)]
        report = crosscheck_reverse(circkb, concepts, args.max_domain, args.ceiling)
    else:
        kb = _load_typ(args)
        queries = [Query.satisfiable(parse_concept(c, kb.k, args.allow_reserved)) for c in args.concept]
        for text in args.assertions:
            a = parse_assertion(text, kb.k, args.allow_reserved)
            if not hasattr(a, "concept"):
                raise UsageError("--assert expects a concept assertion 'C(a)'")
            queries.append(Query.instance(a.concept, a.individual))
        report = crosscheck(kb, queries or _default_queries(kb), args.max_domain, args.ceiling)
    record = {
        "agreements": report.agreements,
        "total": len(report.entries),
        "all_agree": report.all_agree,
        "entries": [
            {
                "query": e.label,
                "direct": e.direct.verdict.value,
                "translated": e.translated.verdict.value,
                "agree": e.agree,
                **({"elapsed": round(e.elapsed, 6)} if args.timing else {}),
            }
            for e in report.entries
        ],
    }
    _emit(out, args.json, record, report.summary(args.timing))


_COMMANDS = {
    "check": _cmd_query,
    "sat": _cmd_query,
    "entails": _cmd_query,
    "instance": _cmd_query,
    "models": _cmd_models,
    "translate": _cmd_translate,
    "crosscheck": _cmd_crosscheck,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    """Run the command line ``argv``; returns the exit status."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        if args.max_domain < 1:
            raise UsageError("--max-domain must be at least 1")
        if args.workers != 1:
            raise UsageError("only --workers 1 is supported")
        _COMMANDS[args.command](args, out)
    except UsageError as e:
        err.write(f"error: {e}\n")
        return 1
    except ParseError as e:
        err.write(f"parse error: {e}\n")
        return 1
    except ValueError as e:
        err.write(f"error: {e}\n")
        return 1
    except EnumerationLimitError as e:
        err.write(f"resource limit: {e}\n")
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
