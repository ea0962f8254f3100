"""Batch command-line interface.

Every command prints one document on stdout, as human-readable text or as
a structured JSON document. Exit codes: 0 ok, 2 parse or usage error,
3 evaluation error, 4 manifest failure. On error the document describes
the error and the message also goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .acceptance import AcceptanceLevel, accepted_set, corpus_diff, corpus_report
from .ep import evidential_probability, interval_dict
from .ep import format_prob as _number
from .errors import EvidentialError, InconsistentEvidence, ParseError, ReasoningError
from .evidence import EvidenceBase, assert_evidence
from .formula import Formula
from .language import Default
from .logic import DEFAULT_ATOM_BUDGET
from .parser import KEYWORDS, parse_formula, parse_item, parse_program, parse_universe
from .rivals import (
    CONTRADICTION,
    DefaultTheory,
    MHSentence,
    compute_extensions,
    mh_derive,
    normally,
    plain,
    verify_trace,
)
from .rivals.mh import WRAPPERS
from .scenarios import (
    SCENARIO_NAMES,
    ScenarioRun,
    build_scenario,
    check_manifest,
    expected_utility_comparison,
)

EXIT_OK, EXIT_PARSE, EXIT_EVAL, EXIT_MANIFEST = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _epsilon(text: str) -> float:
    try:
        value = float(text)
        AcceptanceLevel(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--epsilon", type=_epsilon, default=None,
                        help="acceptance threshold is 1 - epsilon (default 0.01; "
                             "scenarios use their own default)")
    common.add_argument("--format", choices=("text", "structured", "json"), default="text")
    common.add_argument("--atom-budget", type=_positive_int, default=DEFAULT_ATOM_BUDGET)

    p = _Parser(prog="evidential", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"evidential {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("query", parents=[common], help="probability and acceptance of one sentence")
    q.add_argument("file")
    q.add_argument("query")

    c = sub.add_parser("corpus", parents=[common], help="accepted members of a query universe")
    c.add_argument("file")
    c.add_argument("--universe", required=True)
    c.add_argument("--cores", type=_positive_int, default=1, help="minimal cores to report")

    d = sub.add_parser("diff", parents=[common], help="corpus change after asserting an item")
    d.add_argument("file")
    d.add_argument("item", help="a fact, rule or stat declaration; a bare formula is a fact")
    d.add_argument("--universe", required=True)

    e = sub.add_parser("extensions", parents=[common], help="extensions of the file's defaults")
    e.add_argument("file")

    m = sub.add_parser("mh-trace", parents=[common], help="goal-directed derivation in the Probably rules")
    m.add_argument("file")
    m.add_argument("--goal", action="append", required=True,
                   help="e.g. 'Probably(p(a))', 'Consistent(q(a))', 'false'; repeatable")
    m.add_argument("--normally", action="append", default=[], help="extra Normally(...) bodies")
    m.add_argument("--rules", default="1,2,3,4,5", help="comma-separated rule numbers")
    m.add_argument("--step-bound", type=_positive_int, default=50)

    s = sub.add_parser("scenario", parents=[common], help="run a built-in scenario and its manifest")
    s.add_argument("name", choices=SCENARIO_NAMES)
    s.add_argument("--n", type=int, default=None, help="lottery tickets")
    s.add_argument("--N", dest="N", type=int, default=None, help="measurements")
    s.add_argument("--tol", type=float, default=None, help="measurement tolerance")
    s.add_argument("--p", type=float, default=None, help="per-measurement error probability")
    s.add_argument("--export-kb", metavar="STAGE", default=None,
                   help="print the named stage in the knowledge language and stop")

    u = sub.add_parser("eu-compare", parents=[common], help="acceptance vs expected utility")
    u.add_argument("--N", dest="N", type=_positive_int, required=True)
    u.add_argument("--p", type=float, required=True)
    u.add_argument("--gain", type=float, required=True)
    u.add_argument("--loss", type=float, required=True)
    return p


# -- helpers -----------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str, budget: int) -> tuple:
    program = parse_program(_read(path))
    try:
        E = EvidenceBase.from_program(program, budget)
    except InconsistentEvidence as exc:
        raise ReasoningError(str(exc)) from None
    return program, E


def _eps(args, fallback: float = 0.01) -> float:
    return fallback if args.epsilon is None else args.epsilon


def _ordered(items, order: Sequence[Formula]) -> list[str]:
    rank = {f: i for i, f in enumerate(order)}
    return [str(f) for f in sorted(items, key=lambda f: rank.get(f, len(rank)))]


def _corpus_dict(corpus) -> dict:
    return {
        "epsilon": _number(corpus.epsilon),
        "universe_size": len(corpus.universe),
        "accepted": [
            {"sentence": str(e.sentence), "interval": interval_dict(e.interval)}
            for e in corpus.entries
        ],
        "rejected": [
            {"sentence": str(e.sentence), "interval": interval_dict(e.interval)}
            for e in corpus.evaluations if e.sentence not in corpus
        ],
    }


def _report_dict(report) -> dict:
    return {
        "jointly_consistent": report.jointly_consistent,
        "cores": None if report.cores is None else [[str(f) for f in c] for c in report.cores],
        "single_premise_closure_violations": [
            [str(a), str(b)] for a, b in report.single_premise_closure_violations],
        "conjunction_closure": report.conjunction_closure,
    }


def _diff_dict(diff, order) -> dict:
    return {
        "added": _ordered(diff.added, order),
        "retracted": _ordered(diff.retracted, order),
        "unchanged": diff.unchanged,
        "interval_changed": _ordered(diff.changed, order),
    }


def _extensions_dict(exts) -> dict:
    return {"count": len(exts), "extensions": [[str(f) for f in e.consequents] for e in exts]}


def _mh_sentence(text: str, signature) -> MHSentence:
    body = text.strip()
    for w in WRAPPERS:
        if w != "plain" and body.startswith(w + "(") and body.endswith(")"):
            return MHSentence(parse_formula(body[len(w) + 1:-1], signature), w)
    return plain(parse_formula(body, signature))


# -- commands -------------------------------------------------------------------

def cmd_query(args) -> tuple[dict, int]:
    program, E = _load(args.file, args.atom_budget)
    phi = parse_formula(args.query, program.signature)
    eps = _eps(args)
    interval, trace = evidential_probability(E, phi)
    return {
        "query": str(phi),
        "interval": interval_dict(interval),
        "epsilon": _number(eps),
        "accepted": AcceptanceLevel(eps).admits(interval),
        "trace": trace.to_dicts(),
    }, EXIT_OK


def cmd_corpus(args) -> tuple[dict, int]:
    program, E = _load(args.file, args.atom_budget)
    universe = parse_universe(_read(args.universe), program.signature)
    corpus = accepted_set(E, _eps(args), universe)
    report = corpus_report(E, _eps(args), universe, core_limit=args.cores, corpus=corpus)
    return {"corpus": _corpus_dict(corpus), "report": _report_dict(report)}, EXIT_OK


def _item(text: str, signature):
    body = text.strip()
    first = body.split(None, 1)[0] if body else ""
    if first not in KEYWORDS:
        body = f"fact {body.rstrip('.')}."
    item = parse_item(body, signature)
    if isinstance(item, Default):
        raise ParseError("defaults are not evidence and cannot be asserted")
    return item


def cmd_diff(args) -> tuple[dict, int]:
    program, E = _load(args.file, args.atom_budget)
    universe = parse_universe(_read(args.universe), program.signature)
    item = _item(args.item, program.signature)
    try:
        after = assert_evidence(E, item)
    except InconsistentEvidence as exc:
        raise ReasoningError(str(exc)) from None
    eps = _eps(args)
    before_k, after_k = accepted_set(E, eps, universe), accepted_set(after, eps, universe)
    diff = corpus_diff(before_k, after_k)
    return {"item": str(item), "epsilon": _number(eps), "diff": _diff_dict(diff, universe)}, EXIT_OK


def cmd_extensions(args) -> tuple[dict, int]:
    program, E = _load(args.file, args.atom_budget)
    theory = DefaultTheory(E.certain, program.defaults, args.atom_budget)
    return _extensions_dict(compute_extensions(theory)), EXIT_OK


def cmd_mh_trace(args) -> tuple[dict, int]:
    program, E = _load(args.file, args.atom_budget)
    sig = program.signature
    try:
        rules = tuple(int(r) for r in args.rules.split(",") if r.strip())
    except ValueError:
        raise UsageError(f"bad rule list {args.rules!r}") from None
    if not set(rules) <= set(range(1, 7)):
        raise UsageError("rules must be drawn from 1..6")
    sigma0 = [plain(f) for f in E.certain]
    # A prerequisite-free normal default ( : M p / p ) reads as Normally(p).
    sigma0 += [normally(d.consequent) for d in program.defaults
               if d.prerequisite is None and d.justifications == (d.consequent,)]
    sigma0 += [normally(parse_formula(t, sig)) for t in args.normally]
    goals = [CONTRADICTION if g.strip() == "false" else _mh_sentence(g, sig) for g in args.goal]
    trace = mh_derive(sigma0, rules, goals, args.step_bound, args.atom_budget)
    doc = trace.to_dict()
    doc["replays"] = verify_trace(sigma0, rules, trace, args.atom_budget)
    return doc, EXIT_OK


def _scenario_params(args) -> dict:
    params = {}
    if args.name == "lottery" and args.n is not None:
        params["n"] = args.n
    if args.name == "measurement":
        for key in ("N", "tol", "p"):
            if getattr(args, key) is not None:
                params[key] = getattr(args, key)
    extra = [k for k in ("n", "N", "tol", "p") if getattr(args, k) is not None and k not in params]
    if extra:
        raise UsageError(f"scenario {args.name} takes no --{', --'.join(extra)}")
    return params


def cmd_scenario(args) -> tuple[dict, int]:
    try:
        sc = build_scenario(args.name, args.epsilon, **_scenario_params(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.export_kb is not None:
        try:
            return {"knowledge": sc.knowledge_text(args.export_kb)}, EXIT_OK
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    run = ScenarioRun(sc)
    stages = []
    for st in sc.stages:
        entry = {"name": st.name, "parent": st.parent,
                 "added": None if st.added is None else str(st.added),
                 "corpus": _corpus_dict(run.corpus(st.name)),
                 "report": _report_dict(run.report(st.name))}
        if st.parent is not None:
            entry["diff"] = _diff_dict(run.diff(st.name), sc.universe)
        stages.append(entry)
    results = check_manifest(sc, run)
    doc = {
        "scenario": sc.label,
        "epsilon": _number(sc.epsilon),
        "stages": stages,
        "extensions": _extensions_dict(run.extensions) if sc.default_theory else None,
        "mh_traces": [t.to_dict() for t in run.mh_traces],
        "manifest": [
            {"assertion": r.assertion, "pass": r.passed, **({"error": r.error} if r.error else {})}
            for r in results
        ],
    }
    return doc, EXIT_OK if all(r.passed for r in results) else EXIT_MANIFEST


def cmd_eu_compare(args) -> tuple[dict, int]:
    try:
        r = expected_utility_comparison(args.N, args.p, args.gain, args.loss, _eps(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return {
        "N": r.N, "p": _number(r.p), "gain": _number(r.gain), "loss": _number(r.loss),
        "epsilon": _number(r.epsilon),
        "value_of_use": _number(r.value_of_use),
        "per_measurement_decision": {"acceptance": r.acceptance_decision,
                                     "probabilistic": r.probabilistic_decision},
        "eu_acceptance": _number(r.eu_acceptance),
        "eu_probabilistic": _number(r.eu_probabilistic),
    }, EXIT_OK


COMMANDS = {
    "query": cmd_query,
    "corpus": cmd_corpus,
    "diff": cmd_diff,
    "extensions": cmd_extensions,
    "mh-trace": cmd_mh_trace,
    "scenario": cmd_scenario,
    "eu-compare": cmd_eu_compare,
}


# -- rendering ----------------------------------------------------------------------

def render_structured(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _text_lines(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        if set(value) == {"lower", "upper"}:
            return [f"{pad}[{value['lower']}, {value['upper']}]"]
        out = []
        for k, v in value.items():
            flat = isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)
            if isinstance(v, (dict, list)) and v and not _is_interval(v) and not flat:
                out.append(f"{pad}{k}:")
                out.extend(_text_lines(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
        return out
    if isinstance(value, list):
        out = []
        for v in value:
            if isinstance(v, dict) and not _is_interval(v):
                lines = _text_lines(v, indent + 1)
                out.append(f"{pad}- {lines[0].strip()}")
                out.extend(lines[1:])
            else:
                out.append(f"{pad}- {_scalar(v)}")
        return out
    return [f"{pad}{_scalar(value)}"]


def _is_interval(v) -> bool:
    return isinstance(v, dict) and set(v) == {"lower", "upper"}


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if _is_interval(v):
        return f"[{v['lower']}, {v['upper']}]"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    return str(v)


def render_text(doc: dict) -> str:
    if "knowledge" in doc.get("result", {}):
        return doc["result"]["knowledge"]
    doc = {**doc, "command": shlex.join(doc["command"])}
    return "\n".join(_text_lines(doc)) + "\n"


def _command_echo(argv: Sequence[str]) -> list[str]:
    return ["evidential", *argv]


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = "structured" if any(a in ("--format=structured", "--format=json") for a in argv) \
        or any(a == "--format" and nxt in ("structured", "json") for a, nxt in zip(argv, argv[1:])) \
        else "text"
    parser = build_parser()
    header = {"command": _command_echo(argv), "version": __version__}
    try:
        args = parser.parse_args(argv)
        payload, status = COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail(header, "usage", str(exc), EXIT_PARSE, fmt)
    except ParseError as exc:
        return _fail(header, "parse", str(exc), EXIT_PARSE, fmt)
    except (ReasoningError, EvidentialError) as exc:
        return _fail(header, "evaluation", str(exc), EXIT_EVAL, fmt)
    doc = {**header, "status": status, "result": payload}
    sys.stdout.write(render_structured(doc) if fmt == "structured" else render_text(doc))
    if status == EXIT_MANIFEST:
        failed = [m["assertion"] for m in payload["manifest"] if not m["pass"]]
        print("manifest failures: " + "; ".join(failed), file=sys.stderr)
    return status


def _fail(header: dict, kind: str, message: str, status: int, fmt: str) -> int:
    doc = {**header, "status": status, "error": {"kind": kind, "message": message}}
    sys.stdout.write(render_structured(doc) if fmt == "structured" else render_text(doc))
    print(f"evidential: {kind} error: {message}", file=sys.stderr)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
