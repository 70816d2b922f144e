"""Command-line front end.

Subcommands: generate, interpret, enumerate, induce, evaluate, classify,
overlap, fixtures, probe.  Failures exit non-zero with a machine-readable
error object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import fixtures as fx
from .derive import ParsePolicy, canonical_derive, enumerate_outputs
from .episodes import (
    GenConfig,
    QueryPair,
    generate_episode,
    make_probe_queries,
    read_episode,
    write_episode,
)
from .errors import ColorseqError
from .evaluate import classify_run, consistency_metrics, overlap_count, read_run, score_run
from .grammar import Alphabet, format_grammar, parse_grammar
from .induce import SearchBudget, induce_grammars


def _policy(args) -> ParsePolicy:
    caps = getattr(args, "caps", "on") == "on"
    name = getattr(args, "policy", "default") or "default"
    if name == "default":
        return ParsePolicy(enforce_caps=caps)
    scan, _, split = name.partition("/")
    return ParsePolicy(scan=scan, split=split, enforce_caps=caps)


def _load_grammar(args):
    if getattr(args, "grammar", None):
        lines = Path(args.grammar).read_text().splitlines()
        return parse_grammar([l for l in lines if l.strip()])
    if getattr(args, "episode", None):
        e = read_episode(Path(args.episode).read_text())
        if e.grammar is None:
            raise ColorseqError("episode file carries no grammar")
        return e.grammar
    if getattr(args, "fixture", None):
        return fx.fixture_grammar(args.fixture)
    raise ColorseqError("need --grammar, --episode, or --fixture")


def _load_episode(args):
    if getattr(args, "episode", None):
        return read_episode(Path(args.episode).read_text())
    if getattr(args, "fixture", None):
        return fx.fixture_episode(args.fixture)
    raise ColorseqError("need --episode or --fixture")


def _emit(args, payload: dict, text: str, rows: list[dict] | None = None) -> None:
    fmt = getattr(args, "format", "text")
    if fmt == "json":
        rendered = json.dumps(payload, indent=2) + "\n"
    elif fmt == "csv":
        if rows is None:
            raise ColorseqError("this subcommand has no csv form")
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
        rendered = buf.getvalue()
    else:
        rendered = text
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(rendered)
    else:
        sys.stdout.write(rendered)


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    def line(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    return "\n".join([line(headers)] + [line(r) for r in rows]) + "\n"


# -- subcommands -------------------------------------------------------------


def cmd_generate(args) -> int:
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = GenConfig(allow_ambiguous_queries=not args.no_ambiguous)
    paths = []
    for i in range(args.episodes):
        seed = args.seed + i
        e = generate_episode(Alphabet(), cfg, seed, episode_id=f"ep-{seed}")
        path = out_dir / f"{e.id}.json"
        path.write_text(write_episode(e))
        paths.append(str(path))
    sys.stdout.write("\n".join(paths) + "\n")
    return 0


def cmd_interpret(args) -> int:
    g = _load_grammar(args)
    out = canonical_derive(g, tuple(args.words), _policy(args))
    _emit(args, {"in": args.words, "out": list(out)}, " ".join(out) + "\n")
    return 0


def cmd_enumerate(args) -> int:
    g = _load_grammar(args)
    outs = sorted(enumerate_outputs(g, tuple(args.words), _policy(args)))
    text = "\n".join(" ".join(o) for o in outs) + "\n"
    _emit(args, {"in": args.words, "outputs": [list(o) for o in outs]}, text)
    return 0


def cmd_induce(args) -> int:
    e = _load_episode(args)
    support = [(p.inp, p.out) for p in e.support]
    alphabet = e.grammar.alphabet if e.grammar else Alphabet(
        tuple(dict.fromkeys(w for p in e.support for w in p.inp)))
    budget = SearchBudget(max_hypotheses=args.budget, max_rhs_len=args.max_rhs)
    result = induce_grammars(support, alphabet, budget, _policy(args))
    shown = result.grammars[: args.limit] if args.limit else result.grammars
    payload = {
        "consistent_grammars": len(result.grammars),
        "complete": result.complete,
        "grammars": [format_grammar(g) for g in shown],
    }
    text = f"{len(result.grammars)} consistent grammars (complete={result.complete})\n"
    for g in shown:
        text += "\n" + "\n".join(format_grammar(g)) + "\n"
    _emit(args, payload, text)
    return 0


def cmd_evaluate(args) -> int:
    e = _load_episode(args)
    run = read_run(Path(args.run).read_text())
    report = score_run(e, run, _policy(args))
    rows = [{"query": " ".join(q.inp), "correct": q.correct, "total": q.total,
             "rate": f"{q.rate:.2f}"} for q in report.queries]
    payload = {
        "episode": report.episode_id,
        "per_query": rows,
        "correct": report.correct,
        "total": report.total,
        "rate": report.rate,
    }
    text = _table(["query", "correct", "total", "rate"],
                  [[r["query"], str(r["correct"]), str(r["total"]), r["rate"]] for r in rows])
    text += f"episode rate: {report.correct}/{report.total} = {100 * report.rate:.0f}%\n"
    _emit(args, payload, text, rows)
    return 0


def cmd_classify(args) -> int:
    e = _load_episode(args)
    run = read_run(Path(args.run).read_text())
    budget = SearchBudget(max_hypotheses=args.budget, max_rhs_len=args.max_rhs)
    labels = classify_run(e, run, budget, _policy(args))
    metrics = consistency_metrics(run, labels)
    rows = []
    for i, (q, row) in enumerate(zip(e.query, labels)):
        for sample, label in zip(run.responses[i], row):
            rows.append({
                "query": " ".join(q.inp),
                "output": " ".join(sample),
                "label": label.describe(),
            })
    summary = [{
        "query": " ".join(q.inp),
        "modal_share": m.modal_share,
        "distinct": m.distinct_outputs,
        "non_systematic_rate": m.non_systematic_rate,
    } for q, m in zip(e.query, metrics)]
    payload = {"episode": e.id, "labels": rows, "consistency": summary}
    text = _table(["query", "output", "label"],
                  [[r["query"], r["output"], r["label"]] for r in rows])
    _emit(args, payload, text, rows)
    return 0


def cmd_overlap(args) -> int:
    def pool(directory: str):
        grammars = []
        for path in sorted(Path(directory).glob("*.json")):
            e = read_episode(path.read_text())
            if e.grammar is None:
                raise ColorseqError(f"{path} carries no grammar")
            grammars.append(e.grammar)
        if not grammars:
            raise ColorseqError(f"no episode files under {directory}")
        return grammars

    train, val = pool(args.train), pool(args.val)
    report = overlap_count(train, val)
    payload = {"overlap": report.overlap, "pool_size": report.pool_size,
               "matched": [m is not None for m in report.matched_keys]}
    _emit(args, payload, f"{report.overlap}/{report.pool_size} validation grammars "
                         "reuse a training operation combination\n")
    return 0


def cmd_fixtures(args) -> int:
    checks = fx.verify_fixtures()
    rows = []
    failed = False
    for c in checks:
        rate = f"{100 * c.score.rate:.0f}%" if c.score else "-"
        reported = f"{c.reported_rate}%" if c.reported_rate is not None else "-"
        note = "DISCREPANCY vs reported" if c.discrepancy else ""
        rows.append([c.fid, "ok" if c.support_ok else "FAIL",
                     "ok" if c.queries_ok else "FAIL", rate, reported, note])
        failed = failed or not c.ok
    text = _table(["episode", "support", "queries", "run rate", "reported", "note"], rows)
    payload = {"fixtures": [
        {"episode": c.fid, "support_ok": c.support_ok, "queries_ok": c.queries_ok,
         "rate": c.score.rate if c.score else None,
         "reported": c.reported_rate, "discrepancy": c.discrepancy}
        for c in checks]}
    _emit(args, payload, text)
    if args.export:
        out_dir = Path(args.export)
        out_dir.mkdir(parents=True, exist_ok=True)
        from .evaluate import write_run
        for fid in fx.FIXTURE_IDS:
            (out_dir / f"episode-{fid}.json").write_text(write_episode(fx.fixture_episode(fid)))
            (out_dir / f"run-{fid}.json").write_text(write_run(fx.fixture_run(fid)))
    return 1 if failed else 0


def cmd_probe(args) -> int:
    g = _load_grammar(args)
    queries = make_probe_queries(g, args.family, _policy(args))
    payload = {"family": args.family, "queries": [
        {"in": list(q.inp), "out": list(q.target),
         "alts": [list(a) for a in q.alts], "ambiguous": q.ambiguous}
        for q in queries]}
    rows = [[" ".join(q.inp), " ".join(q.target), str(len(q.alts)), str(q.ambiguous)]
            for q in queries]
    _emit(args, payload, _table(["query", "target", "outputs", "ambiguous"], rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="colorseq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, caps=True, fmt=True):
        p.add_argument("--policy", default="default",
                       help="'default' or '<scan>/<split>', e.g. leftmost/longest_prefix")
        if caps:
            p.add_argument("--caps", choices=("on", "off"), default="on")
        if fmt:
            p.add_argument("--format", choices=("json", "text", "csv"), default="text")
            p.add_argument("--out", help="write output to this path instead of stdout")

    def grammar_source(p):
        p.add_argument("--grammar", help="file of rule lines")
        p.add_argument("--episode", help="episode JSON file")
        p.add_argument("--fixture", choices=fx.FIXTURE_IDS, help="bundled episode id")

    p = sub.add_parser("generate", help="write seeded episode files")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--episodes", type=int, default=1)
    p.add_argument("--no-ambiguous", action="store_true")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("interpret", help="grammar + input -> canonical output")
    grammar_source(p)
    p.add_argument("words", nargs="+")
    common(p)
    p.set_defaults(func=cmd_interpret)

    p = sub.add_parser("enumerate", help="all derivation outputs of an input")
    grammar_source(p)
    p.add_argument("words", nargs="+")
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("induce", help="support set -> consistent grammars")
    p.add_argument("--episode")
    p.add_argument("--fixture", choices=fx.FIXTURE_IDS)
    p.add_argument("--budget", type=int, default=500_000)
    p.add_argument("--max-rhs", type=int, default=8)
    p.add_argument("--limit", type=int, default=10, help="grammars to print (0 = all)")
    common(p)
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("evaluate", help="episode + run file -> scores")
    p.add_argument("--episode")
    p.add_argument("--fixture", choices=fx.FIXTURE_IDS)
    p.add_argument("--run", required=True)
    common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("classify", help="episode + run file -> labeled report")
    p.add_argument("--episode")
    p.add_argument("--fixture", choices=fx.FIXTURE_IDS)
    p.add_argument("--run", required=True)
    p.add_argument("--budget", type=int, default=500_000)
    p.add_argument("--max-rhs", type=int, default=8)
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("overlap", help="two episode pools -> combination overlap")
    p.add_argument("--train", required=True)
    p.add_argument("--val", required=True)
    common(p, caps=False)
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("fixtures", help="verify the bundled reference episodes")
    p.add_argument("--export", help="also write episode/run JSON files here")
    common(p, caps=False)
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("probe", help="emit structure-sensitivity probe queries")
    grammar_source(p)
    p.add_argument("--family", choices=("unary-binary", "binary-unary"),
                   default="unary-binary")
    common(p)
    p.set_defaults(func=cmd_probe)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ColorseqError as exc:
        error = {"error": type(exc).__name__, "detail": str(exc)}
        sys.stderr.write(json.dumps(error) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
