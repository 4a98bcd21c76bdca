"""Command-line front end.

Exit codes: 0 on success, 1 for domain failures (parse errors, validation
violations, unknown ids), 2 for usage errors (argparse's own convention).
Every data-producing command takes --json for machine-readable output.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys
from pathlib import Path

from .assess import (
    FragmentError,
    SubmissionFormatError,
    aggregate,
    detect_fragment_roots,
    extract_fragment,
    format_assessment_table,
    load_submission,
    report_to_dict,
    score,
    summary_to_dict,
)
from .corpus import CorpusLoadError, SegmentType, load_corpus
from .interlink import AlignmentConfig, align, emit_closematch
from .model import UnknownClassError, validate
from .reasoner import Direction, IsaCycleError, ReasonerConfig, Rule, materialize
from .search import SearchQuery, build_index_report, search
from .service import (
    Hub,
    ServiceConfig,
    canonical_json,
    create_app,
    effective_port,
    hit_to_json,
    links_to_json,
)
from .turtle import (
    RdfParseError,
    parse_dataset,
    parse_turtle,
    parse_turtle_report,
    serialize_materialized,
)

_DOMAIN_ERRORS = (
    RdfParseError,
    CorpusLoadError,
    SubmissionFormatError,
    IsaCycleError,
    FragmentError,
    ValueError,
    OSError,
)


def _print_json(payload) -> None:
    sys.stdout.buffer.write(canonical_json(payload) + b"\n")


def _write_bytes(out: str | None, data: bytes) -> None:
    if out is None:
        sys.stdout.buffer.write(data)
    else:
        Path(out).write_bytes(data)


def _cmd_validate(args: argparse.Namespace) -> int:
    report = parse_turtle_report(Path(args.ontology).read_bytes())
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if report.errors:
        if args.json:
            _print_json(
                {
                    "ok": False,
                    "parseErrors": [
                        {"line": e.line, "column": e.column, "message": e.message}
                        for e in report.errors
                    ],
                }
            )
        else:
            for error in report.errors:
                print(f"error: {error}", file=sys.stderr)
        return 1
    assert report.ontology is not None
    violations = validate(report.ontology, strict=not args.lax)
    if args.json:
        _print_json(
            {
                "ok": not violations,
                "violations": [
                    {"code": v.code.value, "subjectId": v.subject_id, "detail": v.detail}
                    for v in violations
                ],
            }
        )
    else:
        for v in violations:
            print(f"{v.code.value} {v.subject_id}: {v.detail}")
        print(f"{len(violations)} violations")
    return 1 if violations else 0


def _cmd_stats(args: argparse.Namespace) -> int:
    ontology = parse_turtle(Path(args.ontology).read_bytes())
    stats = ontology.stats()
    per_kind = {kind.value: count for kind, count in sorted(stats.per_kind.items(), key=lambda kv: kv[0].sort_index)}
    if args.json:
        _print_json(
            {
                "classCount": stats.class_count,
                "isaEdgeCount": stats.isa_edge_count,
                "otherEdgeCount": stats.other_edge_count,
                "perKind": per_kind,
            }
        )
        return 0
    print(f"classes      {stats.class_count}")
    print(f"isa edges    {stats.isa_edge_count}")
    print(f"other edges  {stats.other_edge_count}")
    for kind, count in per_kind.items():
        print(f"  {kind:<10} {count}")
    return 0


def _parse_rules(raw: str | None) -> frozenset[Rule]:
    if raw is None:
        return frozenset(Rule)
    rules = set()
    for name in raw.split(","):
        name = name.strip()
        if not name:
            continue
        try:
            rules.add(Rule(name.upper()))
        except ValueError:
            valid = ", ".join(r.value for r in Rule)
            raise ValueError(f"unknown rule {name!r}; valid rules: {valid}") from None
    return frozenset(rules)


def _cmd_materialize(args: argparse.Namespace) -> int:
    ontology = parse_turtle(Path(args.ontology).read_bytes())
    directions = [part.strip() for part in args.solves_dir.split(",")]
    if len(directions) != 2 or not all(d in ("down", "up") for d in directions):
        raise ValueError("--solves-dir expects 'down|up,down|up' (method,problem)")
    config = ReasonerConfig(
        enabled_rules=_parse_rules(args.rules),
        solves_method_direction=Direction(directions[0]),
        solves_problem_direction=Direction(directions[1]),
    )
    graph = materialize(ontology, config)
    _write_bytes(args.out, serialize_materialized(ontology, graph))
    return 0


def _cmd_align(args: argparse.Namespace) -> int:
    ontology = parse_turtle(Path(args.ontology).read_bytes())
    dataset = parse_dataset(Path(args.dataset).read_bytes())
    config = AlignmentConfig(
        root_category=args.root_category,
        max_depth=args.depth,
        use_labels=not args.no_labels,
        use_wikipedia_refs=not args.no_wiki_refs,
        languages=frozenset(args.langs.split(",")),
    )
    links = align(ontology, dataset, config)
    if args.json:
        data = canonical_json(links_to_json(links)) + b"\n"
    else:
        data = emit_closematch(links)
    _write_bytes(args.out, data)
    print(f"{len(links)} links", file=sys.stderr)
    return 0


def _cmd_index(args: argparse.Namespace) -> int:
    ontology = parse_turtle(Path(args.ontology).read_bytes())
    corpus = load_corpus(Path(args.corpus).read_bytes())
    index, warnings = build_index_report(corpus, ontology)
    occurrences = sum(len(v) for v in index.by_concept.values())
    if args.json:
        _print_json(
            {
                "concepts": len(index.by_concept),
                "occurrences": occurrences,
                "builtAgainst": index.built_against,
                "warnings": warnings,
            }
        )
        return 0
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(f"concepts     {len(index.by_concept)}")
    print(f"occurrences  {occurrences}")
    print(f"fingerprint  {index.built_against}")
    return 0


def _cmd_search(args: argparse.Namespace) -> int:
    ontology = parse_turtle(Path(args.ontology).read_bytes())
    corpus = load_corpus(Path(args.corpus).read_bytes())
    index, _ = build_index_report(corpus, ontology)
    segment_filter = frozenset(
        SegmentType(name.strip()) for name in args.segments.split(",") if name.strip()
    )
    query = SearchQuery(
        concept_id=args.concept,
        include_subclasses=not args.no_subclasses,
        segment_filter=segment_filter,
        page=args.page,
        page_size=args.page_size,
    )
    try:
        total, hits = search(index, corpus, ontology, query)
    except UnknownClassError:
        print(f"error: unknown class {args.concept}", file=sys.stderr)
        return 1
    if args.json:
        _print_json(
            {
                "total": total,
                "page": query.page,
                "pageSize": query.page_size,
                "hits": [hit_to_json(hit) for hit in hits],
            }
        )
        return 0
    print(f"total {total}")
    for hit in hits:
        print(
            f"{hit.formula_id}  {hit.symbol}  {hit.concept_id}  "
            f"{hit.segment_type.value}  {hit.article_id}"
        )
    return 0


def _cmd_assess(args: argparse.Namespace) -> int:
    gold = parse_turtle(Path(args.gold).read_bytes())
    if args.task_root and args.method_root:
        task_root, method_root = args.task_root, args.method_root
    else:
        task_root, method_root = detect_fragment_roots(gold)
    fragment = extract_fragment(gold, set(gold.classes), task_root, method_root)

    reports = []
    for path in args.submission:
        submission = load_submission(Path(path).read_bytes())
        reports.append(score(fragment, submission, materialize_submission=not args.raw_submission))
    summaries = aggregate(reports)
    if args.json:
        _print_json(
            {
                "reports": [report_to_dict(r) for r in reports],
                "summaries": [summary_to_dict(s) for s in summaries],
            }
        )
        return 0
    for report in reports:
        excluded = f" ({report.excluded_edge_count} edges excluded)" if report.excluded_edge_count else ""
        print(
            f"{report.participant_id} [{report.group.value}] "
            f"P={report.total.precision:.2f} R={report.total.recall:.2f} "
            f"F={report.total.f_score:.2f}{excluded}"
        )
    print()
    print(format_assessment_table(summaries))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    config = ServiceConfig(
        ontology_path=args.ontology,
        corpus_path=args.corpus,
        links_path=args.links,
        port=args.port,
        base_iri=args.base_iri,
    )
    hub = Hub(config)
    app = create_app(hub)
    if hasattr(signal, "SIGHUP"):
        signal.signal(signal.SIGHUP, lambda signum, frame: hub.reload())
    uvicorn.run(app, host=args.host, port=effective_port(config), log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ontohub", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an ontology file for violations")
    p.add_argument("--ontology", required=True)
    p.add_argument("--lax", action="store_true", help="skip domain/range and dual-root checks")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("stats", help="class and edge counts")
    p.add_argument("--ontology", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("materialize", help="emit the ontology with inferred edges")
    p.add_argument("--ontology", required=True)
    p.add_argument("--rules", help="comma-separated rule names (default: all)")
    p.add_argument("--solves-dir", default="down,down", help="method,problem directions")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_materialize)

    p = sub.add_parser("align", help="link classes to an external dataset")
    p.add_argument("--ontology", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--root-category", required=True)
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--no-labels", action="store_true")
    p.add_argument("--no-wiki-refs", action="store_true")
    p.add_argument("--langs", default="en,ru")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true", help="full links instead of closeMatch turtle")
    p.set_defaults(func=_cmd_align)

    p = sub.add_parser("index", help="build the occurrence index and report stats")
    p.add_argument("--corpus", required=True)
    p.add_argument("--ontology", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_index)

    p = sub.add_parser("search", help="query formula occurrences by concept")
    p.add_argument("--corpus", required=True)
    p.add_argument("--ontology", required=True)
    p.add_argument("--concept", required=True)
    p.add_argument("--no-subclasses", action="store_true")
    p.add_argument("--segments", default="", help="comma-separated segment types")
    p.add_argument("--page", type=int, default=1)
    p.add_argument("--page-size", type=int, default=20)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("assess", help="score taxonomy submissions against a gold fragment")
    p.add_argument("--gold", required=True)
    p.add_argument("--submission", action="append", required=True)
    p.add_argument("--task-root")
    p.add_argument("--method-root")
    p.add_argument("--raw-submission", action="store_true", help="score edges as given, no closure")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_assess)

    p = sub.add_parser("serve", help="run the HTTP hub")
    p.add_argument("--ontology", required=True)
    p.add_argument("--corpus")
    p.add_argument("--links")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--base-iri", default="http://ontomathpro.org/ontology/")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RdfParseError as exc:
        for error in exc.errors:
            print(f"error: {error}", file=sys.stderr)
        return 1
    except CorpusLoadError as exc:
        for error in exc.errors:
            print(f"error: line {error.line}: {error.message}", file=sys.stderr)
        return 1
    except SubmissionFormatError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return 1
    except UnknownClassError as exc:
        print(f"error: unknown class {exc.args[0]}", file=sys.stderr)
        return 1
    except _DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
