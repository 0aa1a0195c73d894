"""Command-line pipeline orchestrator over a project directory.

Each subcommand reads the artifact of the previous stage and writes its
own, so every intermediate step stays inspectable:

    pages/ -> links.jsonl -> candidates.jsonl -> scored.jsonl
           -> annotations.jsonl -> corpus.tsv -> stats.json
           -> report.json / learning_curve.csv
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import defaultdict
from pathlib import Path

from . import annotation, candidates as cand, corpus as corpus_mod, ingest
from .config import CONFIG_NAME, ConfigError, ProjectConfig, load_config
from .ml import EvalConfig, cross_validate, learning_curve, learning_curve_csv, write_report
from .server import AnnotationHTTPServer

PAGES_DIR = "pages"
LINKS_FILE = "links.jsonl"
CANDIDATES_FILE = "candidates.jsonl"
SCORED_FILE = "scored.jsonl"
JOURNAL_FILE = "annotations.jsonl"
CORPUS_TSV = "corpus.tsv"
CORPUS_JSONL = "corpus.jsonl"
STATS_FILE = "stats.json"
REPORT_FILE = "report.json"
REPORT_NO_MISC_FILE = "report_without_misc.json"
CURVE_FILE = "learning_curve.csv"


class MissingStageInput(FileNotFoundError):
    def __init__(self, path: Path, producer: str) -> None:
        super().__init__(
            f"{path} does not exist; run `wikiner {producer}` first"
        )
        self.path = path
        self.producer = producer


def _require(path: Path, producer: str) -> Path:
    if not path.exists():
        raise MissingStageInput(path, producer)
    return path


def _project(args) -> Path:
    return Path(args.project)


# -- subcommand implementations ---------------------------------------------


def cmd_init(args) -> int:
    project = _project(args)
    project.mkdir(parents=True, exist_ok=True)
    (project / PAGES_DIR).mkdir(exist_ok=True)
    config = ProjectConfig(project_dir=project)
    config_path = project / CONFIG_NAME
    if not config_path.exists():
        config.save()
    seeds = project / config.seed_list
    if not seeds.exists():
        seeds.write_text(
            "# One Wikipedia category page title or URL per line.\n", encoding="utf-8"
        )
    print(f"initialized project at {project}")
    return 0


def cmd_fetch(args) -> int:
    project = _project(args)
    config = load_config(project)
    seeds_path = _require(project / config.seed_list, "init")
    titles = ingest.read_seed_list(seeds_path)
    fetcher = ingest.PageFetcher(
        cache_dir=project / PAGES_DIR,
        online=args.online,
        politeness_delay_ms=args.delay,
    )
    fetched = 0
    for title in titles:
        fetcher.fetch(title)
        fetched += 1
    print(f"fetched or reused {fetched} page(s) in {project / PAGES_DIR}")
    return 0


def _load_pages(pages_dir: Path) -> list[ingest.RawPage]:
    pages = []
    for path in sorted(pages_dir.glob("*.page")):
        header_line, _, body = path.read_text(encoding="utf-8").partition("\n")
        header = json.loads(header_line)
        pages.append(
            ingest.RawPage(
                title=header["title"],
                namespace=ingest.classify_namespace(header["title"]),
                content_kind=header["kind"],
                body=body,
                source_url=header.get("url"),
                fetched_at=header.get("fetched_at"),
            )
        )
    return sorted(pages, key=lambda p: p.title)


def cmd_extract(args) -> int:
    project = _project(args)
    pages_dir = _require(project / PAGES_DIR, "fetch")
    pages = _load_pages(pages_dir)
    if not pages:
        raise MissingStageInput(pages_dir / "*.page", "fetch")
    links: list[ingest.WikiLink] = []
    warnings = 0
    for page in pages:
        result = ingest.parse_links(page)
        links.extend(result.links)
        warnings += result.warnings
    ingest.write_links_jsonl(links, project / LINKS_FILE)
    note = f" ({warnings} parse warning(s))" if warnings else ""
    print(f"extracted {len(links)} links from {len(pages)} page(s){note}")
    return 0


def cmd_candidates(args) -> int:
    project = _project(args)
    links = ingest.read_links_jsonl(_require(project / LINKS_FILE, "extract"))
    provenance: dict[str, list[list[str]]] = defaultdict(list)
    for link in links:
        provenance[link.anchor_text].append([link.source_title, link.target_title])
    deduped = cand.dedup([link.anchor_text for link in links])
    out = project / CANDIDATES_FILE
    tmp = out.with_suffix(".tmp")
    with tmp.open("w", encoding="utf-8") as fh:
        for surface, count in deduped:
            fh.write(
                json.dumps(
                    {
                        "surface": surface,
                        "occurrence_count": count,
                        "provenance": provenance[surface],
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    tmp.replace(out)
    print(f"{len(links)} anchors -> {len(deduped)} unique candidates")
    return 0


def _read_candidate_stage(project: Path) -> list[dict]:
    rows = []
    with _require(project / CANDIDATES_FILE, "candidates").open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return rows


def cmd_score(args) -> int:
    project = _project(args)
    config = load_config(project)
    rows = _read_candidate_stage(project)
    tagger = cand.make_tagger(args.tagger or config.tagger)
    pos_agg = args.pos_agg or config.pos_agg
    wt_agg = args.wt_agg or config.wt_agg
    scored = cand.score_candidates(
        [(row["surface"], row["occurrence_count"]) for row in rows],
        tagger,
        pos_agg=pos_agg,
        wt_agg=wt_agg,
    )
    out = project / SCORED_FILE
    tmp = out.with_suffix(".tmp")
    with tmp.open("w", encoding="utf-8") as fh:
        for row, candidate in zip(rows, scored):
            record = candidate.to_json()
            record["provenance"] = row.get("provenance", [])
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    tmp.replace(out)
    selected = sum(1 for c in scored if c.selected)
    print(f"scored {len(scored)} candidates, selected {selected}")
    return 0


def _read_scored(project: Path) -> list[tuple[cand.Candidate, list[tuple[str, str]]]]:
    out = []
    with _require(project / SCORED_FILE, "score").open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            candidate = cand.Candidate.from_json(obj)
            prov = [tuple(p) for p in obj.get("provenance", [])]
            out.append((candidate, prov))
    return out


def _entity_records(project: Path) -> list[corpus_mod.EntityRecord]:
    records = []
    for candidate, prov in _read_scored(project):
        if candidate.selected:
            records.append(
                corpus_mod.EntityRecord.from_surface(
                    candidate.surface, candidate=candidate, provenance=prov
                )
            )
    return records


def _service(project: Path) -> annotation.AnnotationService:
    config = load_config(project)
    return annotation.AnnotationService(
        records=_entity_records(project),
        annotators=config.annotators,
        journal_path=project / JOURNAL_FILE,
    )


def cmd_stats(args) -> int:
    project = _project(args)
    links = ingest.read_links_jsonl(_require(project / LINKS_FILE, "extract"))
    probable = len(_read_candidate_stage(project))
    records = _entity_records(project)
    corpus_path = project / CORPUS_TSV
    if corpus_path.exists():
        labeled = {
            r.surface: r.final_label
            for r in corpus_mod.import_corpus(corpus_path, "tsv")
        }
        for rec in records:
            rec.final_label = labeled.get(rec.surface)
    pages = len({link.source_title for link in links})
    stats = corpus_mod.compute_stats(records, (pages, len(links), probable))
    corpus_mod.write_stats_json(stats, project / STATS_FILE)
    print(json.dumps(stats.to_json(), indent=2, sort_keys=True))
    return 0


def cmd_serve(args) -> int:
    project = _project(args)
    config = load_config(project)
    server = AnnotationHTTPServer(
        _service(project),
        host=args.host,
        port=args.port if args.port is not None else config.port,
        static_dir=Path(args.ui_dir) if args.ui_dir else None,
        export_dir=project,
    )
    print(f"annotation service listening on {server.url}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


def cmd_agreement(args) -> int:
    service = _service(_project(args))
    report = service.agreement()
    print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    return 0


def cmd_adjudicate(args) -> int:
    service = _service(_project(args))
    service.adjudicate(args.entity_id, args.label)
    print(f"adjudicated {args.entity_id} as {args.label}")
    return 0


def cmd_finalize(args) -> int:
    project = _project(args)
    records = _service(project).finalize()
    corpus_mod.export_corpus(records, project / CORPUS_TSV, "tsv")
    corpus_mod.export_corpus(records, project / CORPUS_JSONL, "jsonl")
    print(f"finalized corpus with {len(records)} entities -> {project / CORPUS_TSV}")
    return 0


def cmd_export(args) -> int:
    project = _project(args)
    records = _service(project).finalize()
    out = Path(args.out) if args.out else project / f"corpus.{args.format}"
    corpus_mod.export_corpus(records, out, args.format)
    print(f"exported {len(records)} entities -> {out}")
    return 0


def _corpus_pairs(project: Path) -> list[tuple[str, str]]:
    records = corpus_mod.import_corpus(
        _require(project / CORPUS_TSV, "finalize"), "tsv"
    )
    return [(r.surface, r.final_label) for r in records]


def cmd_evaluate(args) -> int:
    project = _project(args)
    config = load_config(project)
    pairs = _corpus_pairs(project)
    eval_config = EvalConfig(
        folds=args.folds or config.folds,
        seed=args.seed if args.seed is not None else config.seed,
        include_misc=not args.without_misc,
        workers=args.workers,
    )
    result = cross_validate(pairs, args.model or config.model, eval_config)
    out = project / (REPORT_NO_MISC_FILE if args.without_misc else REPORT_FILE)
    write_report(result, out)
    micro = result.pooled.micro
    print(
        f"model={result.config_echo['model']} folds={eval_config.folds} "
        f"seed={eval_config.seed} micro-F={micro.f1:.4f} "
        f"accuracy={result.pooled.accuracy:.4f} -> {out}"
    )
    return 0


def cmd_learning_curve(args) -> int:
    project = _project(args)
    config = load_config(project)
    pairs = _corpus_pairs(project)
    fractions = (
        [float(f) for f in args.fractions.split(",")]
        if args.fractions
        else config.fractions
    )
    eval_config = EvalConfig(
        folds=args.folds or config.folds,
        seed=args.seed if args.seed is not None else config.seed,
    )
    points = learning_curve(pairs, fractions, args.model or config.model, eval_config)
    out = project / CURVE_FILE
    tmp = out.with_suffix(".tmp")
    tmp.write_text(learning_curve_csv(points), encoding="utf-8")
    tmp.replace(out)
    for fraction, accuracy in points:
        print(f"fraction {fraction}: accuracy {accuracy:.4f}")
    print(f"wrote {out}")
    return 0


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wikiner",
        description="Build, annotate and evaluate an NER corpus from "
        "Wikipedia category pages.",
    )
    parser.add_argument(
        "-p",
        "--project",
        default=".",
        help="project directory (default: current directory)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("init", help="create the project directory and config").set_defaults(
        func=cmd_init
    )

    p = sub.add_parser("fetch", help="fetch seed pages into the page cache")
    p.add_argument("--online", action="store_true", help="allow network access")
    p.add_argument(
        "--delay", type=int, default=500, help="politeness delay in ms (>= 500)"
    )
    p.set_defaults(func=cmd_fetch)

    sub.add_parser("extract", help="parse cached pages into links.jsonl").set_defaults(
        func=cmd_extract
    )

    sub.add_parser(
        "candidates", help="dedup link anchors into candidates.jsonl"
    ).set_defaults(func=cmd_candidates)

    p = sub.add_parser("score", help="POS-tag, wordtype and score candidates")
    p.add_argument("--tagger", help="heuristic or cmd:<path>")
    p.add_argument("--pos-agg", choices=cand.AGGREGATIONS, dest="pos_agg")
    p.add_argument("--wt-agg", choices=cand.AGGREGATIONS, dest="wt_agg")
    p.set_defaults(func=cmd_score)

    sub.add_parser("stats", help="compute corpus statistics").set_defaults(
        func=cmd_stats
    )

    p = sub.add_parser("serve", help="run the annotation HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--ui-dir", help="static directory with the annotation UI")
    p.set_defaults(func=cmd_serve)

    sub.add_parser(
        "agreement", help="print the inter-annotator agreement report"
    ).set_defaults(func=cmd_agreement)

    p = sub.add_parser("adjudicate", help="resolve one disagreement")
    p.add_argument("entity_id")
    p.add_argument("label", choices=corpus_mod.LABELS)
    p.set_defaults(func=cmd_adjudicate)

    sub.add_parser(
        "finalize", help="write the labeled corpus from the journal"
    ).set_defaults(func=cmd_finalize)

    p = sub.add_parser("export", help="export the corpus in a given format")
    p.add_argument("--format", choices=("tsv", "jsonl"), default="tsv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("evaluate", help="cross-validate classifiers on the corpus")
    p.add_argument("--model", choices=("lr", "svm", "nb", "sgd"))
    p.add_argument("--folds", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--without-misc", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("learning-curve", help="accuracy vs training-set size")
    p.add_argument("--model", choices=("lr", "svm", "nb", "sgd"))
    p.add_argument("--folds", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--fractions", help="comma-separated fractions in (0,1]")
    p.set_defaults(func=cmd_learning_curve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        MissingStageInput,
        ConfigError,
        ingest.EmptyTitle,
        ingest.NetworkDisabled,
        ingest.NetworkError,
        ingest.PageMissing,
        cand.EmptySurface,
        corpus_mod.InvalidLabel,
        corpus_mod.InconsistentCounts,
        corpus_mod.UnlabeledRecord,
        corpus_mod.ParseError,
        corpus_mod.DuplicateSurface,
        annotation.UnknownAnnotator,
        annotation.UnknownEntity,
        annotation.NotEnoughAnnotators,
        annotation.NotDisagreed,
        annotation.Unresolved,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
