"""Command-line pipeline: ingest -> parse -> flatten -> stats/spec/sample/annotate.

Every stage reads and writes plain files (see corpusio), so each one can be
run and tested in isolation and a dump only needs to be parsed once.
Re-running a stage on unchanged inputs writes byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import asdict
from datetime import timedelta
from pathlib import Path

from . import corpusio, tei
from .annotation import (
    AnnotationStore,
    agreement,
    alignment_distribution,
    draw_sample,
    objective_distribution,
    targeted_rate,
)
from .dump import DEFAULT_ARCHIVE_PATTERNS, is_archive_subpage, load_archive_patterns, stream_pages
from .model import flatten
from .parsing import DEFAULT_MIN_WORDS, load_bot_list, parse_corpus
from .specificity import DEFAULT_BANALITY_THRESHOLD, build_partition, rank_specificities
from .stats import (
    arrival_profile,
    c_delay_significance,
    overview_report,
    render_overview,
    summarize,
)

TALK_NAMESPACE = 1


def _out_dir(value: str | None) -> Path:
    return Path(value or os.environ.get("WIKITALK_OUT", "."))


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _write_stat_rows(rows: list[tuple[str, object]], out: str | None) -> None:
    fh, own = _open_out(out)
    try:
        writer = csv.writer(fh)
        writer.writerow(["statistic", "value"])
        for name, value in rows:
            writer.writerow([name, _plain(value)])
    finally:
        if own:
            fh.close()


def _plain(value):
    if isinstance(value, timedelta):
        return value.total_seconds()
    if isinstance(value, float):
        return f"{value:.6f}"
    if value is None:
        return ""
    return value


def cmd_ingest(args) -> int:
    pages = stream_pages(args.input, set(args.namespaces))
    patterns = (
        load_archive_patterns(args.archive_patterns)
        if args.archive_patterns
        else DEFAULT_ARCHIVE_PATTERNS
    )
    count = corpusio.write_jsonl(
        (
            {**p.to_record(), "is_archive": is_archive_subpage(p.title, patterns)}
            for p in pages
        ),
        args.out,
    )
    print(f"ingested {count} pages from namespaces {sorted(set(args.namespaces))}")
    return 0


def _iter_raw_pages(args):
    from .dump import RawPage

    path = Path(args.input)
    with open(path, "rb") as fh:
        head = fh.read(1)
    if head == b"{":  # pages.jsonl from a previous ingest run
        for rec in corpusio.iter_jsonl(path):
            yield RawPage.from_record(rec)
    else:
        yield from stream_pages(path, set(args.namespaces))


def cmd_parse(args) -> int:
    out_dir = _out_dir(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    bots = load_bot_list(args.bot_list) if args.bot_list else frozenset()
    patterns = (
        load_archive_patterns(args.archive_patterns)
        if args.archive_patterns
        else DEFAULT_ARCHIVE_PATTERNS
    )
    kept = 0
    pages = 0
    archives = 0
    dropped: dict[str, int] = {}

    def counted_pages():
        nonlocal pages, archives
        for page in _iter_raw_pages(args):
            pages += 1
            if is_archive_subpage(page.title, patterns):
                archives += 1
            yield page

    def records():
        nonlocal kept
        for thread, verdict in parse_corpus(
            counted_pages(), bot_list=bots, min_words=args.min_words
        ):
            if verdict is None:
                kept += 1
                yield corpusio.thread_to_record(thread)
            else:
                dropped[verdict] = dropped.get(verdict, 0) + 1

    corpusio.write_jsonl(records(), out_dir / "threads.jsonl")
    drop_note = ", ".join(f"{k}={v}" for k, v in sorted(dropped.items())) or "none"
    print(
        f"kept {kept} threads from {pages} pages ({archives} archive subpages) "
        f"-> {out_dir / 'threads.jsonl'} (dropped: {drop_note})"
    )
    return 0


def cmd_flatten(args) -> int:
    count = corpusio.write_jsonl(
        (
            corpusio.flat_to_record(flatten(thread))
            for thread in (
                corpusio.thread_from_record(rec) for rec in corpusio.iter_jsonl(args.input)
            )
        ),
        args.out,
    )
    print(f"flattened {count} threads -> {args.out}")
    return 0


def cmd_stats(args) -> int:
    corpus = corpusio.load_flat_threads(args.input)
    if args.report == "summarize":
        s = summarize(corpus)
        rows: list[tuple[str, object]] = [("thread_count", s.thread_count)]
        rows += [(f"count_{k}", v) for k, v in s.class_counts.items()]
        rows += [(f"pct_{k}", 100 * v) for k, v in s.class_proportions.items()]
        rows += [
            ("max_participants", s.max_participants),
            ("message_count", s.message_count),
            ("distinct_registered_authors", s.distinct_registered_authors),
            ("distinct_ips", s.distinct_ips),
            ("pct_chronological_pairs", s.pct_chronological_pairs),
        ]
        _write_stat_rows(rows, args.out)
    elif args.report == "arrival":
        profile = arrival_profile(corpus)
        rows = list(asdict(profile).items())
        test = c_delay_significance(corpus)
        if test is not None:
            rows += [("mwu_U", test.U), ("mwu_p_two_sided", test.p_two_sided)]
        _write_stat_rows(rows, args.out)
    else:  # overview
        node = overview_report(corpus)
        text = render_overview(node)
        if args.out and args.out != "-":
            Path(args.out).write_text(text + "\n", encoding="utf-8")
        else:
            print(text)
    return 0


def cmd_spec(args) -> int:
    corpus = corpusio.load_flat_threads(args.input)
    multilogues = [ft for ft in corpus if len(ft.participants) >= 3]
    partition = build_partition(multilogues)
    ranked = rank_specificities(partition, top=args.top, banality=args.threshold)
    fh, own = _open_out(args.out)
    try:
        writer = csv.writer(fh)
        writer.writerow(["subcorpus", "form", "f", "F", "index", "direction"])
        for name in ("firstA", "firstB", "firstC"):
            for score in ranked[name].positive + ranked[name].negative:
                writer.writerow(
                    [name, score.form, score.f, score.F, f"{score.index:.1f}", score.direction]
                )
    finally:
        if own:
            fh.close()
    return 0


def cmd_sample(args) -> int:
    corpus = corpusio.load_flat_threads(args.input)
    sample = draw_sample(corpus, args.rule, args.size, args.seed, name=args.name)
    if args.store:
        store = AnnotationStore(args.store)
        store.add_sample(sample, corpus={ft.thread_id: ft for ft in corpus})
        store.close()
    if args.out:
        import json

        Path(args.out).write_text(
            json.dumps(sample.to_record(), ensure_ascii=False, sort_keys=True, indent=2)
            + "\n",
            encoding="utf-8",
        )
    print(f"drew {sample.size} threads for {sample.name} (rule {sample.rule}, seed {sample.seed})")
    return 0


def cmd_annotate(args) -> int:
    from .service import serve

    store = AnnotationStore(args.store)
    corpus = corpusio.load_flat_corpus(args.corpus)
    serve(store, corpus, bind_address=args.bind, static_dir=args.static)
    return 0


def cmd_report(args) -> int:
    store = AnnotationStore(args.store)
    try:
        if args.kind == "annotations":
            fh, own = _open_out(args.out)
            try:
                writer = csv.writer(fh)
                writer.writerow(
                    ["thread_id", "annotator_id", "addressee", "alignment",
                     "objective", "created_at", "note"]
                )
                for a in store.annotations(sample=args.sample):
                    writer.writerow(
                        [a.thread_id, a.annotator_id, a.addressee.value,
                         a.alignment.value, a.objective.value,
                         a.created_at.isoformat(), a.note or ""]
                    )
            finally:
                if own:
                    fh.close()
            return 0
        if args.kind == "alignment":
            report = alignment_distribution(store, args.sample)
            rows = [(f"alignment_{k}", v) for k, v in report.proportions.items()]
            rows += [
                ("prise_de_parti", report.prise_de_parti),
                ("side_with_b_share", report.side_with_b_share),
                ("n", report.n),
            ]
        elif args.kind == "objective":
            report = objective_distribution(store, args.sample)
            rows = [(f"objective_{k}", v) for k, v in report.proportions.items()]
            rows += [("n", report.n)]
        elif args.kind == "targeted":
            rows = [("targeted_rate", targeted_rate(store, args.sample))]
        else:  # agreement
            report = agreement(store, args.sample)
            rows = [(f"raw_{dim}", v) for dim, v in report.raw.items()]
            rows += [(f"kappa_{dim}", v) for dim, v in report.kappa.items()]
            rows += [("pairs", len(report.pairs))]
        _write_stat_rows(rows, args.out)
        return 0
    finally:
        store.close()


def cmd_export_tei(args) -> int:
    threads = corpusio.load_threads(args.input)
    tei.write_tei(threads, args.out)
    print(f"exported {len(threads)} threads -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wikitalk",
        description="Reconstruct and analyse multiparty talk-page discussions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="stream talk pages out of a MediaWiki XML dump")
    p.add_argument("--in", dest="input", required=True, help="dump file (.xml or .xml.bz2)")
    p.add_argument("--out", required=True, help="pages.jsonl destination")
    p.add_argument(
        "--ns", dest="namespaces", type=int, action="append", default=None,
        help="namespace id to keep (repeatable; default: 1)",
    )
    p.add_argument("--archive-patterns", help="file of archive subpage prefixes")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("parse", help="split pages into filtered threads")
    p.add_argument("--in", dest="input", required=True, help="dump file or pages.jsonl")
    p.add_argument("--out", help="output directory (default: $WIKITALK_OUT or .)")
    p.add_argument("--ns", dest="namespaces", type=int, action="append", default=None)
    p.add_argument("--bot-list", help="file of bot account names, one per line")
    p.add_argument("--archive-patterns", help="file of archive subpage prefixes")
    p.add_argument("--min-words", type=int, default=DEFAULT_MIN_WORDS)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("flatten", help="assign participant letters and schemas")
    p.add_argument("--in", dest="input", required=True, help="threads.jsonl")
    p.add_argument("--out", required=True, help="flat.jsonl destination")
    p.set_defaults(func=cmd_flatten)

    p = sub.add_parser("stats", help="corpus profile reports")
    p.add_argument("report", choices=["summarize", "arrival", "overview"])
    p.add_argument("--in", dest="input", required=True, help="flat.jsonl")
    p.add_argument("--out", help="CSV/text destination (default: stdout)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("spec", help="contrastive word-form specificities")
    p.add_argument("action", choices=["rank"])
    p.add_argument("--in", dest="input", required=True, help="flat.jsonl")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--threshold", type=float, default=DEFAULT_BANALITY_THRESHOLD)
    p.add_argument("--out", help="CSV destination (default: stdout)")
    p.set_defaults(func=cmd_spec)

    p = sub.add_parser("sample", help="draw a seeded annotation sample")
    p.add_argument("action", choices=["draw"])
    p.add_argument("--in", dest="input", required=True, help="flat.jsonl")
    p.add_argument("--rule", choices=["sample1", "sample2"], required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--name", help="sample name (default: <rule>-seed<seed>)")
    p.add_argument("--store", help="annotation store to register the sample in")
    p.add_argument("--out", help="write the sample as JSON here")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("annotate", help="run the annotation service")
    p.add_argument("action", choices=["serve"])
    p.add_argument("--store", required=True, help="annotation store file")
    p.add_argument("--corpus", required=True, help="flat.jsonl")
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.add_argument("--static", help="directory with the built annotation UI")
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("report", help="annotation reports")
    p.add_argument(
        "kind",
        choices=["alignment", "objective", "targeted", "agreement", "annotations"],
    )
    p.add_argument("--store", required=True)
    p.add_argument("--sample", required=True)
    p.add_argument("--out", help="CSV destination (default: stdout)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("export-tei", help="export parsed threads as TEI")
    p.add_argument("--in", dest="input", required=True, help="threads.jsonl")
    p.add_argument("--out", required=True, help="TEI XML destination")
    p.set_defaults(func=cmd_export_tei)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "namespaces", None) is None and args.command in ("ingest", "parse"):
        args.namespaces = [TALK_NAMESPACE]
    try:
        return args.func(args)
    except Exception as exc:  # stage failure: diagnostic on stderr, exit 1
        print(f"wikitalk {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
