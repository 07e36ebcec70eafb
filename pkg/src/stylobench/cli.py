"""Command-line front end: ``stylobench {ingest,run,test,plot,simulate}``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .classify import ClassifierKind
from .corpus import CorpusError, load_corpus, load_frequency_matrix, write_corpus
from .evaluate import (
    DEFAULT_K_GRID,
    paired_curves,
    read_results,
    results_to_csv,
    run_grid,
    run_matrices,
    significance_stars,
    wilcoxon_signed_rank,
)
from .evaluate.grid import curve
from .features import ALL_SPECS, MarkerSpec, MarkerType

logger = logging.getLogger("stylobench")

LEAKAGE_NOTE = (
    "note: features are ranked once on the whole corpus (held-out documents included); "
    "z-scores are refit on the training documents of every fold, and features constant "
    "over a fold's training documents are dropped for that fold."
)


class UsageError(Exception):
    pass


def parse_k_grid(text: str) -> tuple[int, ...]:
    """``35,100:2000:50`` -> 35, 100, 150, ..., 2000 (``start:stop:step`` is inclusive)."""
    ks: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        bits = part.split(":")
        try:
            if len(bits) == 1:
                ks.append(int(bits[0]))
            elif len(bits) == 3:
                start, stop, step = map(int, bits)
                if step <= 0:
                    raise ValueError
                ks.extend(range(start, stop + 1, step))
            else:
                raise ValueError
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad k-grid item {part!r}") from None
    if not ks or any(k < 1 for k in ks) or any(b <= a for a, b in zip(ks, ks[1:])):
        raise argparse.ArgumentTypeError("k-grid must be strictly increasing positive integers")
    return tuple(ks)


def _specs(text: str) -> tuple[MarkerSpec, ...]:
    try:
        return tuple(MarkerSpec.parse(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _classifiers(text: str) -> tuple[ClassifierKind, ...]:
    try:
        return tuple(ClassifierKind.parse(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _spec(text: str) -> MarkerSpec:
    return _specs(text)[0]


# --- subcommands --------------------------------------------------------------

def cmd_ingest(args) -> int:
    if args.format == "freq-table":
        m = load_frequency_matrix(Path(args.path))
        authors = sorted(set(m.authors))
        print(f"frequency table: {len(m.doc_ids)} documents, {len(authors)} authors, {m.width} features")
        for a in authors:
            print(f"  {a}: {m.authors.count(a)} documents")
        return 0
    corpus = load_corpus(args.path)
    print(f"corpus: {len(corpus)} documents, {len(corpus.authors)} authors, "
          f"{sum(len(d) for d in corpus)} tokens")
    for a in corpus.authors:
        docs = [d for d in corpus if d.author == a]
        print(f"  {a}: {len(docs)} documents, {sum(len(d) for d in docs)} tokens")
    return 0


def _freq_tables(items: Sequence[str]):
    matrices = []
    for item in items:
        marker, sep, path = item.partition("=")
        if not sep:
            raise UsageError(f"--freq-table expects MARKER=PATH, got {item!r}")
        try:
            spec = MarkerSpec.parse(marker)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        matrices.append(replace(load_frequency_matrix(Path(path)), spec=spec))
    return matrices


def cmd_run(args) -> int:
    out = Path(args.out)
    if args.freq_table:
        if args.corpus:
            raise UsageError("give either a corpus directory or --freq-table, not both")
        matrices = [m for m in _freq_tables(args.freq_table) if m.spec in set(args.markers)]
        corpus_id = args.corpus_id or Path(args.freq_table[0].partition("=")[2]).parent.name or "tables"
        results = run_matrices(matrices, args.classifiers, args.k_grid, corpus_id, args.jobs)
    elif args.corpus:
        corpus = load_corpus(args.corpus)
        corpus_id = args.corpus_id or Path(args.corpus).resolve().name
        results = run_grid(corpus, args.markers, args.classifiers, args.k_grid, corpus_id, args.jobs)
    else:
        raise UsageError("run needs a corpus directory or --freq-table")
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_text(results_to_csv(results), encoding="utf-8")
    unavailable = [r for r in results if not r.available]
    log = [
        f"stylobench {__version__}",
        f"corpus: {corpus_id}",
        f"markers: {','.join(str(s) for s in sorted(set(args.markers)))}",
        f"classifiers: {','.join(k.value for k in args.classifiers)}",
        f"k-grid: {','.join(map(str, args.k_grid))}",
        f"cells: {len(results)} ({len(unavailable)} unavailable: vocabulary below k)",
        LEAKAGE_NOTE,
    ]
    (out / "run.log").write_text("\n".join(log) + "\n", encoding="utf-8")
    print(f"wrote {len(results)} rows to {out / 'results.csv'}")
    return 0


def cmd_test(args) -> int:
    with open(args.results, encoding="utf-8", newline="") as fh:
        results = read_results(fh)
    try:
        ks, a, b = paired_curves(results, args.a, args.b, args.classifier, args.corpus_id)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = wilcoxon_signed_rank(a, b)
    print(f"{args.a} vs {args.b} ({args.classifier.value}): {len(ks)} paired feature counts")
    print(f"W = {res.statistic:g}  (W+ = {res.w_plus:g}, W- = {res.w_minus:g}, n = {res.n_nonzero})")
    flag = " (degenerate: all differences zero)" if res.degenerate else ""
    print(f"p = {res.pvalue:.6g} [{res.method}]{flag} {significance_stars(res.pvalue)}".rstrip())
    return 0


def cmd_plot(args) -> int:
    from .plot import plot_curves

    with open(args.results, encoding="utf-8", newline="") as fh:
        results = read_results(fh)
    series = {}
    for n in (1, 2, 3):
        c = curve(results, MarkerSpec(args.marker, n), args.classifier, args.corpus_id)
        if c:
            series[f"{n}-grams"] = c
    if not series:
        raise UsageError(f"no results for {args.marker.value} / {args.classifier.value}")
    title = args.title or f"{args.marker.value} n-grams, {args.classifier.value}"
    plot_curves(series, args.out, title)
    print(f"wrote {args.out}")
    return 0


def cmd_simulate(args) -> int:
    from .synth import SynthConfig, generate_corpus, read_config

    cfg = read_config(args.config) if args.config else SynthConfig()
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    paths = write_corpus(generate_corpus(cfg), args.out)
    print(f"wrote {len(paths)} documents to {args.out}")
    return 0


# --- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="stylobench",
        description="Authorship-attribution benchmark over word, lemma and POS-tag n-grams.",
    )
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", help="validate and summarize a corpus or frequency table")
    s.add_argument("path")
    s.add_argument("--format", choices=("vertical", "freq-table"), default="vertical")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("run", help="run the leave-one-out experiment grid")
    s.add_argument("corpus", nargs="?", help="directory of author_title.tsv vertical files")
    s.add_argument("--freq-table", action="append", metavar="MARKER=PATH",
                   help="precomputed frequency table for one marker (repeatable)")
    s.add_argument("--markers", type=_specs, default=ALL_SPECS,
                   help="comma-separated <type>:<n>, types wordform,lemma,fulltag,pos1,pos2 (default: all 15)")
    s.add_argument("--classifiers", type=_classifiers, default=tuple(ClassifierKind),
                   help="comma-separated subset of delta,cosine,svm,nsc (default: all)")
    s.add_argument("--k-grid", type=parse_k_grid, default=DEFAULT_K_GRID,
                   help="feature counts, e.g. 35,100:2000:50 (the default)")
    s.add_argument("--out", default="results")
    s.add_argument("--jobs", type=int, default=1, help="grid cells evaluated in parallel")
    s.add_argument("--corpus-id", help="label written to the corpus column")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("test", help="Wilcoxon signed-rank test between two F1 curves")
    s.add_argument("results")
    s.add_argument("--a", type=_spec, required=True, help="first marker, e.g. wordform:1")
    s.add_argument("--b", type=_spec, required=True, help="second marker, e.g. lemma:1")
    s.add_argument("--classifier", type=ClassifierKind.parse, required=True)
    s.add_argument("--corpus-id")
    s.set_defaults(func=cmd_test)

    s = sub.add_parser("plot", help="F1 against feature count, one line per n-gram order")
    s.add_argument("results")
    s.add_argument("--marker", type=MarkerType, required=True, choices=list(MarkerType),
                   metavar="{" + ",".join(m.value for m in MarkerType) + "}")
    s.add_argument("--classifier", type=ClassifierKind.parse, required=True)
    s.add_argument("--corpus-id")
    s.add_argument("--title")
    s.add_argument("--out", required=True, help="output .svg path")
    s.set_defaults(func=cmd_plot)

    s = sub.add_parser("simulate", help="write a synthetic vertical-format corpus")
    s.add_argument("config", nargs="?", help="key=value configuration file")
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (UsageError, CorpusError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
