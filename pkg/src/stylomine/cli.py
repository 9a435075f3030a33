"""Command-line pipeline: extract, mine, signature, stats, attribute.

Every command takes ``--config`` plus optional parameter overrides; all
randomness flows from the single configured seed, outputs are written
atomically, and reruns over identical inputs produce identical files.
Exit codes: 0 success, 1 pipeline error, 2 configuration error, 3 partial
extraction failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable

from . import attribution, signatures, synthetic
from .config import ConfigError, RunConfig, apply_overrides, load_config
from .extract import MalformedXml, MissingPos, extract_sequences, parse_annotated_xml, write_tagseq
from .seqdb import (
    Dictionary,
    MiningParams,
    Pattern,
    pattern_order_key,
    read_spmf_patterns,
    read_tagseq,
    write_spmf_patterns,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PIPELINE = 1
EXIT_CONFIG = 2
EXIT_PARTIAL = 3


class PipelineError(RuntimeError):
    pass


class PartialFailure(RuntimeError):
    pass


def atomic_write(path: Path, writer: Callable) -> None:
    """Write via a sibling temp file and rename, so rereads never see a
    half-written file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            writer(handle)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _class_files(cfg: RunConfig) -> dict[str, list[Path]]:
    """Resolve each class glob under the corpus root."""
    return {
        class_id: sorted(cfg.corpus_root.glob(pattern))
        for class_id, pattern in cfg.classes.items()
    }


def _sequence_files(cfg: RunConfig) -> dict[str, list[Path]]:
    seq_root = cfg.out / "sequences"
    out: dict[str, list[Path]] = {}
    for class_id in cfg.classes:
        out[class_id] = sorted((seq_root / class_id).glob("*.text"))
    return out


def _pattern_files(cfg: RunConfig) -> dict[str, list[Path]]:
    pat_root = cfg.out / "patterns"
    out: dict[str, list[Path]] = {}
    for class_id in cfg.classes:
        out[class_id] = sorted((pat_root / class_id).glob("*.text"))
    return out


def cmd_extract(cfg: RunConfig) -> int:
    by_class = _class_files(cfg)
    total = sum(len(files) for files in by_class.values())
    if total == 0:
        logger.warning("no input documents matched any class glob under %s",
                       cfg.corpus_root)
        return EXIT_OK
    failures = 0
    written = 0
    for class_id, files in by_class.items():
        for path in files:
            try:
                doc = parse_annotated_xml(path.read_bytes(), doc_id=path.stem)
                seqs = extract_sequences(doc)
            except (MalformedXml, MissingPos, OSError) as exc:
                logger.error("skipping %s: %s", path, exc)
                failures += 1
                continue
            target = cfg.out / "sequences" / class_id / f"{path.stem}.text"
            atomic_write(target, lambda handle, s=seqs: write_tagseq(s, handle))
            written += 1
    logger.info("extracted %d documents (%d failed)", written, failures)
    if failures and written:
        return EXIT_PARTIAL
    if failures:
        return EXIT_PIPELINE
    return EXIT_OK


def _mine_one(job: tuple[str, list[tuple[str, ...]], list[str], MiningParams]):
    doc_id, token_lists, symbols, params = job
    dictionary = Dictionary(symbols)
    doc = signatures.mine_document(token_lists, params, dictionary, doc_id=doc_id)
    return doc_id, doc.patterns


def cmd_mine(cfg: RunConfig) -> int:
    by_class = _sequence_files(cfg)
    if not any(by_class.values()):
        raise PipelineError(
            f"no sequence files under {cfg.out / 'sequences'}; run extract first"
        )
    # one shared dictionary, built in registration order for determinism
    dictionary = Dictionary()
    docs: list[tuple[str, Path, list[tuple[str, ...]]]] = []
    for class_id, files in by_class.items():
        for path in files:
            token_lists = [seq.tokens for seq in read_tagseq(path)]
            for tokens in token_lists:
                for token in tokens:
                    dictionary.add(token)
            docs.append((class_id, path, token_lists))
    atomic_write(cfg.out / "dictionary.tsv", dictionary.save)

    params = cfg.params()
    jobs = [
        (f"{class_id}/{path.stem}", token_lists, dictionary.symbols, params)
        for class_id, path, token_lists in docs
    ]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            mined = list(pool.map(_mine_one, jobs, chunksize=4))
    else:
        mined = [_mine_one(job) for job in jobs]
    by_id = dict(mined)
    for class_id, path, _ in docs:
        patterns = by_id[f"{class_id}/{path.stem}"]
        ranked = sorted(
            (Pattern(k, v) for k, v in patterns.items()),
            key=lambda p: (-p.support, pattern_order_key(p.elements)),
        )
        target = cfg.out / "patterns" / class_id / f"{path.stem}.text"
        atomic_write(
            target,
            lambda handle, r=ranked: write_spmf_patterns(r, handle, dictionary),
        )
    logger.info("mined %d documents with k=%d maxlen=%d gap=%d",
                len(docs), cfg.k, cfg.maxlen, cfg.gap)
    return EXIT_OK


def _load_mined(cfg: RunConfig) -> tuple[Dictionary, dict[str, list[signatures.DocumentPatterns]]]:
    dict_path = cfg.out / "dictionary.tsv"
    if not dict_path.is_file():
        raise PipelineError(f"missing {dict_path}; run mine first")
    dictionary = Dictionary.load(dict_path)
    by_class = _pattern_files(cfg)
    docs: dict[str, list[signatures.DocumentPatterns]] = {}
    for class_id, files in by_class.items():
        docs[class_id] = [
            signatures.DocumentPatterns(
                path.stem,
                {p.elements: p.support for p in read_spmf_patterns(path, dictionary)},
            )
            for path in files
        ]
    return dictionary, docs


def _train_subset(cfg: RunConfig, docs):
    train = {}
    for class_id, class_docs in docs.items():
        tr, _ = attribution.split_documents(
            class_docs, cfg.train_fraction, cfg.seed, class_id
        )
        train[class_id] = tr
    return train


def cmd_signature(cfg: RunConfig) -> int:
    from . import report

    dictionary, docs = _load_mined(cfg)
    populated = [c for c, d in docs.items() if d]
    if len(populated) < 2:
        raise PipelineError(
            f"signatures need pattern files for at least 2 classes, found {len(populated)}"
        )
    train = _train_subset(cfg, docs)
    built = signatures.build_class_signatures(train, dictionary, cfg.quorum)
    sig_dir = cfg.out / "signatures"
    for class_id, cs in built.items():
        for sig in (cs.initial, cs.revised):
            target = sig_dir / f"{class_id}.{sig.stage}.text"
            atomic_write(
                target,
                lambda handle, s=sig: signatures.write_signature(s, handle, dictionary),
            )
    stats = [cs.stats for cs in built.values()]
    atomic_write(cfg.out / "stats.tsv", lambda h: report.write_stats_table(stats, h))
    atomic_write(
        cfg.out / "report.txt", lambda h: report.render_report(built, dictionary, h)
    )
    report.signature_figures(stats, cfg.out)
    for cs in built.values():
        logger.info(
            "class %s: %d initial, %d revised (%d temporal, %.1f%%)",
            cs.stats.class_id, cs.stats.n_initial, cs.stats.n_revised,
            cs.stats.n_temporal, cs.stats.ratio_percent,
        )
    return EXIT_OK


def cmd_stats(cfg: RunConfig) -> int:
    from . import report

    stats_path = cfg.out / "stats.tsv"
    if not stats_path.is_file():
        raise PipelineError(f"missing {stats_path}; run signature first")
    text = stats_path.read_text(encoding="utf-8")
    sys.stdout.write(text)
    rows = [line.split("\t") for line in text.splitlines()[1:] if line]
    stats = [
        signatures.SignatureStats(
            class_id=row[0],
            n_training_patterns=int(row[1]),
            n_reference=int(row[2]),
            n_initial=int(row[3]),
            n_revised=int(row[4]),
            n_temporal=int(row[5]),
            temporal_ratio=(int(row[5]) / int(row[4])) if int(row[4]) else 0.0,
        )
        for row in rows
    ]
    paths = report.signature_figures(stats, cfg.out)
    logger.info("rendered %s", ", ".join(str(p) for p in paths))
    return EXIT_OK


def cmd_attribute(cfg: RunConfig) -> int:
    from . import report

    missing = [
        class_id
        for class_id, pattern in cfg.classes.items()
        if not sorted(cfg.corpus_root.glob(pattern))
        and not (cfg.out / "patterns" / class_id).is_dir()
    ]
    if missing:
        raise ConfigError(
            f"no inputs for classes {', '.join(missing)} under {cfg.corpus_root}"
        )
    _, docs = _load_mined(cfg)
    results = attribution.evaluate(
        docs,
        train_fraction=cfg.train_fraction,
        seed=cfg.seed,
        quorum=cfg.quorum,
    )
    atomic_write(
        cfg.out / "attribution.tsv",
        lambda h: report.write_evaluation_report(results, h),
    )
    atomic_write(
        cfg.out / "attribution_scores.tsv",
        lambda h: report.write_score_dump(results, h),
    )
    report.accuracy_figure(results, cfg.out / "accuracy.png")
    for class_id, acc in results.per_class.items():
        logger.info(
            "class %s: %d/%d correct (%.1f%%)",
            class_id, acc.n_correct, acc.n_test, 100.0 * acc.accuracy,
        )
    return EXIT_OK


def cmd_synth(args) -> int:
    out_dir = Path(args.out or "demo-corpus")
    class_ids = [f"class{i}" for i in range(args.classes)] if args.classes else list(
        synthetic.DEFAULT_CLASSES
    )
    synthetic.write_xml_corpus(out_dir, args.seed or 7, class_ids, args.docs)
    cfg_lines = [
        "corpus_root = .",
        "out = out",
        "k = 250",
        "minlen = 1",
        "maxlen = 2",
        "gap = 1",
        "quorum = 1.0",
        "train_fraction = 0.75",
        f"seed = {args.seed or 7}",
        "jobs = 1",
    ]
    cfg_lines += [f"class.{cid} = {cid}/*.xml" for cid in class_ids]
    cfg_path = out_dir / "run.cfg"
    cfg_path.write_text("".join(line + "\n" for line in cfg_lines), encoding="utf-8")
    logger.info("wrote %d classes x %d documents under %s (config: %s)",
                len(class_ids), args.docs, out_dir, cfg_path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stylomine",
        description="Mine gap-constrained tag patterns, build per-class "
        "signatures, and attribute documents by correlation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="run configuration file")
        p.add_argument("--k", type=int)
        p.add_argument("--minlen", type=int)
        p.add_argument("--maxlen", type=int)
        p.add_argument("--gap", type=int)
        p.add_argument("--quorum", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--jobs", type=int)
        p.add_argument("--out", help="output directory override")

    for name, help_text in (
        ("extract", "parse annotated XML into tag-sequence files"),
        ("mine", "mine per-document top-k patterns from sequence files"),
        ("signature", "build initial/revised signatures and the stats table"),
        ("stats", "print the stats table and render its figures"),
        ("attribute", "train/test split evaluation of the attribution"),
    ):
        add_common(sub.add_parser(name, help=help_text))

    synth = sub.add_parser("synth", help="generate a synthetic annotated demo corpus")
    synth.add_argument("--out", help="corpus directory (default demo-corpus)")
    synth.add_argument("--seed", type=int, default=7)
    synth.add_argument("--docs", type=int, default=8, help="documents per class")
    synth.add_argument("--classes", type=int, help="number of classes (default 4)")
    return parser


COMMANDS = {
    "extract": cmd_extract,
    "mine": cmd_mine,
    "signature": cmd_signature,
    "stats": cmd_stats,
    "attribute": cmd_attribute,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "synth":
            return cmd_synth(args)
        cfg = apply_overrides(load_config(args.config), args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        logger.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except (PipelineError, signatures.EmptyCorpus, attribution.TooFewDocuments) as exc:
        logger.error("%s", exc)
        return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
