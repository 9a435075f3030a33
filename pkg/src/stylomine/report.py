"""Delimited report tables and figures for signature and attribution runs."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence as Seq

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .attribution import EvaluationReport
from .seqdb import Dictionary, _write_text
from .signatures import ClassSignature, SignatureStats, _signature_lines

STATS_COLUMNS = (
    "class",
    "training_patterns",
    "reference",
    "initial",
    "revised",
    "temporal",
    "ratio",
)


def stats_rows(stats: Seq[SignatureStats]) -> list[tuple[str, ...]]:
    rows = [STATS_COLUMNS]
    for s in stats:
        rows.append(
            (
                s.class_id,
                str(s.n_training_patterns),
                str(s.n_reference),
                str(s.n_initial),
                str(s.n_revised),
                str(s.n_temporal),
                f"{s.ratio_percent:.1f}",
            )
        )
    return rows


def write_stats_table(stats: Seq[SignatureStats], sink, delimiter: str = "\t") -> int:
    text = "".join(delimiter.join(row) + "\n" for row in stats_rows(stats))
    return _write_text(sink, text)


def render_report(
    class_signatures: Mapping[str, ClassSignature], dictionary: Dictionary, sink
) -> int:
    """Plain-text report: the per-class counts table followed by each
    revised signature's pattern listing."""
    lines = ["\t".join(row) for row in stats_rows([c.stats for c in class_signatures.values()])]
    for class_id, cs in class_signatures.items():
        lines.append("")
        lines.append(f"class {class_id} stage {cs.revised.stage}")
        lines.extend(_signature_lines(cs.revised, dictionary))
    return _write_text(sink, "".join(line + "\n" for line in lines))


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def signature_figures(stats: Seq[SignatureStats], out_dir) -> list[Path]:
    """Bar charts of per-class signature sizes and temporal-tag ratios."""
    out_dir = Path(out_dir)
    classes = [s.class_id for s in stats]
    xs = range(len(classes))

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    width = 0.4
    ax.bar([x - width / 2 for x in xs], [s.n_initial for s in stats], width,
           label="initial")
    ax.bar([x + width / 2 for x in xs], [s.n_revised for s in stats], width,
           label="revised")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(classes, rotation=20, ha="right")
    ax.set_ylabel("patterns")
    ax.set_title("Signature sizes per class")
    ax.legend()
    fig.tight_layout()
    counts_path = _save(fig, out_dir / "signature_counts.png")

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.bar(list(xs), [s.ratio_percent for s in stats], color="tab:orange")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(classes, rotation=20, ha="right")
    ax.set_ylabel("% of revised patterns with EVENT/TIMEX3")
    ax.set_title("Temporal-tag share of revised signatures")
    fig.tight_layout()
    ratio_path = _save(fig, out_dir / "temporal_ratios.png")
    return [counts_path, ratio_path]


def accuracy_figure(report: EvaluationReport, path) -> Path:
    path = Path(path)
    classes = list(report.per_class)
    values = [report.per_class[c].accuracy for c in classes]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.bar(range(len(classes)), values, color="tab:green")
    ax.set_xticks(range(len(classes)))
    ax.set_xticklabels(classes, rotation=20, ha="right")
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("accuracy")
    ax.set_title(
        f"Attribution accuracy (train {report.split[0]:.0%} / test {report.split[1]:.0%})"
    )
    fig.tight_layout()
    return _save(fig, path)


def write_evaluation_report(report: EvaluationReport, sink, delimiter: str = "\t") -> int:
    lines = [delimiter.join(("class", "n_test", "n_correct", "accuracy"))]
    for class_id, acc in report.per_class.items():
        lines.append(
            delimiter.join(
                (class_id, str(acc.n_test), str(acc.n_correct), f"{acc.accuracy:.4f}")
            )
        )
    return _write_text(sink, "".join(line + "\n" for line in lines))


def write_score_dump(report: EvaluationReport, sink, delimiter: str = "\t") -> int:
    """One row per (document, class) with the correlation and the prediction."""
    lines = [delimiter.join(("doc_id", "class", "r", "predicted"))]
    for true_class, res in report.results:
        for class_id, r in res.scores.items():
            lines.append(
                delimiter.join(
                    (
                        res.doc_id,
                        class_id,
                        "NA" if r is None else f"{r:.6f}",
                        res.predicted or "abstain",
                    )
                )
            )
    return _write_text(sink, "".join(line + "\n" for line in lines))
