"""Per-document pattern mining and per-class signature construction.

Each document is mined separately for its top-k patterns; a class's initial
signature is the set of patterns shared by (a quorum of) its documents, and
the revised signature removes every pattern that also occurs anywhere in
the other classes' document pools, leaving patterns unique to the class.
"""

from __future__ import annotations

import io
import logging
import math
from dataclasses import dataclass
from itertools import chain
from typing import Iterable, Mapping, Sequence as Seq

from .extract import TagSequence
from .miner import mine_topk
from .seqdb import (
    Dictionary,
    MiningParams,
    Pattern,
    PatternKey,
    encode_corpus,
    format_pattern_line,
    pattern_order_key,
    read_spmf_patterns,
    _read_text,
    _write_text,
)

logger = logging.getLogger(__name__)

TEMPORAL_SYMBOLS = ("EVENT", "TIMEX3")

STAGE_INITIAL = "initial"
STAGE_REVISED = "revised"


class EmptyCorpus(ValueError):
    """No documents to build a signature from."""


@dataclass
class DocumentPatterns:
    """Deduplicated patterns of one document, keyed by their itemset lists,
    with the per-document support retained."""

    doc_id: str
    patterns: dict[PatternKey, int | float]


@dataclass
class Signature:
    class_id: str
    stage: str
    patterns: dict[PatternKey, float]

    def keys_in_order(self) -> list[PatternKey]:
        return sorted(self.patterns, key=pattern_order_key)


@dataclass
class SignatureStats:
    """Pattern counts along the pipeline plus the share of revised patterns
    carrying a temporal tag."""

    class_id: str
    n_training_patterns: int
    n_reference: int
    n_initial: int
    n_revised: int
    n_temporal: int
    temporal_ratio: float

    @property
    def ratio_percent(self) -> float:
        return temporal_ratio_percent(self.n_temporal, self.n_revised)


def temporal_ratio_percent(n_temporal: int, n_total: int) -> float:
    """Share of temporal patterns as a percentage, one decimal."""
    if n_total == 0:
        return 0.0
    return round(100.0 * n_temporal / n_total, 1)


def mine_document(
    sequences: Iterable[TagSequence | Seq[str]],
    params: MiningParams,
    dictionary: Dictionary,
    *,
    doc_id: str = "",
) -> DocumentPatterns:
    """Mine one document's sentences against the shared corpus dictionary.

    Support counts are numbers of the document's own sentences; duplicate
    pattern keys keep the maximum support.
    """
    db = encode_corpus(sequences, dictionary)
    patterns: dict[PatternKey, int | float] = {}
    for p in mine_topk(db, params):
        prev = patterns.get(p.elements)
        if prev is None or p.support > prev:
            patterns[p.elements] = p.support
    return DocumentPatterns(doc_id, patterns)


def initial_signature(
    class_id: str, docs: Seq[DocumentPatterns], quorum: float = 1.0
) -> Signature:
    """Patterns present in at least ``ceil(quorum * len(docs))`` documents;
    quorum 1.0 is the exact intersection.  The aggregated support is the
    mean per-document support over the documents containing the pattern."""
    if not docs:
        raise EmptyCorpus(f"class {class_id!r} has no documents")
    if not 0.0 < quorum <= 1.0:
        raise ValueError(f"quorum must be in (0, 1], got {quorum}")
    need = math.ceil(quorum * len(docs))
    doc_freq: dict[PatternKey, int] = {}
    sup_sum: dict[PatternKey, float] = {}
    for doc in docs:
        for key, sup in doc.patterns.items():
            doc_freq[key] = doc_freq.get(key, 0) + 1
            sup_sum[key] = sup_sum.get(key, 0.0) + sup
    kept = {
        key: sup_sum[key] / df for key, df in doc_freq.items() if df >= need
    }
    return Signature(class_id, STAGE_INITIAL, kept)


def reference_patterns(
    other_class_docs: Iterable[DocumentPatterns],
) -> set[PatternKey]:
    """Union of all pattern keys over the other classes' documents."""
    keys: set[PatternKey] = set()
    for doc in other_class_docs:
        keys.update(doc.patterns)
    return keys


def revise_signature(initial: Signature, reference: set[PatternKey]) -> Signature:
    """Remove every pattern that also occurs in the reference pool."""
    if initial.stage != STAGE_INITIAL:
        raise ValueError(f"expected an initial signature, got stage {initial.stage!r}")
    kept = {k: v for k, v in initial.patterns.items() if k not in reference}
    if not kept:
        logger.warning(
            "class %s: revised signature is empty (every shared pattern also "
            "occurs in the other classes)",
            initial.class_id,
        )
    return Signature(initial.class_id, STAGE_REVISED, kept)


def temporal_stats(
    sig: Signature,
    dictionary: Dictionary,
    *,
    n_training_patterns: int = 0,
    n_reference: int = 0,
    n_initial: int = 0,
) -> SignatureStats:
    """Count the revised patterns containing an EVENT or TIMEX3 item."""
    codes = {
        dictionary.codes[s] for s in TEMPORAL_SYMBOLS if s in dictionary.codes
    }
    n_temporal = sum(
        1
        for key in sig.patterns
        if any(item in codes for itemset in key for item in itemset)
    )
    n_revised = len(sig.patterns)
    ratio = n_temporal / n_revised if n_revised else 0.0
    return SignatureStats(
        class_id=sig.class_id,
        n_training_patterns=n_training_patterns,
        n_reference=n_reference,
        n_initial=n_initial,
        n_revised=n_revised,
        n_temporal=n_temporal,
        temporal_ratio=ratio,
    )


@dataclass
class ClassSignature:
    initial: Signature
    revised: Signature
    stats: SignatureStats


def build_class_signatures(
    docs_by_class: Mapping[str, Seq[DocumentPatterns]],
    dictionary: Dictionary,
    quorum: float = 1.0,
) -> dict[str, ClassSignature]:
    """Run the full signature pipeline for every class.

    Classes are processed in registration (mapping) order; the reference
    pool of a class is the union of all other classes' document patterns.
    """
    if not docs_by_class:
        raise EmptyCorpus("no classes registered")
    out: dict[str, ClassSignature] = {}
    for class_id, docs in docs_by_class.items():
        initial = initial_signature(class_id, docs, quorum)
        others = chain.from_iterable(
            d for c, d in docs_by_class.items() if c != class_id
        )
        other_docs = list(others)
        reference = reference_patterns(other_docs)
        revised = revise_signature(initial, reference)
        stats = temporal_stats(
            revised,
            dictionary,
            n_training_patterns=sum(len(d.patterns) for d in docs),
            n_reference=sum(len(d.patterns) for d in other_docs),
            n_initial=len(initial.patterns),
        )
        out[class_id] = ClassSignature(initial, revised, stats)
    return out


def _signature_lines(sig: Signature, dictionary: Dictionary) -> list[str]:
    ranked = sorted(
        sig.patterns.items(), key=lambda kv: (-kv[1], pattern_order_key(kv[0]))
    )
    return [
        format_pattern_line(Pattern(key, sup), dictionary) for key, sup in ranked
    ]


def write_signature(sig: Signature, sink, dictionary: Dictionary) -> int:
    """Signature file: a header line then one pattern line per entry."""
    lines = [f"class {sig.class_id} stage {sig.stage}"]
    lines += _signature_lines(sig, dictionary)
    return _write_text(sink, "".join(line + "\n" for line in lines))


def read_signature(source, dictionary: Dictionary) -> Signature:
    text = _read_text(source)
    lines = text.splitlines()
    if not lines:
        raise EmptyCorpus("empty signature file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "class" or head[2] != "stage":
        raise ValueError(f"bad signature header: {lines[0]!r}")
    class_id, stage = head[1], head[3]
    patterns = read_spmf_patterns(io.StringIO("\n".join(lines[1:])), dictionary)
    return Signature(class_id, stage, {p.elements: float(p.support) for p in patterns})
