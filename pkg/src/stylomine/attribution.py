"""Correlation-based attribution of documents to class signatures.

A test document is scored against every class by the Pearson correlation
between the signature's aggregated supports and the document's supports
over the signature's own pattern keys; the class with the highest defined
correlation wins.  Evaluation splits each class into seeded train/test
fractions, builds signatures on the training side only, and reports
per-class accuracy.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from math import fsum, sqrt
from typing import Mapping, Sequence as Seq

from .seqdb import PatternKey
from .signatures import (
    DocumentPatterns,
    Signature,
    initial_signature,
    reference_patterns,
    revise_signature,
)

logger = logging.getLogger(__name__)


class EmptySignature(ValueError):
    """A signature with no patterns cannot be vectorized."""


class LengthMismatch(ValueError):
    """Correlation inputs differ in length."""


class TooFewDocuments(ValueError):
    """Evaluation needs at least two classes of at least four documents."""


@dataclass(frozen=True)
class FeatureVector:
    keys: tuple[PatternKey, ...]
    values: tuple[float, ...]


def vectorize(
    sig: Signature, doc: DocumentPatterns, *, binary: bool = False
) -> tuple[FeatureVector, FeatureVector]:
    """Align the signature supports (x) and the document supports (y) over
    the signature's pattern keys in canonical order; keys the document lacks
    contribute zero.  ``binary`` replaces supports with presence flags."""
    keys = tuple(sig.keys_in_order())
    if not keys:
        raise EmptySignature(sig.class_id)
    if binary:
        x = tuple(1.0 for _ in keys)
        y = tuple(1.0 if k in doc.patterns else 0.0 for k in keys)
    else:
        x = tuple(float(sig.patterns[k]) for k in keys)
        y = tuple(float(doc.patterns.get(k, 0.0)) for k in keys)
    return FeatureVector(keys, x), FeatureVector(keys, y)


def pearson(x: Seq[float], y: Seq[float]) -> float | None:
    """Sample correlation coefficient, or None when it is undefined
    (fewer than two points, or zero variance on either side)."""
    if len(x) != len(y):
        raise LengthMismatch(f"{len(x)} vs {len(y)} values")
    n = len(x)
    if n < 2:
        return None
    mean_x = fsum(x) / n
    mean_y = fsum(y) / n
    sxx = fsum((a - mean_x) ** 2 for a in x)
    syy = fsum((b - mean_y) ** 2 for b in y)
    if sxx <= 0.0 or syy <= 0.0:
        return None
    denom = sqrt(sxx * syy)
    if denom == 0.0:  # the product can underflow for tiny variances
        denom = sqrt(sxx) * sqrt(syy)
    sxy = fsum((a - mean_x) * (b - mean_y) for a, b in zip(x, y))
    r = sxy / denom
    return max(-1.0, min(1.0, r))


@dataclass
class AttributionResult:
    doc_id: str
    scores: dict[str, float | None]
    predicted: str | None  # None records an abstention


def classify(
    doc: DocumentPatterns,
    signatures: Mapping[str, Signature],
    *,
    binary: bool = False,
) -> AttributionResult:
    """Score the document against every class signature and predict the
    argmax correlation.  Ties break by class registration order; if no
    class yields a defined score the result is an abstention."""
    if len(signatures) < 2:
        raise ValueError("attribution needs at least two classes")
    scores: dict[str, float | None] = {}
    for class_id, sig in signatures.items():
        if not sig.patterns:
            scores[class_id] = None
            continue
        xv, yv = vectorize(sig, doc, binary=binary)
        scores[class_id] = pearson(xv.values, yv.values)
    best: str | None = None
    for class_id in signatures:
        r = scores[class_id]
        if r is None:
            continue
        if best is None or r > scores[best]:
            best = class_id
    return AttributionResult(doc.doc_id, scores, best)


@dataclass
class ClassAccuracy:
    n_test: int
    n_correct: int

    @property
    def accuracy(self) -> float:
        return self.n_correct / self.n_test if self.n_test else 0.0


@dataclass
class EvaluationReport:
    split: tuple[float, float]
    per_class: dict[str, ClassAccuracy]
    results: list[tuple[str, AttributionResult]]  # (true class, result)

    @property
    def mean_accuracy(self) -> float:
        if not self.per_class:
            return 0.0
        return fsum(c.accuracy for c in self.per_class.values()) / len(self.per_class)


def split_documents(
    docs: Seq[DocumentPatterns], train_fraction: float, seed, class_id: str
) -> tuple[list[DocumentPatterns], list[DocumentPatterns]]:
    """Deterministic per-class shuffle and split."""
    order = list(docs)
    random.Random(f"{seed}:{class_id}").shuffle(order)
    n_train = min(len(order) - 1, max(1, round(len(order) * train_fraction)))
    return order[:n_train], order[n_train:]


def evaluate(
    docs_by_class: Mapping[str, Seq[DocumentPatterns]],
    *,
    train_fraction: float = 0.75,
    seed: int = 0,
    quorum: float = 1.0,
    binary: bool = False,
    permute_labels_seed: int | None = None,
) -> EvaluationReport:
    """Split each class, build signatures on the training side, classify the
    held-out documents, and report per-class accuracy.  Abstentions count
    as errors.

    ``permute_labels_seed`` scores the fixed predictions against a random
    permutation of the held-out ground-truth labels — a chance-level
    baseline for sanity checks.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    if len(docs_by_class) < 2:
        raise TooFewDocuments("need at least two classes")
    for class_id, docs in docs_by_class.items():
        if len(docs) < 4:
            raise TooFewDocuments(
                f"class {class_id!r} has {len(docs)} documents, need at least 4"
            )
    train: dict[str, list[DocumentPatterns]] = {}
    test: list[tuple[str, DocumentPatterns]] = []
    for class_id, docs in docs_by_class.items():
        tr, te = split_documents(docs, train_fraction, seed, class_id)
        train[class_id] = tr
        test.extend((class_id, doc) for doc in te)

    signatures: dict[str, Signature] = {}
    for class_id in docs_by_class:
        initial = initial_signature(class_id, train[class_id], quorum)
        others = [
            doc
            for other, docs in train.items()
            if other != class_id
            for doc in docs
        ]
        signatures[class_id] = revise_signature(initial, reference_patterns(others))

    results = [
        (true_class, classify(doc, signatures, binary=binary))
        for true_class, doc in test
    ]
    if permute_labels_seed is not None:
        labels = [true_class for true_class, _ in results]
        random.Random(permute_labels_seed).shuffle(labels)
        results = [
            (label, res) for label, (_, res) in zip(labels, results)
        ]

    per_class = {c: ClassAccuracy(0, 0) for c in docs_by_class}
    for true_class, res in results:
        acc = per_class[true_class]
        acc.n_test += 1
        if res.predicted == true_class:
            acc.n_correct += 1
    return EvaluationReport(
        (train_fraction, 1.0 - train_fraction), per_class, results
    )
