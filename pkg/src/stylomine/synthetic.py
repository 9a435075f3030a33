"""Synthetic corpora for demos and tests.

Two generators: token-level tag corpora with one unique planted skip-gram
per class (to exercise the signature pipeline end to end), and annotated
XML documents in the toolkit layout so the full extract/mine/signature/
attribute chain can run against generated files.
"""

from __future__ import annotations

import math
import random
from pathlib import Path
from typing import Sequence as Seq

from .extract import TagSequence

BACKGROUND_TAGS = (
    "NN1", "VVD", "AT0", "PRP", "AJ0", "NN2", "VBZ", "PNP", "AV0", "CJC",
)
# skewed draw weights so common tags show up in every document
BACKGROUND_WEIGHTS = tuple(1.0 / (i + 1) for i in range(len(BACKGROUND_TAGS)))

EVENT_POS = ("VVD", "VVG", "VVN")

DEFAULT_CLASSES = ("alpha", "beta", "gamma", "delta")


def planted_tokens(class_id: str) -> tuple[str, str]:
    """The two class-unique symbols whose adjacent pair is the planted
    skip-gram of the class."""
    return (f"UQ{class_id.upper()}A", f"UQ{class_id.upper()}B")


def _sentence(rng: random.Random, length: int) -> list[str]:
    tokens = ["s"]
    while len(tokens) < length + 1:
        roll = rng.random()
        if roll < 0.12:
            tokens.append("EVENT")
            tokens.append(rng.choice(EVENT_POS))
        elif roll < 0.18:
            tokens.append("TIMEX3")
            tokens.append("CRD")
        else:
            tokens.append(
                rng.choices(BACKGROUND_TAGS, weights=BACKGROUND_WEIGHTS, k=1)[0]
            )
    return tokens


def planted_document(
    rng: random.Random,
    doc_id: str,
    class_id: str,
    *,
    sentences: tuple[int, int] = (12, 20),
    sentence_len: tuple[int, int] = (6, 12),
    pair_rate: float = 0.6,
) -> list[TagSequence]:
    """A document over the shared background distribution with the class's
    first planted token in every sentence and the full adjacent pair in a
    strict subset of them, so the derived supports vary."""
    first, second = planted_tokens(class_id)
    n_sent = rng.randint(*sentences)
    n_pair = max(1, min(n_sent - 1, math.ceil(pair_rate * n_sent)))
    paired = set(rng.sample(range(n_sent), n_pair))
    out = []
    for i in range(n_sent):
        tokens = _sentence(rng, rng.randint(*sentence_len))
        at = rng.randrange(1, len(tokens) + 1)
        insert = [first, second] if i in paired else [first]
        tokens[at:at] = insert
        out.append(TagSequence(doc_id, tuple(tokens)))
    return out


def planted_corpus(
    seed: int,
    class_ids: Seq[str] = DEFAULT_CLASSES,
    docs_per_class: int = 40,
    **doc_kwargs,
) -> dict[str, list[tuple[str, list[TagSequence]]]]:
    """Per-class lists of (doc_id, sentences) with one planted pair each."""
    rng = random.Random(seed)
    corpus: dict[str, list[tuple[str, list[TagSequence]]]] = {}
    for class_id in class_ids:
        docs = []
        for n in range(docs_per_class):
            doc_id = f"{class_id}-{n:03d}"
            docs.append(
                (doc_id, planted_document(rng, doc_id, class_id, **doc_kwargs))
            )
        corpus[class_id] = docs
    return corpus


# --- annotated XML rendering ---------------------------------------------

_WORDS = (
    "alpha", "bravo", "carry", "delta", "ember", "frost", "glide", "haven",
    "inlet", "jolly", "knoll", "lumen", "murmur", "noble", "orbit", "plume",
)


def document_xml(sentences: Seq[TagSequence]) -> str:
    """Render token sequences as an annotated XML document whose extraction
    reproduces the very same sequences.

    EVENT and TIMEX3 tokens must be followed by the POS token they cover;
    the corresponding XML tag is written before the token's lex entry, so
    the extractor's EVENT pair stands in for the token's own emission.
    """
    offset = 2
    text_parts: list[str] = []
    tag_lines: list[str] = []
    lex_id = 0

    def add_word(word: str) -> tuple[int, int]:
        nonlocal offset
        begin = offset
        end = begin + len(word)
        text_parts.append(word)
        offset = end + 1
        return begin, end

    for seq in sentences:
        tokens = list(seq.tokens)
        words = [_WORDS[i % len(_WORDS)] for i in range(len(tokens))]
        sentence_begin = offset
        pending: list[str] = []
        body: list[str] = []
        i = 0
        w = 0
        while i < len(tokens):
            tok = tokens[i]
            if tok == "s":
                i += 1
                continue
            if tok in ("ng", "vg", "EVENT", "TIMEX3"):
                pending.append(tok)
                i += 1
                continue
            begin, end = add_word(words[w])
            w += 1
            for kind in pending:
                attrs = f'begin="{begin}" end="{end}"'
                if kind == "EVENT":
                    body.append(f'<EVENT {attrs} class="OCCURRENCE" eid="e{lex_id}" />')
                elif kind == "TIMEX3":
                    body.append(f'<TIMEX3 {attrs} tid="t{lex_id}" type="DATE" />')
                else:
                    body.append(f"<{kind} {attrs} />")
            pending = []
            lex_id += 1
            body.append(
                f'<lex begin="{begin}" end="{end}" id="l{lex_id}" pos="{tok}" '
                f'text="{words[w - 1]}" />'
            )
            i += 1
        begin, end = add_word(".")
        lex_id += 1
        body.append(
            f'<lex begin="{begin}" end="{end}" id="l{lex_id}" pos="." text="." />'
        )
        if seq.tokens and seq.tokens[0] == "s":
            tag_lines.append(f'<s begin="{sentence_begin}" end="{end}" />')
        tag_lines.extend(body)

    text = " ".join(text_parts)
    tags = "\n  ".join(tag_lines)
    return (
        "<ttk>\n"
        f"<text>{text}</text>\n"
        "<tarsqi_tags>\n"
        f"  {tags}\n"
        "</tarsqi_tags>\n"
        "</ttk>\n"
    )


def write_xml_corpus(
    out_dir,
    seed: int,
    class_ids: Seq[str] = DEFAULT_CLASSES,
    docs_per_class: int = 8,
    **doc_kwargs,
) -> dict[str, list[Path]]:
    """Write one annotated XML file per generated document, one directory
    per class, and return the paths."""
    out_dir = Path(out_dir)
    corpus = planted_corpus(seed, class_ids, docs_per_class, **doc_kwargs)
    written: dict[str, list[Path]] = {}
    for class_id, docs in corpus.items():
        class_dir = out_dir / class_id
        class_dir.mkdir(parents=True, exist_ok=True)
        paths = []
        for doc_id, sentences in docs:
            path = class_dir / f"{doc_id}.xml"
            path.write_text(document_xml(sentences), encoding="utf-8")
            paths.append(path)
        written[class_id] = paths
    return written
