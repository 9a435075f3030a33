"""Parsing of TTK-style annotated XML and extraction of per-sentence tag sequences.

An annotated document is a flat list of offset-bearing tags inside a
``tarsqi_tags`` element: sentence markers ``s``, chunk markers ``ng``/``vg``,
tokens ``lex`` (each carrying a POS label), and the temporal tags ``EVENT``
and ``TIMEX3``.  Extraction turns that list into one symbolic token sequence
per sentence, which is what the mining layer consumes.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

KEPT_KINDS = ("s", "ng", "vg", "EVENT", "TIMEX3", "lex")
TERMINATOR = "."


class MalformedXml(ValueError):
    """Input is not parseable annotated XML."""


class MissingPos(ValueError):
    """A lex tag carries no part-of-speech attribute."""


@dataclass(frozen=True)
class AnnotationTag:
    kind: str
    begin: int
    end: int
    pos: str | None = None


@dataclass
class AnnotatedDocument:
    doc_id: str
    tags: list[AnnotationTag]


@dataclass(frozen=True)
class TagSequence:
    """One sentence's worth of symbolic tokens, terminator excluded."""

    doc_id: str
    tokens: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.tokens)


def _offset(elem: ET.Element, attr: str, doc_id: str) -> int:
    raw = elem.get(attr)
    if raw is None:
        raise MalformedXml(f"{doc_id or '<input>'}: <{elem.tag}> lacks {attr!r}")
    try:
        value = int(raw)
    except ValueError:
        raise MalformedXml(
            f"{doc_id or '<input>'}: <{elem.tag}> has non-integer {attr}={raw!r}"
        ) from None
    if value < 0:
        raise MalformedXml(f"{doc_id or '<input>'}: <{elem.tag}> has negative {attr}")
    return value


def parse_annotated_xml(data: bytes | str, doc_id: str = "") -> AnnotatedDocument:
    """Collect the s/ng/vg/EVENT/TIMEX3/lex tags of an annotated document.

    Tags come back in document order (sorted by begin offset; equal offsets
    keep the order they appear in the file).  Other tag kinds emitted by the
    annotation toolchain (docelement, SLINK, TLINK, ...) are ignored.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedXml(f"{doc_id or '<input>'}: {exc}") from None
    container = root if root.tag == "tarsqi_tags" else root.find(".//tarsqi_tags")
    if container is None:
        raise MalformedXml(f"{doc_id or '<input>'}: no tarsqi_tags element")
    tags: list[AnnotationTag] = []
    for elem in container:
        kind = elem.tag
        if kind not in KEPT_KINDS:
            continue
        begin = _offset(elem, "begin", doc_id)
        end = _offset(elem, "end", doc_id)
        if begin > end:
            raise MalformedXml(
                f"{doc_id or '<input>'}: <{kind}> has begin {begin} > end {end}"
            )
        pos = None
        if kind == "lex":
            pos = elem.get("pos")
            if pos is None:
                raise MissingPos(
                    f"{doc_id or '<input>'}: lex at offset {begin} has no pos attribute"
                )
        tags.append(AnnotationTag(kind, begin, end, pos))
    tags.sort(key=lambda t: t.begin)  # stable: preserves file order on ties
    return AnnotatedDocument(doc_id, tags)


def extract_sequences(doc: AnnotatedDocument) -> list[TagSequence]:
    """Turn an annotated document into one tag sequence per sentence.

    Structural tags contribute their own symbol, a lex its POS label, a
    TIMEX3 a single ``TIMEX3`` token, and an EVENT the adjacent pair
    ``EVENT`` + POS-of-annotated-token.  When the EVENT tag precedes its
    token, the pair stands in for the token's own emission; when it follows
    (the usual toolkit layout), the POS label appears once from the token
    itself and once from the pair.  A lex whose POS is ``.`` closes the
    current sentence; sentences lacking one are flushed at the next sentence
    marker or at the end of the document.  Empty sentences are dropped.
    """
    by_span: dict[tuple[int, int], int] = {}
    by_begin: dict[int, int] = {}
    for i, tag in enumerate(doc.tags):
        if tag.kind == "lex":
            by_span.setdefault((tag.begin, tag.end), i)
            by_begin.setdefault(tag.begin, i)

    sequences: list[TagSequence] = []
    current: list[str] = []
    consumed: set[int] = set()
    emitted: set[int] = set()

    def flush() -> None:
        if current:
            sequences.append(TagSequence(doc.doc_id, tuple(current)))
            current.clear()

    for i, tag in enumerate(doc.tags):
        if tag.kind == "s":
            flush()
            current.append("s")
        elif tag.kind in ("ng", "vg"):
            current.append(tag.kind)
        elif tag.kind == "TIMEX3":
            current.append("TIMEX3")
        elif tag.kind == "EVENT":
            current.append("EVENT")
            j = by_span.get((tag.begin, tag.end))
            if j is None:
                j = by_begin.get(tag.begin)
            if j is not None and doc.tags[j].pos != TERMINATOR:
                current.append(doc.tags[j].pos)
                if j not in emitted:
                    consumed.add(j)  # the pair already covers this token
        else:  # lex
            emitted.add(i)
            if i in consumed:
                continue
            if tag.pos == TERMINATOR:
                flush()
            else:
                current.append(tag.pos)
    flush()
    return sequences


def write_tagseq(sequences: Iterable[TagSequence], sink) -> int:
    """Write sequences as space-separated tokens, each closed by ``.``.

    Returns the number of bytes written.  Round-trips with
    ``seqdb.read_tagseq``.
    """
    parts: list[str] = []
    for seq in sequences:
        parts.extend(seq.tokens)
        parts.append(TERMINATOR)
    text = " ".join(parts)
    data = text.encode("utf-8")
    if isinstance(sink, (str, Path)):
        Path(sink).write_bytes(data)
    else:
        sink.write(text)
    return len(data)
