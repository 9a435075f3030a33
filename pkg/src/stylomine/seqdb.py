"""Integer-coded sequence databases with gap-aware containment and SPMF I/O.

Sequences are ordered lists of itemsets (sorted tuples of item codes); a
corpus-wide dictionary maps symbols to dense codes in first-appearance
order.  The vertical representation indexes, per item, the itemset
positions (1-based) at which it occurs in each sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence as Seq

from .extract import TERMINATOR, TagSequence

PatternKey = tuple[tuple[int, ...], ...]
VerticalIndex = dict[int, dict[int, list[int]]]


class MalformedLine(ValueError):
    """A line violates the SPMF file conventions."""


class Dictionary:
    """Bijective symbol/code map; codes are dense, in first-appearance order."""

    __slots__ = ("symbols", "codes")

    def __init__(self, symbols: Iterable[str] = ()):
        self.symbols: list[str] = []
        self.codes: dict[str, int] = {}
        for sym in symbols:
            self.add(sym)

    def add(self, symbol: str) -> int:
        code = self.codes.get(symbol)
        if code is None:
            code = len(self.symbols)
            self.codes[symbol] = code
            self.symbols.append(symbol)
        return code

    def code(self, symbol: str) -> int:
        return self.codes[symbol]

    def symbol(self, code: int) -> str:
        return self.symbols[code]

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.codes

    def __eq__(self, other) -> bool:
        return isinstance(other, Dictionary) and self.symbols == other.symbols

    def save(self, sink) -> None:
        text = "".join(f"{code}\t{sym}\n" for code, sym in enumerate(self.symbols))
        if isinstance(sink, (str, Path)):
            Path(sink).write_text(text, encoding="utf-8")
        else:
            sink.write(text)

    @classmethod
    def load(cls, source) -> "Dictionary":
        text = _read_text(source)
        dictionary = cls()
        for n, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                code_str, symbol = line.split("\t", 1)
                code = int(code_str)
            except ValueError:
                raise MalformedLine(f"dictionary line {n}: {line!r}") from None
            if code != len(dictionary.symbols):
                raise MalformedLine(f"dictionary line {n}: non-dense code {code}")
            dictionary.add(symbol)
        return dictionary


@dataclass(frozen=True)
class Sequence:
    sid: int
    itemsets: tuple[tuple[int, ...], ...]


@dataclass
class SequenceDatabase:
    sequences: list[Sequence] = field(default_factory=list)
    dictionary: Dictionary = field(default_factory=Dictionary)

    def __len__(self) -> int:
        return len(self.sequences)

    def __iter__(self) -> Iterator[Sequence]:
        return iter(self.sequences)


@dataclass(frozen=True)
class Pattern:
    """An ordered list of itemsets together with its support count."""

    elements: PatternKey
    support: int | float = 0

    @property
    def item_count(self) -> int:
        return sum(len(e) for e in self.elements)


@dataclass
class MiningParams:
    """Search parameters: result size k, item-count bounds, and the maximum
    number of itemsets that may be skipped between consecutive pattern
    elements (``gap=None`` lifts the constraint)."""

    k: int = 250
    minlen: int = 1
    maxlen: int = 2
    gap: int | None = 1


def flatten_key(elements: PatternKey) -> tuple[int, ...]:
    """Flatten a pattern's itemsets into one tuple, -1 closing each itemset."""
    flat: list[int] = []
    for itemset in elements:
        flat.extend(itemset)
        flat.append(-1)
    return tuple(flat)


def pattern_order_key(elements: PatternKey) -> tuple:
    """Canonical pattern order: fewer items first, then flattened codes."""
    return (sum(len(e) for e in elements), flatten_key(elements))


def ranking_key(pattern: Pattern) -> tuple:
    """Sort key for result lists: support descending, canonical order ascending."""
    count, flat = pattern_order_key(pattern.elements)
    return (-pattern.support, count, flat)


def encode_corpus(
    tag_sequences: Iterable[TagSequence | Seq[str]],
    dictionary: Dictionary | None = None,
) -> SequenceDatabase:
    """Code token sequences into a database of singleton itemsets.

    Codes are assigned in first-appearance order (or looked up in the given
    shared dictionary, which grows as needed).  ``.`` terminators and empty
    sequences are dropped; sids run 1..n.
    """
    dictionary = dictionary if dictionary is not None else Dictionary()
    sequences: list[Sequence] = []
    for ts in tag_sequences:
        tokens = ts.tokens if isinstance(ts, TagSequence) else ts
        itemsets = tuple((dictionary.add(tok),) for tok in tokens if tok != TERMINATOR)
        if itemsets:
            sequences.append(Sequence(len(sequences) + 1, itemsets))
    return SequenceDatabase(sequences, dictionary)


def build_vertical(db: SequenceDatabase) -> VerticalIndex:
    """Index every item by the 1-based itemset positions where it occurs,
    per sequence.  The database is scanned once."""
    index: VerticalIndex = {}
    for seq in db.sequences:
        for pos, itemset in enumerate(seq.itemsets, start=1):
            for item in itemset:
                index.setdefault(item, {}).setdefault(seq.sid, []).append(pos)
    return index


def contains(
    seq: Sequence | Seq[tuple[int, ...]],
    pattern: Pattern | PatternKey,
    gap: int | None = None,
) -> bool:
    """True when the pattern embeds into the sequence in order, each element
    included in an itemset, with at most ``gap`` itemsets skipped between
    consecutive elements (unbounded when gap is None)."""
    elements = pattern.elements if isinstance(pattern, Pattern) else tuple(pattern)
    itemsets = seq.itemsets if isinstance(seq, Sequence) else tuple(seq)
    n = len(itemsets)
    frontier: list[int] | None = None
    for element in elements:
        if frontier is None:
            frontier = [
                q for q in range(n) if all(i in itemsets[q] for i in element)
            ]
        elif gap is None:
            start = frontier[0] + 1
            frontier = [
                q for q in range(start, n) if all(i in itemsets[q] for i in element)
            ]
        else:
            allowed: set[int] = set()
            for e in frontier:
                allowed.update(range(e + 1, min(n, e + gap + 2)))
            frontier = sorted(
                q for q in allowed if all(i in itemsets[q] for i in element)
            )
        if not frontier:
            return False
    return True


def support(
    db: SequenceDatabase, pattern: Pattern | PatternKey, gap: int | None = None
) -> int:
    """Number of database sequences containing the pattern."""
    return sum(1 for seq in db.sequences if contains(seq, pattern, gap))


# --- SPMF file formats ---------------------------------------------------
#
# Sequence lines: items as base-10 integers, "-1" ends an itemset, "-2"
# ends the sequence.  Pattern lines: items and "-1" separators followed by
# "#SUP: <n>".  Pattern files may carry symbols instead of integer codes
# when a dictionary is supplied.


def _read_text(source) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8")
    return source.read()


def _write_text(sink, text: str) -> int:
    data = text.encode("utf-8")
    if isinstance(sink, (str, Path)):
        Path(sink).write_bytes(data)
    else:
        sink.write(text)
    return len(data)


def format_sequence_line(seq: Sequence) -> str:
    parts: list[str] = []
    for itemset in seq.itemsets:
        parts.extend(str(i) for i in itemset)
        parts.append("-1")
    parts.append("-2")
    return " ".join(parts)


def write_spmf_db(db: SequenceDatabase, sink) -> int:
    text = "".join(format_sequence_line(seq) + "\n" for seq in db.sequences)
    return _write_text(sink, text)


def read_spmf_db(source, dictionary: Dictionary | None = None) -> SequenceDatabase:
    db = SequenceDatabase(dictionary=dictionary or Dictionary())
    for n, line in enumerate(_read_text(source).splitlines(), start=1):
        if not line.strip():
            continue
        tokens = line.split()
        itemsets: list[tuple[int, ...]] = []
        current: list[int] = []
        closed = False
        for tok in tokens:
            if closed:
                raise MalformedLine(f"line {n}: tokens after -2")
            try:
                value = int(tok)
            except ValueError:
                raise MalformedLine(f"line {n}: non-integer token {tok!r}") from None
            if value == -2:
                if current:
                    raise MalformedLine(f"line {n}: itemset not closed before -2")
                closed = True
            elif value == -1:
                if not current:
                    raise MalformedLine(f"line {n}: empty itemset")
                itemsets.append(tuple(current))
                current = []
            elif value < 0:
                raise MalformedLine(f"line {n}: negative item code {value}")
            else:
                current.append(value)
        if not closed:
            raise MalformedLine(f"line {n}: missing -2 terminator")
        if not itemsets:
            raise MalformedLine(f"line {n}: empty sequence")
        db.sequences.append(Sequence(len(db.sequences) + 1, tuple(itemsets)))
    return db


def _format_support(support_value: int | float) -> str:
    if isinstance(support_value, float) and not support_value.is_integer():
        return repr(support_value)
    return str(int(support_value))


def format_pattern_line(pattern: Pattern, dictionary: Dictionary | None = None) -> str:
    parts: list[str] = []
    for itemset in pattern.elements:
        for item in itemset:
            parts.append(dictionary.symbol(item) if dictionary else str(item))
        parts.append("-1")
    parts.append("#SUP:")
    parts.append(_format_support(pattern.support))
    return " ".join(parts)


def write_spmf_patterns(
    patterns: Iterable[Pattern], sink, dictionary: Dictionary | None = None
) -> int:
    text = "".join(format_pattern_line(p, dictionary) + "\n" for p in patterns)
    return _write_text(sink, text)


def _parse_support(token: str, n: int) -> int | float:
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        raise MalformedLine(f"line {n}: bad support value {token!r}") from None


def read_spmf_patterns(
    source, dictionary: Dictionary | None = None
) -> list[Pattern]:
    patterns: list[Pattern] = []
    for n, line in enumerate(_read_text(source).splitlines(), start=1):
        if not line.strip():
            continue
        tokens = line.split()
        try:
            sup_at = tokens.index("#SUP:")
        except ValueError:
            raise MalformedLine(f"line {n}: missing #SUP: marker") from None
        if sup_at != len(tokens) - 2:
            raise MalformedLine(f"line {n}: malformed support suffix")
        sup = _parse_support(tokens[-1], n)
        itemsets: list[tuple[int, ...]] = []
        current: list[int] = []
        for tok in tokens[:sup_at]:
            if tok == "-1":
                if not current:
                    raise MalformedLine(f"line {n}: empty itemset")
                itemsets.append(tuple(current))
                current = []
            elif dictionary is not None:
                current.append(dictionary.add(tok))
            else:
                try:
                    value = int(tok)
                except ValueError:
                    raise MalformedLine(
                        f"line {n}: non-integer token {tok!r}"
                    ) from None
                if value < 0:
                    raise MalformedLine(f"line {n}: negative item code {value}")
                current.append(value)
        if current:
            raise MalformedLine(f"line {n}: itemset not closed before #SUP:")
        if not itemsets:
            raise MalformedLine(f"line {n}: empty pattern")
        patterns.append(Pattern(tuple(itemsets), sup))
    return patterns


def read_tagseq(source, doc_id: str = "") -> list[TagSequence]:
    """Read whitespace-separated tokens, ``.`` closing each sequence.

    Trailing unterminated tokens form a final sequence; empty input gives
    an empty list.  Inverse of ``extract.write_tagseq``.
    """
    if not doc_id and isinstance(source, (str, Path)):
        doc_id = Path(source).stem
    sequences: list[TagSequence] = []
    current: list[str] = []
    for token in _read_text(source).split():
        if token == TERMINATOR:
            if current:
                sequences.append(TagSequence(doc_id, tuple(current)))
                current = []
        else:
            current.append(token)
    if current:
        sequences.append(TagSequence(doc_id, tuple(current)))
    return sequences
