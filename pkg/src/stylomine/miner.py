"""Top-k sequential pattern search over the vertical representation.

The search keeps the k best patterns found so far in a bounded structure
whose minimum support acts as a rising admission threshold (it starts at
zero and is raised once k patterns are held).  Candidates are expanded
most-promising-first: the open pattern with the highest support is grown
next, by appending a new itemset after the last one (s-extension) or by
adding a larger-coded item to the last itemset (i-extension).  Items whose
own support falls below the threshold are remembered in a hash set and
never proposed again, and a precedence map of pairwise follow/co-occur
counts prunes extensions whose pair count cannot reach the threshold.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field

from .seqdb import (
    MiningParams,
    Pattern,
    PatternKey,
    SequenceDatabase,
    VerticalIndex,
    build_vertical,
    pattern_order_key,
    ranking_key,
)

Pmap = dict[tuple[int, int, str], int]

_INF = float("inf")


class InvalidParams(ValueError):
    """Rejected mining parameters."""


class NonCanonical(ValueError):
    """Itemset extension would break ascending item-code order."""


def validate_params(params: MiningParams) -> None:
    if params.k < 1:
        raise InvalidParams(f"k must be positive, got {params.k}")
    if params.minlen < 1:
        raise InvalidParams(f"minlen must be positive, got {params.minlen}")
    if params.minlen > params.maxlen:
        raise InvalidParams(
            f"minlen {params.minlen} exceeds maxlen {params.maxlen}"
        )
    if params.gap is not None and params.gap < 0:
        raise InvalidParams(f"gap must be non-negative, got {params.gap}")


def s_extend(pattern: Pattern, item: int) -> Pattern:
    """Append ``{item}`` as a new itemset; support is left for the caller."""
    return Pattern(pattern.elements + ((item,),), 0)


def i_extend(pattern: Pattern, item: int) -> Pattern:
    """Grow the last itemset by ``item``, which must exceed its largest code."""
    last = pattern.elements[-1]
    if item <= last[-1]:
        raise NonCanonical(
            f"item {item} not greater than last itemset {last} of {pattern.elements}"
        )
    return Pattern(pattern.elements[:-1] + (last + (item,),), 0)


def _eviction_key(elements: PatternKey) -> tuple:
    # Inverts the canonical order so the heap root is, among the patterns of
    # minimum support, the one largest in canonical order (evicted first).
    count, flat = pattern_order_key(elements)
    return (-count, tuple(-x for x in flat) + (_INF,))


class TopKState:
    """Bounded best-k pattern collection with a rising minimum support."""

    def __init__(self, k: int):
        self.k = k
        self.threshold: int = 0
        self.discarded_items: set[int] = set()
        self._heap: list[tuple[int | float, tuple, int, Pattern]] = []
        self._counter = itertools.count()

    def __len__(self) -> int:
        return len(self._heap)

    def add(self, pattern: Pattern) -> None:
        entry = (
            pattern.support,
            _eviction_key(pattern.elements),
            next(self._counter),
            pattern,
        )
        heapq.heappush(self._heap, entry)
        if len(self._heap) > self.k:
            heapq.heappop(self._heap)
        if len(self._heap) == self.k:
            self.threshold = self._heap[0][0]

    def results(self) -> list[Pattern]:
        return sorted((entry[3] for entry in self._heap), key=ranking_key)


def raise_threshold(state: TopKState, pattern: Pattern) -> TopKState:
    """Insert a pattern, evicting the worst one once k are held and raising
    the threshold to the lowest support still retained."""
    state.add(pattern)
    return state


def discard_infrequent(state: TopKState, item: int, item_support: int) -> TopKState:
    """Record an item as permanently skippable once it cannot reach the
    threshold (sound because the threshold only rises)."""
    if item_support < state.threshold:
        state.discarded_items.add(item)
    return state


def build_pmap(
    db: SequenceDatabase,
    vertical: VerticalIndex | None = None,
    gap: int | None = None,
) -> Pmap:
    """Count, per (predecessor, successor) pair, the sequences where the
    successor occurs in a later itemset within the gap window (kind "s") or
    in the same itemset with a larger code (kind "i")."""
    keep = None if vertical is None else set(vertical)
    pmap: Pmap = {}
    for seq in db.sequences:
        pairs: set[tuple[int, int, str]] = set()
        sets = seq.itemsets
        n = len(sets)
        for pos, itemset in enumerate(sets):
            for ai, a in enumerate(itemset):
                if keep is not None and a not in keep:
                    continue
                for b in itemset[ai + 1 :]:
                    pairs.add((a, b, "i"))
                hi = n if gap is None else min(n, pos + gap + 2)
                for q in range(pos + 1, hi):
                    for b in sets[q]:
                        pairs.add((a, b, "s"))
        for key in pairs:
            pmap[key] = pmap.get(key, 0) + 1
    return pmap


def prune_with_pmap(
    pattern: Pattern | PatternKey,
    item: int,
    kind: str,
    pmap: Pmap,
    threshold: int,
) -> bool:
    """Keep the extension only if the precedence count of (last item of the
    pattern, item) can still reach the threshold."""
    elements = pattern.elements if isinstance(pattern, Pattern) else pattern
    last_item = elements[-1][-1]
    return pmap.get((last_item, item, kind), 0) >= threshold


@dataclass
class MiningTrace:
    """Optional run trace: threshold trajectory and expansion order."""

    thresholds: list[int] = field(default_factory=list)
    expansions: list[int] = field(default_factory=list)
    generated: int = 0
    pruned: int = 0

    def lines(self) -> list[str]:
        out = [f"threshold {t}" for t in self.thresholds]
        out += [f"expand {s}" for s in self.expansions]
        out.append(f"generated {self.generated}")
        out.append(f"pruned {self.pruned}")
        return out


def _window_merge(ends: list[int], nxt: list[int], gap: int | None) -> list[int]:
    # Positions of the successor reachable from some end position within the
    # gap window; both inputs are sorted ascending.
    if gap is None:
        first = ends[0]
        return [q for q in nxt if q > first]
    out = []
    i = 0
    m = len(ends)
    for q in nxt:
        lo = q - gap - 1
        while i < m and ends[i] < lo:
            i += 1
        if i < m and ends[i] < q:
            out.append(q)
    return out


def _s_join(
    ends: dict[int, list[int]],
    successor: dict[int, list[int]],
    gap: int | None,
) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    small, other = (ends, successor) if len(ends) <= len(successor) else (successor, ends)
    for sid in small:
        if sid not in other:
            continue
        merged = _window_merge(ends[sid], successor[sid], gap)
        if merged:
            out[sid] = merged
    return out


def _i_join(
    ends: dict[int, list[int]], successor: dict[int, list[int]]
) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    small, other = (ends, successor) if len(ends) <= len(successor) else (successor, ends)
    for sid in small:
        if sid not in other:
            continue
        here = set(successor[sid])
        merged = [q for q in ends[sid] if q in here]
        if merged:
            out[sid] = merged
    return out


def mine_topk(
    db: SequenceDatabase,
    params: MiningParams,
    *,
    use_pmap: bool = True,
    use_discard: bool = True,
    trace: MiningTrace | None = None,
) -> list[Pattern]:
    """Return the k highest-support patterns within the length and gap
    constraints, sorted by support descending then canonical order.

    Boundary ties are broken deterministically in favour of patterns
    smallest in canonical order, so the result has exactly
    min(k, number of patterns with positive support) entries.
    """
    validate_params(params)
    if not db.sequences:
        return []
    gap = params.gap
    minlen, maxlen = params.minlen, params.maxlen
    vertical = build_vertical(db)
    item_supports = {item: len(by_sid) for item, by_sid in vertical.items()}
    items_sorted = sorted(vertical)
    state = TopKState(params.k)
    counter = itertools.count()

    def save(elements: PatternKey, sup: int) -> None:
        state.add(Pattern(elements, sup))
        if trace is not None:
            trace.thresholds.append(state.threshold)

    # candidate heap: most promising (highest support) first, canonical
    # order then insertion order breaking ties for determinism
    heap: list[tuple[int, tuple, int, int, PatternKey, dict[int, list[int]]]] = []
    for item in items_sorted:
        ends = vertical[item]
        sup = len(ends)
        elements: PatternKey = ((item,),)
        if minlen <= 1:
            save(elements, sup)
        if maxlen >= 2:
            entry = (-sup, pattern_order_key(elements), next(counter), 1, elements, ends)
            heapq.heappush(heap, entry)

    pmap = build_pmap(db, vertical, gap) if (use_pmap and maxlen >= 2) else None

    while heap:
        neg_sup, _, _, count, elements, ends = heapq.heappop(heap)
        if -neg_sup < state.threshold:
            break  # heap pops are non-increasing in support
        if trace is not None:
            trace.expansions.append(-neg_sup)
        last_itemset = elements[-1]
        last_item = last_itemset[-1]
        new_count = count + 1
        for item in items_sorted:
            if use_discard:
                if item in state.discarded_items:
                    continue
                if item_supports[item] < state.threshold:
                    discard_infrequent(state, item, item_supports[item])
                    continue
            successor = vertical[item]
            # s-extension: new itemset after the last one
            if pmap is None or pmap.get((last_item, item, "s"), 0) >= state.threshold:
                new_ends = _s_join(ends, successor, gap)
                sup = len(new_ends)
                if sup and sup >= state.threshold:
                    new_elements = elements + ((item,),)
                    if new_count >= minlen:
                        save(new_elements, sup)
                    if new_count < maxlen:
                        entry = (
                            -sup,
                            pattern_order_key(new_elements),
                            next(counter),
                            new_count,
                            new_elements,
                            new_ends,
                        )
                        heapq.heappush(heap, entry)
                    if trace is not None:
                        trace.generated += 1
            elif trace is not None:
                trace.pruned += 1
            # i-extension: grow the last itemset in ascending code order
            if item <= last_item:
                continue
            if pmap is not None and pmap.get((last_item, item, "i"), 0) < state.threshold:
                if trace is not None:
                    trace.pruned += 1
                continue
            new_ends = _i_join(ends, successor)
            sup = len(new_ends)
            if sup and sup >= state.threshold:
                new_elements = elements[:-1] + (last_itemset + (item,),)
                if new_count >= minlen:
                    save(new_elements, sup)
                if new_count < maxlen:
                    entry = (
                        -sup,
                        pattern_order_key(new_elements),
                        next(counter),
                        new_count,
                        new_elements,
                        new_ends,
                    )
                    heapq.heappush(heap, entry)
                if trace is not None:
                    trace.generated += 1

    return state.results()
