"""Brute-force pattern enumeration used as ground truth in tests.

Every canonical pattern over the items present in the database is
generated up to the item-count limit and its support is measured with the
plain containment check, with no search-time pruning.  Exponential blowup
is accepted; a budget guard refuses runs that would generate too many
candidates.
"""

from __future__ import annotations

from .miner import validate_params
from .seqdb import (
    MiningParams,
    Pattern,
    PatternKey,
    SequenceDatabase,
    ranking_key,
    support,
)

DEFAULT_BUDGET = 200_000


class SizeGuard(RuntimeError):
    """Enumeration would exceed the candidate budget."""


def enumerate_all(
    db: SequenceDatabase,
    minlen: int = 1,
    maxlen: int = 2,
    gap: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[Pattern]:
    """All patterns with support >= 1 and an item count in [minlen, maxlen].

    Generate-and-test: every canonical candidate over the database alphabet
    is built and checked with ``seqdb.support``; nothing is pruned.
    """
    alphabet = sorted({i for seq in db.sequences for itemset in seq.itemsets for i in itemset})
    results: list[Pattern] = []
    generated = 0

    def visit(elements: PatternKey, count: int) -> None:
        nonlocal generated
        generated += 1
        if generated > budget:
            raise SizeGuard(f"more than {budget} candidates")
        sup = support(db, elements, gap)
        if sup >= 1 and count >= minlen:
            results.append(Pattern(elements, sup))
        if count >= maxlen:
            return
        last_itemset = elements[-1]
        for item in alphabet:
            visit(elements + ((item,),), count + 1)
            if item > last_itemset[-1]:
                grown = elements[:-1] + (last_itemset + (item,),)
                visit(grown, count + 1)

    for item in alphabet:
        visit(((item,),), 1)
    return sorted(results, key=ranking_key)


def topk_oracle(
    db: SequenceDatabase, params: MiningParams, budget: int = DEFAULT_BUDGET
) -> list[Pattern]:
    """Reference top-k result: enumerate everything, sort by support
    descending then canonical order, truncate to k."""
    validate_params(params)
    ranked = enumerate_all(db, params.minlen, params.maxlen, params.gap, budget)
    return ranked[: params.k]
