import random

import pytest

from conftest import random_db
from stylomine.miner import InvalidParams
from stylomine.oracle import SizeGuard, enumerate_all, topk_oracle
from stylomine.seqdb import (
    Dictionary,
    MiningParams,
    Sequence,
    SequenceDatabase,
    support,
)


class TestEnumerateAll:
    def test_singletons_of_sample(self, db):
        singles = {
            p.elements[0][0]: p.support
            for p in enumerate_all(db, maxlen=1, gap=None)
        }
        assert singles == {0: 2, 1: 1, 2: 3, 3: 2}

    def test_empty_db(self):
        assert enumerate_all(SequenceDatabase()) == []

    def test_single_item_db(self):
        db = SequenceDatabase([Sequence(1, ((0,),))], Dictionary("x"))
        assert [(p.elements, p.support) for p in enumerate_all(db)] == [
            (((0,),), 1)
        ]

    def test_no_duplicates_and_consistent_supports(self):
        rng = random.Random(13)
        for _ in range(15):
            db = random_db(rng, max_seqs=5, max_sets=5)
            gap = rng.choice([0, 1, None])
            res = enumerate_all(db, maxlen=3, gap=gap)
            keys = [p.elements for p in res]
            assert len(keys) == len(set(keys))
            for p in res:
                assert p.support == support(db, p.elements, gap)

    def test_size_guard(self, db):
        with pytest.raises(SizeGuard):
            enumerate_all(db, maxlen=3, budget=10)

    def test_deterministic(self, db):
        assert enumerate_all(db, maxlen=2, gap=1) == enumerate_all(db, maxlen=2, gap=1)


class TestTopKOracle:
    def test_top1(self, db):
        [top] = topk_oracle(db, MiningParams(k=1, maxlen=2, gap=None))
        assert (top.elements, top.support) == (((2,),), 3)

    def test_k_larger_than_pattern_count(self, db):
        params_all = MiningParams(k=10_000, minlen=1, maxlen=2, gap=None)
        everything = enumerate_all(db, maxlen=2, gap=None)
        assert topk_oracle(db, params_all) == everything

    def test_gap_zero_vs_one_on_spread_pattern(self):
        # x _ y: the pair needs one skipped itemset
        db = SequenceDatabase(
            [Sequence(1, ((0,), (2,), (1,)))], Dictionary("xzy")
        )
        pair = ((0,), (1,))
        with_gap = {p.elements: p.support for p in enumerate_all(db, gap=1)}
        without = {p.elements: p.support for p in enumerate_all(db, gap=0)}
        assert with_gap[pair] == 1
        assert pair not in without

    def test_rejects_bad_params(self, db):
        with pytest.raises(InvalidParams):
            topk_oracle(db, MiningParams(k=0))
