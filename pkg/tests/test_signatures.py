import io
import random

import pytest

from stylomine.oracle import enumerate_all
from stylomine.seqdb import Dictionary, MiningParams, encode_corpus, pattern_order_key
from stylomine.signatures import (
    DocumentPatterns,
    EmptyCorpus,
    Signature,
    build_class_signatures,
    initial_signature,
    mine_document,
    read_signature,
    reference_patterns,
    revise_signature,
    temporal_ratio_percent,
    temporal_stats,
    write_signature,
)
from stylomine.synthetic import planted_corpus, planted_tokens


def doc(doc_id, *keys, support=1):
    return DocumentPatterns(doc_id, {k: support for k in keys})


P = ((0,),)
Q = ((1,),)
R = ((2,),)


class TestMineDocument:
    def test_two_token_sentence(self):
        d = Dictionary()
        got = mine_document(
            [["a", "b"]], MiningParams(k=250, minlen=1, maxlen=2, gap=1), d,
            doc_id="doc",
        )
        a, b = d.codes["a"], d.codes["b"]
        assert got.patterns == {((a,),): 1, ((b,),): 1, ((a,), (b,)): 1}

    def test_agrees_with_enumeration(self):
        rng = random.Random(19)
        d = Dictionary()
        sentences = [
            [rng.choice("abcd") for _ in range(rng.randint(2, 6))]
            for _ in range(5)
        ]
        got = mine_document(sentences, MiningParams(k=250, maxlen=2, gap=1), d)
        db = encode_corpus(sentences, Dictionary(d.symbols))
        want = {p.elements: p.support for p in enumerate_all(db, maxlen=2, gap=1)}
        assert got.patterns == want

    def test_default_params(self):
        params = MiningParams()
        assert (params.k, params.minlen, params.maxlen, params.gap) == (250, 1, 2, 1)

    def test_empty_document(self):
        got = mine_document([], MiningParams(), Dictionary(), doc_id="empty")
        assert got.patterns == {}


class TestInitialSignature:
    def test_full_quorum_is_intersection(self):
        sig = initial_signature("x", [doc("A", P, Q), doc("B", P)], quorum=1.0)
        assert set(sig.patterns) == {P}
        assert sig.stage == "initial"

    def test_majority_quorum(self):
        sig = initial_signature("x", [doc("A", P, Q), doc("B", P)], quorum=0.5)
        assert set(sig.patterns) == {P, Q}

    def test_single_document_identity(self):
        sig = initial_signature("x", [doc("A", P, Q)], quorum=1.0)
        assert set(sig.patterns) == {P, Q}

    def test_mean_support_over_containing_docs(self):
        docs = [
            DocumentPatterns("A", {P: 4, Q: 2}),
            DocumentPatterns("B", {P: 6}),
        ]
        sig = initial_signature("x", docs, quorum=0.5)
        assert sig.patterns[P] == 5.0
        assert sig.patterns[Q] == 2.0

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            initial_signature("x", [])

    def test_bad_quorum(self):
        with pytest.raises(ValueError):
            initial_signature("x", [doc("A", P)], quorum=0.0)

    def test_quorum_monotonicity(self):
        rng = random.Random(43)
        for _ in range(20):
            docs = [
                doc(f"d{i}", *{
                    ((rng.randrange(5),),) for _ in range(rng.randint(1, 6))
                })
                for i in range(rng.randint(1, 6))
            ]
            sizes = [
                len(initial_signature("x", docs, q).patterns)
                for q in (0.25, 0.5, 0.75, 1.0)
            ]
            assert sizes == sorted(sizes, reverse=True)


class TestReviseSignature:
    def test_reference_union(self):
        assert reference_patterns([doc("A", P, Q), doc("B", Q, R)]) == {P, Q, R}
        assert reference_patterns([]) == set()

    def test_difference(self):
        initial = Signature("x", "initial", {P: 1.0, Q: 1.0})
        revised = revise_signature(initial, {Q})
        assert set(revised.patterns) == {P}
        assert revised.stage == "revised"

    def test_empty_result_warns(self, caplog):
        initial = Signature("x", "initial", {P: 1.0})
        with caplog.at_level("WARNING"):
            revised = revise_signature(initial, {P, Q})
        assert revised.patterns == {}
        assert any("revised signature is empty" in r.message for r in caplog.records)

    def test_requires_initial_stage(self):
        with pytest.raises(ValueError):
            revise_signature(Signature("x", "revised", {}), set())

    def test_exact_partition(self):
        rng = random.Random(47)
        for _ in range(30):
            keys = {((rng.randrange(8),), (rng.randrange(8),)) for _ in range(10)}
            initial = Signature("x", "initial", {k: 1.0 for k in keys})
            reference = {k for k in keys if rng.random() < 0.5}
            reference |= {((99,),)}
            revised = revise_signature(initial, reference)
            kept = set(revised.patterns)
            removed = set(initial.patterns) & reference
            assert kept | removed == set(initial.patterns)
            assert not kept & removed


class TestTemporalStats:
    def make_signature(self, dictionary, n_temporal, n_total):
        event = dictionary.add("EVENT")
        plain = dictionary.add("NN1")
        patterns = {}
        for i in range(n_temporal):
            patterns[((event,), (100 + i,))] = 1.0
        for i in range(n_total - n_temporal):
            patterns[((plain,), (500 + i,))] = 1.0
        return Signature("x", "revised", patterns)

    @pytest.mark.parametrize(
        "n_temporal,n_total,expected",
        [(33, 269, 12.3), (25, 203, 12.3), (29, 203, 14.3), (22, 62, 35.5)],
    )
    def test_published_ratios(self, n_temporal, n_total, expected):
        d = Dictionary()
        sig = self.make_signature(d, n_temporal, n_total)
        stats = temporal_stats(sig, d)
        assert stats.n_temporal == n_temporal
        assert stats.n_revised == n_total
        assert stats.ratio_percent == expected

    def test_zero_temporal(self):
        d = Dictionary()
        stats = temporal_stats(self.make_signature(d, 0, 5), d)
        assert stats.ratio_percent == 0.0

    def test_empty_signature(self):
        d = Dictionary(["EVENT"])
        stats = temporal_stats(Signature("x", "revised", {}), d)
        assert stats.n_revised == 0
        assert stats.temporal_ratio == 0.0

    def test_timex_counts_too(self):
        d = Dictionary(["TIMEX3", "NN1"])
        sig = Signature("x", "revised", {((0,),): 1.0, ((1,),): 1.0})
        assert temporal_stats(sig, d).n_temporal == 1

    def test_ratio_percent_helper(self):
        assert temporal_ratio_percent(22, 62) == 35.5
        assert temporal_ratio_percent(0, 0) == 0.0


class TestPipeline:
    def mined_corpus(self, seed):
        corpus = planted_corpus(seed, docs_per_class=8, sentences=(6, 10))
        dictionary = Dictionary()
        params = MiningParams()
        docs = {
            c: [mine_document(s, params, dictionary, doc_id=i) for i, s in ds]
            for c, ds in corpus.items()
        }
        return dictionary, docs

    def test_planted_pattern_survives_revision(self):
        dictionary, docs = self.mined_corpus(7)
        built = build_class_signatures(docs, dictionary, quorum=1.0)
        for class_id, cs in built.items():
            a, b = planted_tokens(class_id)
            pair = ((dictionary.codes[a],), (dictionary.codes[b],))
            assert pair in cs.revised.patterns
            for other_id, other in built.items():
                if other_id != class_id:
                    assert pair not in other.revised.patterns

    def test_revised_signatures_pairwise_disjoint(self):
        dictionary, docs = self.mined_corpus(8)
        built = build_class_signatures(docs, dictionary, quorum=1.0)
        classes = list(built)
        for i, a in enumerate(classes):
            for b in classes[i + 1 :]:
                assert not (
                    set(built[a].revised.patterns) & set(built[b].revised.patterns)
                )

    def test_stats_counts_consistent(self):
        dictionary, docs = self.mined_corpus(9)
        built = build_class_signatures(docs, dictionary, quorum=1.0)
        for class_id, cs in built.items():
            s = cs.stats
            assert s.n_training_patterns == sum(
                len(d.patterns) for d in docs[class_id]
            )
            assert s.n_reference == sum(
                len(d.patterns)
                for c, ds in docs.items()
                if c != class_id
                for d in ds
            )
            assert s.n_initial == len(cs.initial.patterns)
            assert s.n_revised == len(cs.revised.patterns)
            assert set(cs.revised.patterns) <= set(cs.initial.patterns)

    def test_deterministic(self):
        d1, docs1 = self.mined_corpus(10)
        d2, docs2 = self.mined_corpus(10)
        b1 = build_class_signatures(docs1, d1, quorum=1.0)
        b2 = build_class_signatures(docs2, d2, quorum=1.0)
        for class_id in b1:
            assert b1[class_id].revised.patterns == b2[class_id].revised.patterns

    def test_no_classes(self):
        with pytest.raises(EmptyCorpus):
            build_class_signatures({}, Dictionary())


class TestSignatureFiles:
    def test_round_trip(self):
        d = Dictionary(["EVENT", "vbd", "NN1"])
        sig = Signature("alpha", "revised", {((0,), (1,)): 37.0, ((2,),): 4.5})
        buf = io.StringIO()
        write_signature(sig, buf, d)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "class alpha stage revised"
        assert lines[1] == "EVENT -1 vbd -1 #SUP: 37"
        back = read_signature(io.StringIO(buf.getvalue()), d)
        assert back.class_id == sig.class_id
        assert back.stage == sig.stage
        assert back.patterns == sig.patterns

    def test_keys_in_order(self):
        sig = Signature("x", "revised", {((1,), (0,)): 1.0, ((0,),): 2.0})
        assert sig.keys_in_order() == sorted(sig.patterns, key=pattern_order_key)
