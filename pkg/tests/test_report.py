import io

from stylomine.attribution import AttributionResult, ClassAccuracy, EvaluationReport
from stylomine.report import (
    accuracy_figure,
    render_report,
    signature_figures,
    write_evaluation_report,
    write_score_dump,
    write_stats_table,
)
from stylomine.seqdb import Dictionary
from stylomine.signatures import ClassSignature, Signature, SignatureStats


def make_stats(class_id, temporal, revised):
    return SignatureStats(
        class_id=class_id,
        n_training_patterns=1000,
        n_reference=3000,
        n_initial=40,
        n_revised=revised,
        n_temporal=temporal,
        temporal_ratio=temporal / revised if revised else 0.0,
    )


class TestStatsTable:
    def test_columns_and_ratio_format(self):
        buf = io.StringIO()
        write_stats_table([make_stats("alpha", 22, 62)], buf)
        lines = buf.getvalue().splitlines()
        assert lines[0].split("\t") == [
            "class", "training_patterns", "reference", "initial", "revised",
            "temporal", "ratio",
        ]
        assert lines[1].split("\t") == [
            "alpha", "1000", "3000", "40", "62", "22", "35.5",
        ]

    def test_row_order_follows_registration(self):
        buf = io.StringIO()
        write_stats_table(
            [make_stats("zeta", 1, 10), make_stats("alpha", 2, 10)], buf
        )
        rows = [line.split("\t")[0] for line in buf.getvalue().splitlines()[1:]]
        assert rows == ["zeta", "alpha"]


class TestRenderReport:
    def test_listing_line_shape(self):
        d = Dictionary(["EVENT", "vbd"])
        revised = Signature("alpha", "revised", {((0,), (1,)): 37.0})
        cs = ClassSignature(
            Signature("alpha", "initial", {((0,), (1,)): 37.0}),
            revised,
            make_stats("alpha", 1, 1),
        )
        buf = io.StringIO()
        render_report({"alpha": cs}, d, buf)
        text = buf.getvalue()
        assert "EVENT -1 vbd -1 #SUP: 37" in text
        assert "class alpha stage revised" in text

    def test_empty_signature_lists_header_only(self):
        d = Dictionary()
        cs = ClassSignature(
            Signature("alpha", "initial", {}),
            Signature("alpha", "revised", {}),
            make_stats("alpha", 0, 0),
        )
        buf = io.StringIO()
        render_report({"alpha": cs}, d, buf)
        assert buf.getvalue().splitlines()[-1] == "class alpha stage revised"


def make_report():
    return EvaluationReport(
        split=(0.75, 0.25),
        per_class={"a": ClassAccuracy(4, 4), "b": ClassAccuracy(4, 1)},
        results=[
            ("a", AttributionResult("d1", {"a": 0.9, "b": None}, "a")),
            ("b", AttributionResult("d2", {"a": 0.2, "b": 0.1}, "a")),
        ],
    )


class TestEvaluationOutputs:
    def test_report_rows(self):
        buf = io.StringIO()
        write_evaluation_report(make_report(), buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "class\tn_test\tn_correct\taccuracy"
        assert lines[1] == "a\t4\t4\t1.0000"
        assert lines[2] == "b\t4\t1\t0.2500"

    def test_score_dump(self):
        buf = io.StringIO()
        write_score_dump(make_report(), buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "doc_id\tclass\tr\tpredicted"
        assert "d1\tb\tNA\ta" in lines
        assert "d2\ta\t0.200000\ta" in lines


class TestFigures:
    def test_signature_figures_written(self, tmp_path):
        paths = signature_figures(
            [make_stats("a", 2, 10), make_stats("b", 5, 20)], tmp_path
        )
        assert [p.name for p in paths] == [
            "signature_counts.png", "temporal_ratios.png",
        ]
        for p in paths:
            assert p.stat().st_size > 0

    def test_accuracy_figure_written(self, tmp_path):
        path = accuracy_figure(make_report(), tmp_path / "acc.png")
        assert path.stat().st_size > 0
