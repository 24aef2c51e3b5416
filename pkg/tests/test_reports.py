import json
import math

import numpy as np
import pytest

from jddsampler import MetricSample, ThinningResult
from jddsampler.reports import (
    compare_report,
    metric_table,
    read_metrics_csv,
    summarize,
    write_json,
    write_metrics_csv,
    write_thinning_csv,
)


def sample(c, t, d, l) -> MetricSample:
    return MetricSample(clustering=c, triangles=t, diameter=d, lambda_max=l)


class TestSummarize:
    def test_basic_statistics(self):
        values = [1.0, 2.0, 3.0, 4.0]
        out = summarize(values, bins=2)
        assert out["count"] == 4
        assert out["mean"] == pytest.approx(2.5)
        assert out["variance"] == pytest.approx(np.var(values, ddof=1))
        assert out["quantiles"]["p50"] == pytest.approx(2.5)
        assert sum(out["histogram"]["counts"]) == 4
        assert len(out["histogram"]["bin_edges"]) == 3

    def test_single_value(self):
        out = summarize([7.0])
        assert out["variance"] == 0.0
        assert out["min"] == out["max"] == 7.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            summarize([])


class TestMetricsCsv:
    def test_round_trip(self, tmp_path):
        rows = [sample(0.5, 10, 3, 6.25), sample(0.25, 4, 5, 4.0)]
        path = tmp_path / "metrics.csv"
        write_metrics_csv(str(path), ["a.txt", "b.txt"], rows)
        table = read_metrics_csv(str(path))
        assert table["clustering"] == [0.5, 0.25]
        assert table["triangles"] == [10.0, 4.0]
        assert table["diameter"] == [3.0, 5.0]
        assert table["lambda_max"] == [6.25, 4.0]

    def test_header_order_matches_metric_row(self, tmp_path):
        path = tmp_path / "metrics.csv"
        write_metrics_csv(str(path), ["g"], [sample(1.0, 1, 1, 3.0)])
        header, row = path.read_text().strip().splitlines()
        assert header == "sample,clustering,triangles,diameter,lambda_max"
        assert row == "g,1,1,1,3"

    def test_missing_columns_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("sample,clustering\nx,0.5\n")
        with pytest.raises(ValueError, match="lacks columns"):
            read_metrics_csv(str(path))

    def test_empty_csv_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("sample,clustering,triangles,diameter,lambda_max\n")
        with pytest.raises(ValueError, match="no rows"):
            read_metrics_csv(str(path))


class TestThinningCsv:
    def test_columns_and_rows(self, tmp_path):
        results = [
            ThinningResult(pair=(0, 5), k=4, trace=[(1, 3.0), (2, 1.0), (4, -2.5)]),
            ThinningResult(pair=(1, 2), k=2, trace=[(1, 0.5), (2, 1.25)], exhausted=True),
        ]
        path = tmp_path / "thinning.csv"
        write_thinning_csv(str(path), results)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "pair_u,pair_v,k,delta_bic_at_k,exhausted_flag"
        assert lines[1] == "0,5,4,-2.5,0"
        assert lines[2] == "1,2,2,1.25,1"


class TestCompareReport:
    def test_identical_tables(self):
        rows = [sample(0.5, 10, 3, 6.0), sample(0.4, 8, 3, 5.5)]
        table = metric_table(rows)
        report = compare_report(table, dict(table))
        assert report["all_similar"]
        for entry in report["metrics"].values():
            assert entry["ks_distance"] == 0.0
        assert any("clustering" in line for line in report["verdicts"])

    def test_disjoint_tables_differ(self):
        a = metric_table([sample(0.1, 1, 2, 3.0)] * 5)
        b = metric_table([sample(0.9, 50, 7, 9.0)] * 5)
        report = compare_report(a, b, threshold=0.1)
        assert not report["all_similar"]
        assert report["metrics"]["triangles"]["ks_distance"] == 1.0

    def test_constant_metric_variance_ratio(self):
        a = metric_table([sample(0.5, 3, 2, 4.0)] * 4)
        report = compare_report(a, dict(a))
        assert report["metrics"]["diameter"]["variance_ratio"] == 1.0

    def test_mismatched_metric_sets(self):
        a = metric_table([sample(0.5, 3, 2, 4.0)])
        b = dict(a)
        del b["diameter"]
        with pytest.raises(ValueError):
            compare_report(a, b)


def test_write_json_is_deterministic(tmp_path):
    payload = {"b": 2, "a": [1, 2], "nested": {"z": 1, "y": 2}}
    p1, p2 = tmp_path / "one.json", tmp_path / "two.json"
    write_json(str(p1), payload)
    write_json(str(p2), dict(reversed(list(payload.items()))))
    assert p1.read_bytes() == p2.read_bytes()
    assert json.loads(p1.read_text())["nested"] == {"z": 1, "y": 2}
