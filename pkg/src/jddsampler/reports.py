"""Delimited and JSON report emission.

All emitted JSON is indented with sorted keys so reruns with identical
inputs produce identical bytes (manifests additionally record wall time,
which is excluded from any byte-for-byte reproducibility claim).
"""

from __future__ import annotations

import csv
import json
from typing import Iterable, Sequence

import numpy as np

from .metrics import METRIC_NAMES, MetricSample, ks_distance
from .method_b import OneLongRunResult, ThinningResult

__all__ = [
    "summarize",
    "metric_table",
    "write_metrics_csv",
    "read_metrics_csv",
    "metrics_summary",
    "write_thinning_csv",
    "thinning_summary",
    "compare_report",
    "write_json",
]

QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)


def summarize(values: Sequence[float], bins: int = 30) -> dict:
    """Mean, variance, quantiles and a fixed-bin histogram of one metric."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("cannot summarize an empty sample")
    counts, edges = np.histogram(arr, bins=bins)
    return {
        "count": int(arr.size),
        "mean": float(arr.mean()),
        "variance": float(arr.var(ddof=1)) if arr.size > 1 else 0.0,
        "min": float(arr.min()),
        "max": float(arr.max()),
        "quantiles": {f"p{int(q * 100):02d}": float(np.quantile(arr, q)) for q in QUANTILES},
        "histogram": {
            "bin_edges": [float(e) for e in edges],
            "counts": [int(c) for c in counts],
        },
    }


def metric_table(samples: Iterable[MetricSample]) -> dict[str, list[float]]:
    """Column-major view of metric samples keyed by metric name."""
    table: dict[str, list[float]] = {name: [] for name in METRIC_NAMES}
    for sample in samples:
        for name, value in zip(METRIC_NAMES, sample.as_row()):
            table[name].append(float(value))
    return table


def write_metrics_csv(path: str, labels: Sequence[str], samples: Sequence[MetricSample]) -> None:
    """One row per graph sample: its label plus one column per metric."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(("sample",) + METRIC_NAMES)
        for label, sample in zip(labels, samples):
            clustering, tri, diam, lam = sample.as_row()
            writer.writerow([label, f"{clustering:.10g}", tri, diam, f"{lam:.10g}"])


def read_metrics_csv(path: str) -> dict[str, list[float]]:
    """Read a metrics CSV back into columns; raises on missing metric columns."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        missing = [name for name in METRIC_NAMES if name not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"metric CSV {path} lacks columns: {', '.join(missing)}")
        table: dict[str, list[float]] = {name: [] for name in METRIC_NAMES}
        for row in reader:
            for name in METRIC_NAMES:
                table[name].append(float(row[name]))
    if not table[METRIC_NAMES[0]]:
        raise ValueError(f"metric CSV {path} contains no rows")
    return table


def metrics_summary(table: dict[str, list[float]], bins: int, warnings: int = 0) -> dict:
    return {
        "metrics": {name: summarize(values, bins) for name, values in table.items()},
        "warnings": warnings,
    }


def write_thinning_csv(path: str, results: Sequence[ThinningResult]) -> None:
    """Per-pair diagnostic rows: pair, accepted k, its score, exhaustion flag."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["pair_u", "pair_v", "k", "delta_bic_at_k", "exhausted_flag"])
        for result in results:
            writer.writerow(
                [
                    result.pair[0],
                    result.pair[1],
                    result.k,
                    f"{result.trace[-1][1]:.10g}",
                    int(result.exhausted),
                ]
            )


def thinning_summary(result: OneLongRunResult, edge_count: int, bins: int = 30) -> dict:
    """k* and the distribution of normalized per-pair factors k / m."""
    normalized = [r.k / edge_count for r in result.thinning]
    return {
        "edge_count": edge_count,
        "steps": result.steps,
        "snapshot_stride": result.snapshot_stride,
        "tracked_pairs": len(result.thinning),
        "exhausted_pairs": sum(1 for r in result.thinning if r.exhausted),
        "k_star": result.k_star,
        "k_star_per_edge": result.k_star / edge_count,
        "k_effective": result.k_effective,
        "sample_count": len(result.samples),
        "k_per_edge": summarize(normalized, bins),
    }


def _variance_ratio(a: np.ndarray, b: np.ndarray) -> float | None:
    va = float(a.var(ddof=1)) if a.size > 1 else 0.0
    vb = float(b.var(ddof=1)) if b.size > 1 else 0.0
    if va == 0.0 and vb == 0.0:
        return 1.0
    if vb == 0.0:
        return None
    return va / vb


def compare_report(
    table_a: dict[str, list[float]],
    table_b: dict[str, list[float]],
    threshold: float = 0.1,
) -> dict:
    """Per-metric KS distance and variance ratio with plain-text verdicts."""
    if set(table_a) != set(table_b):
        raise ValueError("metric sets differ between the two inputs")
    per_metric = {}
    verdicts = []
    for name in METRIC_NAMES:
        a = np.asarray(table_a[name], dtype=np.float64)
        b = np.asarray(table_b[name], dtype=np.float64)
        ks = ks_distance(a, b)
        ratio = _variance_ratio(a, b)
        similar = ks < threshold
        per_metric[name] = {
            "ks_distance": ks,
            "variance_ratio": ratio,
            "similar": similar,
        }
        verdicts.append(
            f"{name}: distributions {'similar' if similar else 'DIFFER'} "
            f"(KS={ks:.4f}, threshold={threshold})"
        )
    return {
        "threshold": threshold,
        "metrics": per_metric,
        "all_similar": all(entry["similar"] for entry in per_metric.values()),
        "verdicts": verdicts,
    }


def write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
