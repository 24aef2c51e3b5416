"""Command-line surface for reproducible sampling experiments.

Four subcommands: ``generate`` (analytic-run-length ensembles),
``diagnose`` (one long run with the thinning diagnostic), ``metrics``
(per-sample metric table over a directory of edge lists) and ``compare``
(KS/variance comparison of two ensembles). Every command writes a
manifest holding the fully resolved configuration; feeding a manifest
back through --config reproduces the run (sample and report files are
byte-identical; only the manifest's recorded wall time differs).

Exit codes: 0 success, 1 usage error, 2 I/O or input-format error,
3 diagnostic failure.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import asdict, dataclass

from . import __version__
from .graph import Graph, GraphParseError, load_edge_list, save_edge_list
from .method_a import default_worker_count, generate_ensemble, run_length
from .method_b import (
    DiagnosticError,
    discover_realized_pairs,
    one_long_run,
    sample_tracked_edges,
)
from .metrics import evaluate_graph
from .reports import (
    compare_report,
    metric_table,
    metrics_summary,
    read_metrics_csv,
    thinning_summary,
    write_json,
    write_metrics_csv,
    write_thinning_csv,
)

__all__ = ["ExperimentConfig", "main", "entrypoint"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_DIAGNOSTIC = 3


@dataclass(slots=True)
class ExperimentConfig:
    """Fully resolved parameters of one command invocation.

    Defaults mirror the experimental setup this tool reproduces: epsilon
    4.5e-5 (ten edge counts of mixing), a tracked fraction of 0.1, and a
    long run of 128 edge counts that the user raises for large graphs.
    """

    mode: str
    input_path: str | None = None
    epsilon: float = 4.5e-5
    samples: int = 100
    steps_per_edge: int = 128
    tracked_fraction: float = 0.1
    seed_base: int = 0
    output_dir: str | None = None
    output_path: str | None = None
    dir_a: str | None = None
    dir_b: str | None = None
    histogram_bins: int = 30
    workers: int = 1
    stride_factor: int = 1
    min_transitions: int = 64
    ks_threshold: float = 0.1
    make_plots: bool = True

    def validate(self) -> None:
        if self.mode in ("generate", "diagnose", "metrics") and not self.input_path:
            raise ValueError(f"{self.mode} requires --input" if self.mode != "metrics" else "metrics requires --in")
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError("epsilon must lie in (0, 1)")
        if not (0.0 < self.tracked_fraction <= 1.0):
            raise ValueError("fraction must lie in (0, 1]")
        if self.samples < 0:
            raise ValueError("samples must be >= 0")
        if self.steps_per_edge < 1:
            raise ValueError("steps-per-edge must be >= 1")
        if self.stride_factor < 1 or self.stride_factor & (self.stride_factor - 1):
            raise ValueError("stride-factor must be a power of 2")
        if self.histogram_bins < 1:
            raise ValueError("bins must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.mode in ("generate", "diagnose") and not self.output_dir:
            raise ValueError(f"{self.mode} requires --out")
        if self.mode in ("metrics", "compare") and not self.output_path:
            raise ValueError(f"{self.mode} requires --out")
        if self.mode == "compare" and not (self.dir_a and self.dir_b):
            raise ValueError("compare requires --a and --b")


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> _Parser:
    parser = _Parser(
        prog="jddsampler",
        description="Independent graph ensembles with a fixed joint degree distribution",
    )
    parser.add_argument("--version", action="version", version=f"jddsampler {__version__}")
    sub = parser.add_subparsers(dest="mode", required=True)

    def common(p: _Parser) -> None:
        p.add_argument("--config", help="JSON config file (or an emitted manifest); flags win")
        p.add_argument("--seed", type=int, default=None, help="base seed (default 0)")
        p.add_argument("--bins", type=int, default=None, help="histogram bin count (default 30)")
        p.add_argument("--no-plots", action="store_true", help="skip figure rendering")

    p_gen = sub.add_parser("generate", help="ensemble via M independent short chains")
    p_gen.add_argument("--input", help="edge-list file of the starting graph")
    p_gen.add_argument("--epsilon", type=float, default=None, help="stationarity tolerance (default 4.5e-5)")
    p_gen.add_argument("--samples", type=int, default=None, help="ensemble size M (default 100)")
    p_gen.add_argument("--out", help="output directory")
    p_gen.add_argument("--workers", type=int, default=None,
                       help="parallel chain workers (default: JDDSAMPLER_WORKERS or 1)")
    common(p_gen)

    p_diag = sub.add_parser("diagnose", help="one long run with the thinning diagnostic")
    p_diag.add_argument("--input", help="edge-list file of the starting graph")
    p_diag.add_argument("--steps-per-edge", type=int, default=None,
                        help="run length as a multiple of |E| (default 128)")
    p_diag.add_argument("--fraction", type=float, default=None,
                        help="fraction of |E| realized pairs to track (default 0.1)")
    p_diag.add_argument("--stride-factor", type=int, default=None,
                        help="snapshot stride as a power-of-2 multiple of |E| (default 1)")
    p_diag.add_argument("--min-transitions", type=int, default=None,
                        help="floor on thinned transitions before the search stops (default 64)")
    p_diag.add_argument("--out", help="output directory")
    common(p_diag)

    p_met = sub.add_parser("metrics", help="metric table over a directory of edge lists")
    p_met.add_argument("--in", dest="input", help="directory of edge-list sample files")
    p_met.add_argument("--out", help="output CSV path")
    common(p_met)

    p_cmp = sub.add_parser("compare", help="compare two ensembles metric by metric")
    p_cmp.add_argument("--a", dest="dir_a", help="sample directory or metrics CSV")
    p_cmp.add_argument("--b", dest="dir_b", help="sample directory or metrics CSV")
    p_cmp.add_argument("--threshold", type=float, default=None,
                       help="KS similarity threshold (default 0.1)")
    p_cmp.add_argument("--out", help="output JSON path")
    common(p_cmp)
    return parser


def _load_config_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    if isinstance(data, dict) and isinstance(data.get("config"), dict):
        return data["config"]  # accept emitted manifests directly
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Merge flags over config-file values over defaults; flags win."""
    file_values = _load_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(flag_value, key, fallback):
        if flag_value is not None:
            return flag_value
        if key in file_values and file_values[key] is not None:
            return file_values[key]
        return fallback

    mode = args.mode
    config = ExperimentConfig(
        mode=mode,
        input_path=pick(getattr(args, "input", None), "input_path", None),
        epsilon=float(pick(getattr(args, "epsilon", None), "epsilon", 4.5e-5)),
        samples=int(pick(getattr(args, "samples", None), "samples", 100)),
        steps_per_edge=int(pick(getattr(args, "steps_per_edge", None), "steps_per_edge", 128)),
        tracked_fraction=float(pick(getattr(args, "fraction", None), "tracked_fraction", 0.1)),
        seed_base=int(pick(getattr(args, "seed", None), "seed_base", 0)),
        output_dir=pick(getattr(args, "out", None) if mode in ("generate", "diagnose") else None,
                        "output_dir", None),
        output_path=pick(getattr(args, "out", None) if mode in ("metrics", "compare") else None,
                         "output_path", None),
        dir_a=pick(getattr(args, "dir_a", None), "dir_a", None),
        dir_b=pick(getattr(args, "dir_b", None), "dir_b", None),
        histogram_bins=int(pick(getattr(args, "bins", None), "histogram_bins", 30)),
        workers=int(pick(getattr(args, "workers", None), "workers", default_worker_count())),
        stride_factor=int(pick(getattr(args, "stride_factor", None), "stride_factor", 1)),
        min_transitions=int(pick(getattr(args, "min_transitions", None), "min_transitions", 64)),
        ks_threshold=float(pick(getattr(args, "threshold", None), "ks_threshold", 0.1)),
        make_plots=not args.no_plots if getattr(args, "no_plots", False) else bool(
            pick(None, "make_plots", True)
        ),
    )
    config.validate()
    return config


def _write_manifest(path: str, config: ExperimentConfig, derived: dict) -> None:
    write_json(path, {
        "tool": "jddsampler",
        "version": __version__,
        "config": asdict(config),
        "derived": derived,
    })


def _sample_name(index: int) -> str:
    return f"sample_{index:04d}.txt"


def cmd_generate(config: ExperimentConfig) -> int:
    graph = load_edge_list(config.input_path)
    m = graph.edge_count
    budget = run_length(config.epsilon, m)
    started = time.perf_counter()
    ensemble = generate_ensemble(
        graph,
        samples=config.samples,
        epsilon=config.epsilon,
        seed_base=config.seed_base,
        workers=config.workers,
    )
    wall = time.perf_counter() - started
    os.makedirs(config.output_dir, exist_ok=True)
    names = []
    for index, sample in enumerate(ensemble):
        name = _sample_name(index)
        save_edge_list(sample, os.path.join(config.output_dir, name))
        names.append(name)
    _write_manifest(os.path.join(config.output_dir, "manifest.json"), config, {
        "vertex_count": graph.vertex_count,
        "edge_count": m,
        "run_length": budget,
        "run_length_per_edge": budget / m,
        "seeds": [config.seed_base + i for i in range(config.samples)],
        "samples": names,
        "wall_time_s": wall,
    })
    print(f"generate: wrote {len(names)} samples (N={budget}, N/|E|={budget / m:.3f}) "
          f"to {config.output_dir}")
    return EXIT_OK


def cmd_diagnose(config: ExperimentConfig) -> int:
    graph = load_edge_list(config.input_path)
    m = graph.edge_count
    steps = config.steps_per_edge * m
    stride = config.stride_factor * m
    started = time.perf_counter()
    realized = discover_realized_pairs(graph, steps, config.seed_base)
    tracked = sample_tracked_edges(
        realized, config.tracked_fraction, random.Random(config.seed_base + 1), m
    )
    result = one_long_run(
        graph,
        steps=steps,
        tracked=tracked,
        seed=config.seed_base,
        snapshot_stride=stride,
        min_transitions=config.min_transitions,
    )
    wall = time.perf_counter() - started

    os.makedirs(config.output_dir, exist_ok=True)
    samples_dir = os.path.join(config.output_dir, "samples")
    os.makedirs(samples_dir, exist_ok=True)
    names = []
    for index, sample in enumerate(result.samples):
        name = _sample_name(index)
        save_edge_list(sample, os.path.join(samples_dir, name))
        names.append(name)

    write_thinning_csv(os.path.join(config.output_dir, "thinning.csv"), result.thinning)
    summary = thinning_summary(result, m, config.histogram_bins)
    summary["realized_pairs"] = len(realized)
    write_json(os.path.join(config.output_dir, "summary.json"), summary)
    if config.make_plots:
        from .plots import save_thinning_histogram

        save_thinning_histogram(
            [r.k / m for r in result.thinning],
            os.path.join(config.output_dir, "k_per_edge.png"),
            config.histogram_bins,
        )
    _write_manifest(os.path.join(config.output_dir, "manifest.json"), config, {
        "vertex_count": graph.vertex_count,
        "edge_count": m,
        "steps": steps,
        "snapshot_stride": stride,
        "tracked_pairs": len(tracked),
        "k_star": result.k_star,
        "k_effective": result.k_effective,
        "samples": names,
        "wall_time_s": wall,
    })
    print(f"diagnose: k*={result.k_star} (k*/|E|={result.k_star / m:.3f}), "
          f"{len(names)} thinned samples to {samples_dir}")
    return EXIT_OK


_REPORT_SUFFIXES = (".json", ".csv", ".png")


def _evaluate_directory(path: str) -> tuple[list[str], list, int]:
    """Metric rows for every readable edge-list file in a directory.

    The tool's own report formats living next to samples (manifests,
    CSVs, figures) are not treated as samples.
    """
    if not os.path.isdir(path):
        raise FileNotFoundError(f"{path} is not a directory")
    names = sorted(
        entry for entry in os.listdir(path)
        if os.path.isfile(os.path.join(path, entry))
        and not entry.startswith(".")
        and not entry.lower().endswith(_REPORT_SUFFIXES)
    )
    if not names:
        raise FileNotFoundError(f"directory {path} contains no sample files")
    labels, rows, warnings = [], [], 0
    for name in names:
        full = os.path.join(path, name)
        try:
            sample_graph = load_edge_list(full)
        except (GraphParseError, OSError) as exc:
            print(f"warning: skipping {full}: {exc}", file=sys.stderr)
            warnings += 1
            continue
        rows.append(evaluate_graph(sample_graph))
        labels.append(name)
    if not rows:
        raise FileNotFoundError(f"directory {path} contains no readable edge lists")
    return labels, rows, warnings


def cmd_metrics(config: ExperimentConfig) -> int:
    started = time.perf_counter()
    labels, rows, warnings = _evaluate_directory(config.input_path)
    wall = time.perf_counter() - started
    out = config.output_path
    out_dir = os.path.dirname(out) or "."
    os.makedirs(out_dir, exist_ok=True)
    write_metrics_csv(out, labels, rows)
    stem = os.path.splitext(os.path.basename(out))[0]
    table = metric_table(rows)
    write_json(os.path.join(out_dir, f"{stem}.summary.json"),
               metrics_summary(table, config.histogram_bins, warnings))
    if config.make_plots:
        from .plots import save_metric_histograms

        save_metric_histograms(table, out_dir, stem, config.histogram_bins)
    _write_manifest(os.path.join(out_dir, f"{stem}.manifest.json"), config, {
        "rows": len(rows),
        "warnings": warnings,
        "wall_time_s": wall,
    })
    print(f"metrics: {len(rows)} rows ({warnings} warnings) to {out}")
    return EXIT_OK


def _load_side(path: str) -> dict[str, list[float]]:
    if os.path.isfile(path):
        return read_metrics_csv(path)
    labels, rows, _ = _evaluate_directory(path)
    return metric_table(rows)


def cmd_compare(config: ExperimentConfig) -> int:
    started = time.perf_counter()
    table_a = _load_side(config.dir_a)
    table_b = _load_side(config.dir_b)
    try:
        report = compare_report(table_a, table_b, config.ks_threshold)
    except ValueError as exc:
        raise GraphParseError(str(exc)) from exc
    wall = time.perf_counter() - started
    out = config.output_path
    out_dir = os.path.dirname(out) or "."
    os.makedirs(out_dir, exist_ok=True)
    write_json(out, report)
    stem = os.path.splitext(os.path.basename(out))[0]
    if config.make_plots:
        from .plots import save_comparison_histograms

        save_comparison_histograms(table_a, table_b, ("a", "b"), out_dir, stem,
                                   config.histogram_bins)
    _write_manifest(os.path.join(out_dir, f"{stem}.manifest.json"), config, {
        "rows_a": len(table_a["clustering"]),
        "rows_b": len(table_b["clustering"]),
        "wall_time_s": wall,
    })
    for line in report["verdicts"]:
        print(line)
    return EXIT_OK


_COMMANDS = {
    "generate": cmd_generate,
    "diagnose": cmd_diagnose,
    "metrics": cmd_metrics,
    "compare": cmd_compare,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        config = resolve_config(args)
    except (ValueError, OSError) as exc:
        print(f"jddsampler: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[config.mode](config)
    except DiagnosticError as exc:
        print(f"jddsampler: diagnostic failure: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTIC
    except (GraphParseError, FileNotFoundError, OSError, ValueError) as exc:
        print(f"jddsampler: error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
