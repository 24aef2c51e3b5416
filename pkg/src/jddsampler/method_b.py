"""Data-driven "one long run" diagnostic.

A long chain is summarized, per tracked vertex pair, by the binary
occurrence series of that pair. Progressively thinning the series and
comparing an independence model against a first-order Markov model (via
a likelihood-ratio statistic penalized per parameter count) yields the
smallest power-of-2 thinning factor at which the retained values look
independent. The largest factor over tracked pairs, k*, is the
conservative global choice used to cut independent graph samples out of
the run.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .chain import EdgeSeries, EdgeSwapChain, StepTag
from .graph import Graph

__all__ = [
    "EdgeSeries",
    "ContingencyTable",
    "ThinningResult",
    "OneLongRunResult",
    "OverThinnedError",
    "DegenerateSeriesError",
    "DiagnosticError",
    "thin",
    "contingency",
    "delta_bic",
    "find_thinning_factor",
    "global_thinning",
    "sample_tracked_edges",
    "autocorrelation",
    "discover_realized_pairs",
    "one_long_run",
]

# Below this many transitions a 2x2 model comparison is noise, so the
# power-of-2 search refuses to advance and flags the result "exhausted".
DEFAULT_MIN_TRANSITIONS = 64


class OverThinnedError(ValueError):
    """Thinning left fewer than two values."""


class DegenerateSeriesError(ValueError):
    """A constant series has zero variance; normalized autocorrelation is undefined."""


class DiagnosticError(RuntimeError):
    """The long run cannot support the requested diagnostic."""


@dataclass(slots=True)
class ContingencyTable:
    """2x2 counts of observed state transitions; x[i][j] counts i -> j."""

    x: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.int64)
        if self.x.shape != (2, 2):
            raise ValueError("contingency table must be 2x2")
        if (self.x < 0).any():
            raise ValueError("counts must be nonnegative")

    @property
    def total(self) -> int:
        return int(self.x.sum())

    def row_totals(self) -> np.ndarray:
        return self.x.sum(axis=1)

    def col_totals(self) -> np.ndarray:
        return self.x.sum(axis=0)


@dataclass(slots=True)
class ThinningResult:
    """Accepted thinning factor for one pair plus the search trace.

    ``trace`` holds every (k, delta_bic) examined in increasing k. When
    ``exhausted`` is set, no examined k reached a negative score before
    the thinned series got too short, and ``k`` is the last feasible one.
    """

    pair: tuple[int, int]
    k: int
    trace: list[tuple[int, float]]
    exhausted: bool = False


def thin(series: EdgeSeries, k: int) -> EdgeSeries:
    """Keep every k-th value (indices 0, k, 2k, ...); k = 1 is the identity."""
    if k < 1:
        raise ValueError("thinning factor must be >= 1")
    values = series.values[::k]
    if len(values) < 2:
        raise OverThinnedError(
            f"thinning by {k} leaves {len(values)} values; need at least 2"
        )
    return EdgeSeries(pair=series.pair, values=values.copy())


def contingency(series: EdgeSeries) -> ContingencyTable:
    """Count the four transition types; total equals series length - 1."""
    if len(series.values) < 2:
        raise ValueError("need at least two values to count transitions")
    z = series.values.astype(np.int64)
    counts = np.bincount(2 * z[:-1] + z[1:], minlength=4).reshape(2, 2)
    return ContingencyTable(counts)


def delta_bic(table: ContingencyTable) -> float:
    """Independence-vs-Markov score; negative favors independence.

    The independence model predicts cell (i, j) as row_i * col_j / total;
    its lack of fit is the likelihood-ratio statistic
    G2 = -2 * sum x_ij * ln(predicted / observed), with empty cells
    contributing zero. The saturated (first-order Markov) model
    reproduces the table exactly, so comparing penalized scores leaves
    G2 minus ln(total), the penalty for the Markov model's one extra
    parameter. Natural logarithms throughout.

    A table with a zero row or column (state constant, or one state never
    recurring) has predicted == observed on every nonzero cell, so G2 is
    exactly 0 and the score is -ln(total): a never-changing pair carries
    no evidence of Markov dependence.
    """
    total = table.total
    if total < 1:
        raise ValueError("table must contain at least one transition")
    rows = table.row_totals()
    cols = table.col_totals()
    g2 = 0.0
    for i in range(2):
        for j in range(2):
            observed = table.x[i, j]
            if observed > 0:
                predicted = rows[i] * cols[j] / total
                g2 += -2.0 * observed * math.log(predicted / observed)
    return g2 - math.log(total)


def find_thinning_factor(
    series: EdgeSeries,
    min_transitions: int = DEFAULT_MIN_TRANSITIONS,
) -> ThinningResult:
    """Search k = 1, 2, 4, ... for the first negative delta_bic.

    The search stops at the first k whose thinned series scores negative
    (later k are never examined). It refuses to advance once the next
    thinned series would have fewer than ``min_transitions`` transitions;
    if no k scored negative by then, the last examined k is returned with
    the exhausted flag set. k = 1 is always examined, which requires a
    series of at least 4 values.
    """
    values = series.values
    length = len(values)
    if length < 4:
        raise ValueError(f"series of length {length} is too short to test k=1")
    trace: list[tuple[int, float]] = []
    k = 1
    z = values.astype(np.int64)
    while True:
        thinned = z[::k]
        counts = np.bincount(2 * thinned[:-1] + thinned[1:], minlength=4).reshape(2, 2)
        score = delta_bic(ContingencyTable(counts))
        trace.append((k, score))
        if score < 0.0:
            return ThinningResult(pair=series.pair, k=k, trace=trace)
        next_k = 2 * k
        next_length = (length + next_k - 1) // next_k
        if next_length - 1 < min_transitions:
            return ThinningResult(pair=series.pair, k=k, trace=trace, exhausted=True)
        k = next_k


def global_thinning(results: list[ThinningResult]) -> int:
    """Conservative global factor k*: the maximum accepted k over pairs."""
    if not results:
        raise ValueError("need at least one thinning result")
    return max(result.k for result in results)


def sample_tracked_edges(
    realized_pairs: set[tuple[int, int]],
    fraction: float,
    rng: random.Random,
    edge_count: int,
) -> set[tuple[int, int]]:
    """Uniform subset of the realized pairs, sized round(fraction * m).

    ``edge_count`` is the graph's m: the subset size is a fraction of the
    edge budget, not of the (potentially much larger) realized universe,
    matching how a fixed analysis budget is spent on a big graph.
    fraction = 1 means the whole realized universe. The size is capped at
    the number of realized pairs, and a fixed rng state gives a fixed
    subset.
    """
    if not realized_pairs:
        raise ValueError("realized pair set is empty")
    if not (0.0 < fraction <= 1.0):
        raise ValueError("fraction must lie in (0, 1]")
    universe = sorted(realized_pairs)
    if fraction == 1.0:
        return set(universe)
    count = min(max(1, round(fraction * edge_count)), len(universe))
    return set(rng.sample(universe, count))


def autocorrelation(series: EdgeSeries, max_lag: int) -> np.ndarray:
    """Normalized autocorrelation rho(l) for l = 0..max_lag; rho(0) = 1.

    rho(l) is the lag-l autocovariance (mean over the T - l available
    products of centered values) divided by the variance.
    """
    values = series.values.astype(np.float64)
    length = len(values)
    if not (0 < max_lag < length):
        raise ValueError("need 0 < max_lag < series length")
    centered = values - values.mean()
    c0 = float(np.mean(centered * centered))
    if c0 == 0.0:
        raise DegenerateSeriesError("constant series: autocorrelation undefined")
    rho = np.empty(max_lag + 1)
    rho[0] = 1.0
    for lag in range(1, max_lag + 1):
        rho[lag] = float(np.mean(centered[: length - lag] * centered[lag:])) / c0
    return rho


def discover_realized_pairs(
    graph: Graph,
    steps: int,
    seed: int,
) -> set[tuple[int, int]]:
    """All distinct pairs realized as edges in a ``steps``-long run.

    Includes the initial edges. Driving the same seed again replays the
    identical trajectory, so a discovery pass followed by a recording
    pass sees the same realized universe.
    """
    working = graph.copy()
    chain = EdgeSwapChain(working, seed)
    realized: set[tuple[int, int]] = set(working.edges())
    add = realized.add
    for _ in range(steps):
        outcome = chain.step()
        if outcome.tag is StepTag.ACCEPTED:
            for u, v in outcome.proposal.new_edges():
                add((u, v) if u < v else (v, u))
    return realized


@dataclass(slots=True)
class OneLongRunResult:
    """Diagnostics and thinned samples from one long chain."""

    thinning: list[ThinningResult]
    k_star: int
    k_effective: int
    samples: list[Graph]
    snapshot_stride: int
    steps: int
    seed: int


def one_long_run(
    initial: Graph,
    steps: int,
    tracked: set[tuple[int, int]],
    seed: int,
    snapshot_stride: int | None = None,
    min_transitions: int = DEFAULT_MIN_TRANSITIONS,
) -> OneLongRunResult:
    """Run one chain, diagnose per-pair thinning factors, cut samples.

    Graph snapshots are stored every ``snapshot_stride`` steps (default:
    one edge count, so snapshot cost scales with the run). After the run,
    each tracked pair's occurrence series (length steps + 1, initial
    state included) is searched for its thinning factor; k* is the
    maximum. Samples are the snapshots at multiples of k_effective, the
    smallest stride multiple >= k*, so extracted graphs are at least
    k*-separated and always align with stored snapshots. A run of
    k_effective * S steps therefore yields exactly S samples (the initial
    graph is never returned as a sample).
    """
    if not tracked:
        raise ValueError("tracked pair set is empty")
    if steps < 4:
        raise DiagnosticError("run too short for any thinning search")
    stride = snapshot_stride if snapshot_stride is not None else initial.edge_count
    if stride < 1:
        raise ValueError("snapshot_stride must be >= 1")

    working = initial.copy()
    chain = EdgeSwapChain(working, seed, tracked=tracked)
    snapshots: list[np.ndarray] = []
    full_chunks, remainder = divmod(steps, stride)
    for _ in range(full_chunks):
        chain.run_steps(stride)
        snapshots.append(np.array(working._edges, dtype=np.int64))
    if remainder:
        chain.run_steps(remainder)

    results = [
        find_thinning_factor(chain.series(pair), min_transitions)
        for pair in sorted(chain.tracked_pairs())
    ]
    k_star = global_thinning(results)
    k_effective = ((k_star + stride - 1) // stride) * stride

    sample_steps = range(k_effective, steps + 1, k_effective)
    if not sample_steps:
        raise DiagnosticError(
            f"{steps} steps cannot yield one sample at k*={k_star} "
            f"(aligned stride {k_effective}); increase the run length"
        )
    n = initial.vertex_count
    samples = []
    for t in sample_steps:
        snap = snapshots[t // stride - 1]
        samples.append(Graph(n, [(int(u), int(v)) for u, v in snap]))
    return OneLongRunResult(
        thinning=results,
        k_star=k_star,
        k_effective=k_effective,
        samples=samples,
        snapshot_stride=stride,
        steps=steps,
        seed=seed,
    )
