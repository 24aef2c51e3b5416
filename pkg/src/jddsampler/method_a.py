"""Analytic run length and the "multiple short runs" ensemble generator.

Each labeled vertex pair is approximated as a two-state chain (edge
absent / edge present) whose transition rates are estimated from the
joint degree counts. The chain's non-unit eigenvalue 1 - (alpha + beta)
decays geometrically, so running ln(1/eps)/(alpha + beta) steps leaves
the pair within eps of its stationary distribution. Because
alpha + beta >= 1/m for every pair, m * ln(1/eps) steps is a worst-case
run length valid for the whole graph, and that global figure is what the
ensemble generator uses.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np

from .chain import ChainConfig, run
from .graph import DegreeHistogram, Graph, JointDegreeMatrix

__all__ = [
    "TwoStateEdgeModel",
    "DegenerateModelError",
    "NoSuchDegreeClassError",
    "edge_model",
    "stationary_distribution",
    "run_length",
    "per_edge_run_length",
    "generate_ensemble",
]

# Relative guard applied before ceil() so float noise in values that are
# exactly integral in real arithmetic cannot bump N by one.
_CEIL_GUARD = 1e-12


class DegenerateModelError(ValueError):
    """alpha + beta = 0: the pair never changes state."""


class NoSuchDegreeClassError(ValueError):
    """A requested degree does not occur in the degree histogram."""


@dataclass(slots=True)
class TwoStateEdgeModel:
    """Two-state (absent/present) model for one degree pair.

    alpha is the per-step probability of an absent edge being swapped in,
    beta of a present edge being swapped out. alpha = 0 is legal (the
    joint degree matrix admits no such edge, so it can never appear) and
    is exposed via ``edge_can_occur``. beta >= 1/m always, so
    alpha + beta stays positive; values above 1 are rejected because the
    transition matrix would not be stochastic (the rate estimates break
    down on very small graphs).
    """

    alpha: float
    beta: float
    degrees: tuple[int, int]

    def __post_init__(self):
        if self.alpha < 0.0 or self.beta <= 0.0:
            raise ValueError("need alpha >= 0 and beta > 0")
        if self.alpha + self.beta > 1.0 + 1e-12:
            raise ValueError(
                f"alpha + beta = {self.alpha + self.beta} > 1: "
                "two-state rate estimates are invalid for this graph"
            )

    @property
    def edge_can_occur(self) -> bool:
        return self.alpha > 0.0

    def transition_matrix(self) -> np.ndarray:
        """Row-stochastic matrix over states (0 = absent, 1 = present)."""
        return np.array(
            [[1.0 - self.alpha, self.alpha], [self.beta, 1.0 - self.beta]]
        )


def edge_model(
    i: int,
    j: int,
    jdm: JointDegreeMatrix,
    histogram: DegreeHistogram,
    edge_count: int,
) -> TwoStateEdgeModel:
    """Estimate the two-state rates for a pair of vertices of degrees i and j.

    alpha = J(i,j) / (2 m^2) * (i / f(j) + j / f(i)): the first edge must
    hit the pair's endpoint (probability d/2m) and the second edge must be
    one of the roughly J(i,j)/f neighbors that complete the swap, in
    either role order.

    beta = 1/m + (f(i) i + f(j) j - i - j) / (2 m^2): drawing the edge
    itself as the first edge always removes it, and drawing any other
    same-degree endpoint can remove it as the second edge.
    """
    if edge_count <= 0:
        raise ValueError("edge_count must be positive")
    f_i = histogram.get(i)
    f_j = histogram.get(j)
    if f_i == 0 or f_j == 0:
        raise NoSuchDegreeClassError(f"no vertices of degree {i if f_i == 0 else j}")
    m = float(edge_count)
    j_ij = jdm.get(i, j)
    alpha = j_ij / (2.0 * m * m) * (i / f_j + j / f_i)
    beta = 1.0 / m + (f_i * i + f_j * j - i - j) / (2.0 * m * m)
    return TwoStateEdgeModel(alpha=alpha, beta=beta, degrees=(i, j))


def stationary_distribution(model: TwoStateEdgeModel) -> tuple[float, float]:
    """Fixed point (p_no_edge, p_edge) of the two-state transition matrix."""
    s = model.alpha + model.beta
    if s <= 0.0:
        raise DegenerateModelError("alpha + beta = 0 has no unique fixed point")
    return (model.beta / s, model.alpha / s)


def _guarded_ceil(x: float) -> int:
    return max(0, math.ceil(x - _CEIL_GUARD * max(1.0, abs(x))))


def run_length(epsilon: float, edge_count: int) -> int:
    """Steps needed so every pair is within epsilon of stationarity.

    Uses the worst case over pairs, alpha + beta >= 1/m, giving
    N = ceil(m * ln(1/epsilon)).
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if edge_count <= 0:
        raise ValueError("edge_count must be positive")
    return _guarded_ceil(edge_count * math.log(1.0 / epsilon))


def per_edge_run_length(model: TwoStateEdgeModel, epsilon: float) -> int:
    """Pair-specific run length ceil(ln(1/epsilon) / (alpha + beta)).

    Never exceeds the global :func:`run_length` (up to rounding) since
    alpha + beta >= 1/m.
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    s = model.alpha + model.beta
    if s <= 0.0:
        raise DegenerateModelError("alpha + beta = 0 never mixes")
    return _guarded_ceil(math.log(1.0 / epsilon) / s)


_worker_graph: Graph | None = None


def _init_worker(vertex_count: int, edges: list[tuple[int, int]]) -> None:
    global _worker_graph
    _worker_graph = Graph(vertex_count, edges)


def _run_worker(args: tuple[int, int]) -> list[tuple[int, int]]:
    seed, budget = args
    result = run(_worker_graph, ChainConfig(seed=seed, step_budget=budget))
    return result.final_graph.sorted_edges()


def default_worker_count() -> int:
    """Worker count from the JDDSAMPLER_WORKERS environment variable (default 1)."""
    raw = os.environ.get("JDDSAMPLER_WORKERS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def generate_ensemble(
    initial: Graph,
    samples: int,
    epsilon: float,
    seed_base: int,
    workers: int = 1,
) -> list[Graph]:
    """Generate ``samples`` graphs via independent chains of run_length steps.

    Every chain starts from the same initial graph with seed
    seed_base + chain_index, so all samples share the initial joint
    degree matrix exactly. Results are ordered by chain index regardless
    of worker count.
    """
    if samples < 0:
        raise ValueError("samples must be >= 0")
    if samples == 0:
        return []
    budget = run_length(epsilon, initial.edge_count)
    seeds = [seed_base + index for index in range(samples)]
    if workers <= 1 or samples == 1:
        out = []
        for seed in seeds:
            result = run(initial, ChainConfig(seed=seed, step_budget=budget))
            out.append(result.final_graph)
        return out
    n = initial.vertex_count
    edges = list(initial.edges())
    with Pool(
        processes=min(workers, samples),
        initializer=_init_worker,
        initargs=(n, edges),
    ) as pool:
        edge_lists = pool.map(_run_worker, [(seed, budget) for seed in seeds])
    return [Graph(n, edge_list) for edge_list in edge_lists]
