"""Graph metrics used to compare ensembles.

Four per-graph metrics (global clustering, triangle count, diameter of
the largest component, largest Laplacian eigenvalue) plus a two-sample
Kolmogorov-Smirnov distance for comparing metric distributions across
ensembles. The eigenvalue uses matrix-free power iteration so graphs
with hundreds of thousands of edges stay tractable; the Laplacian is
positive semidefinite, so its dominant eigenvalue is the largest one.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .graph import Graph

__all__ = [
    "MetricSample",
    "LaplacianEigenResult",
    "triangles",
    "wedges",
    "global_clustering",
    "diameter",
    "lambda_max",
    "ks_distance",
    "evaluate_graph",
    "METRIC_NAMES",
]

METRIC_NAMES = ("clustering", "triangles", "diameter", "lambda_max")

# Fixed start-vector seed keeps lambda_max deterministic and never lands
# in the Laplacian kernel (the all-ones direction would).
_POWER_SEED = 0x1A91ACE


@dataclass(slots=True)
class MetricSample:
    """One graph's metric values, in report column order."""

    clustering: float
    triangles: int
    diameter: int
    lambda_max: float

    def as_row(self) -> tuple[float, int, int, float]:
        return (self.clustering, self.triangles, self.diameter, self.lambda_max)


@dataclass(slots=True)
class LaplacianEigenResult:
    """Largest Laplacian eigenvalue with the achieved residual.

    ``residual`` is the 2-norm of L x - value * x for the final unit
    iterate; ``converged`` is False when the iteration cap was hit before
    the tolerance, in which case ``value`` is still the best estimate.
    """

    value: float
    residual: float
    iterations: int
    converged: bool


def triangles(graph: Graph) -> int:
    """Number of vertex triples with all three edges present.

    Each edge contributes the size of its endpoints' common neighborhood;
    every triangle is seen once per edge, hence the division by three.
    """
    adjacency = graph.adjacency
    hits = 0
    for u, v in graph.edges():
        a, b = adjacency[u], adjacency[v]
        if len(b) < len(a):
            a, b = b, a
        for w in a:
            if w in b:
                hits += 1
    return hits // 3


def wedges(graph: Graph) -> int:
    """Number of paths of length two: sum over vertices of C(d, 2).

    Swaps preserve every degree, so this count is invariant along a chain
    and clustering varies only through the triangle count.
    """
    return sum(d * (d - 1) // 2 for d in graph.degrees)


def global_clustering(graph: Graph) -> float:
    """Transitivity 3 * triangles / wedges; 0 for wedge-free graphs."""
    w = wedges(graph)
    if w == 0:
        return 0.0
    return 3.0 * triangles(graph) / w


def _components(graph: Graph) -> list[list[int]]:
    n = graph.vertex_count
    seen = [False] * n
    components: list[list[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        queue = deque([start])
        seen[start] = True
        members = [start]
        while queue:
            u = queue.popleft()
            for v in graph.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    members.append(v)
                    queue.append(v)
        components.append(members)
    return components


def _adjacency_csr(graph: Graph) -> csr_matrix:
    m = graph.edge_count
    rows = np.empty(2 * m, dtype=np.int64)
    cols = np.empty(2 * m, dtype=np.int64)
    for index, (u, v) in enumerate(graph.edges()):
        rows[2 * index] = u
        cols[2 * index] = v
        rows[2 * index + 1] = v
        cols[2 * index + 1] = u
    data = np.ones(2 * m, dtype=np.float64)
    n = graph.vertex_count
    return csr_matrix((data, (rows, cols)), shape=(n, n))


def diameter(graph: Graph) -> int:
    """Longest shortest path within the largest connected component.

    The largest component is chosen by vertex count, ties broken by the
    smallest contained vertex id (components are discovered in ascending
    vertex order, so the first largest wins). Distances come from BFS
    out of every component vertex.
    """
    if graph.edge_count == 0:
        raise ValueError("diameter is undefined for an edgeless graph")
    components = _components(graph)
    component = max(components, key=len)
    members = np.array(sorted(component), dtype=np.int64)
    sub = _adjacency_csr(graph)[members][:, members]
    distances = shortest_path(sub, method="D", directed=False, unweighted=True)
    return int(distances.max())


def lambda_max(
    graph: Graph,
    tol: float = 1e-8,
    max_iterations: int = 10_000,
) -> LaplacianEigenResult:
    """Largest eigenvalue of the Laplacian L = D - A by power iteration.

    L is PSD, so the dominant eigenpair is the largest one and plain
    power iteration with a random unit start converges to it. Iteration
    stops when the residual ||L x - rho x|| falls below tol * rho.
    Hitting the iteration cap flags the result instead of raising; the
    Rayleigh estimate is still reported with its achieved residual.
    """
    n = graph.vertex_count
    if n < 1:
        raise ValueError("graph must have at least one vertex")
    if graph.edge_count == 0:
        return LaplacianEigenResult(0.0, 0.0, 0, True)

    adjacency = _adjacency_csr(graph)
    degrees = np.array(graph.degrees, dtype=np.float64)
    rng = np.random.default_rng(_POWER_SEED)
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)

    value = 0.0
    residual = np.inf
    for iteration in range(1, max_iterations + 1):
        y = degrees * x - adjacency.dot(x)
        value = float(x @ y)
        residual = float(np.linalg.norm(y - value * x))
        if residual <= tol * max(abs(value), 1e-30):
            return LaplacianEigenResult(value, residual, iteration, True)
        norm = np.linalg.norm(y)
        if norm == 0.0:
            # start vector fell in the kernel; nudge deterministically
            x = rng.standard_normal(n)
            x /= np.linalg.norm(x)
            continue
        x = y / norm
    return LaplacianEigenResult(value, residual, max_iterations, False)


def ks_distance(samples_a: Sequence[float], samples_b: Sequence[float]) -> float:
    """Two-sample Kolmogorov-Smirnov statistic: sup |F_a - F_b| in [0, 1]."""
    a = np.sort(np.asarray(samples_a, dtype=np.float64))
    b = np.sort(np.asarray(samples_b, dtype=np.float64))
    if len(a) == 0 or len(b) == 0:
        raise ValueError("both samples must be nonempty")
    grid = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, grid, side="right") / len(a)
    cdf_b = np.searchsorted(b, grid, side="right") / len(b)
    return float(np.abs(cdf_a - cdf_b).max())


def evaluate_graph(graph: Graph) -> MetricSample:
    """All four metrics for one graph."""
    return MetricSample(
        clustering=global_clustering(graph),
        triangles=triangles(graph),
        diameter=diameter(graph),
        lambda_max=lambda_max(graph).value,
    )
