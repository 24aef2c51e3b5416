"""Simple undirected graphs with degree and joint-degree bookkeeping.

The graph representation is tuned for the edge-swap chain: adjacency is a
list of neighbor sets (O(1) simplicity checks) and edges are additionally
kept in an indexable array with swap-delete (O(1) uniform edge draws).
Vertex degrees are computed once at construction and cached; the swap
operation never changes any vertex degree, so the cache stays valid for
the lifetime of a chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

__all__ = [
    "Graph",
    "DegreeHistogram",
    "JointDegreeMatrix",
    "GraphParseError",
    "ValidationReport",
    "load_edge_list",
    "loads_edge_list",
    "save_edge_list",
    "degree_histogram",
    "joint_degree_matrix",
    "validate",
]


class GraphParseError(ValueError):
    """Raised for malformed or empty edge-list input."""


def _canon(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected graph over vertices 0..n-1.

    Invariants (checked by :func:`validate`):
      * symmetry: v in adjacency[u] iff u in adjacency[v]
      * simplicity: no self-loops, sets forbid parallel edges
      * edge_count == sum(len(adjacency[u])) / 2

    ``degrees`` holds construction-time degrees. :meth:`add_edge` and
    :meth:`remove_edge` intentionally do not touch it: they exist so the
    swap chain can replace edge pairs that preserve every degree.
    """

    __slots__ = ("adjacency", "degrees", "original_ids", "_edges", "_edge_pos")

    def __init__(
        self,
        vertex_count: int,
        edges: Iterable[tuple[int, int]] = (),
        original_ids: list[int] | None = None,
    ):
        if vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        self.adjacency: list[set[int]] = [set() for _ in range(vertex_count)]
        self._edges: list[tuple[int, int]] = []
        self._edge_pos: dict[tuple[int, int], int] = {}
        # original_ids[i] is the input-file id of compacted vertex i
        self.original_ids = original_ids
        for u, v in edges:
            self.add_edge(u, v)
        self.degrees: list[int] = [len(s) for s in self.adjacency]

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def degree(self, u: int) -> int:
        return self.degrees[u]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def edge_at(self, index: int) -> tuple[int, int]:
        """Edge stored at ``index``; with a uniform index this is a uniform edge draw."""
        return self._edges[index]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Iterate all edges as canonical (u, v) with u < v, in storage order."""
        return iter(self._edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self._edges)

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self._edges)

    def add_edge(self, u: int, v: int) -> None:
        """Insert edge {u, v}. Degree cache is left untouched (see class docs)."""
        if u == v:
            raise ValueError(f"self-loop ({u},{u}) not allowed in a simple graph")
        if not (0 <= u < len(self.adjacency) and 0 <= v < len(self.adjacency)):
            raise ValueError(f"edge ({u},{v}) out of range for n={len(self.adjacency)}")
        key = _canon(u, v)
        if key in self._edge_pos:
            raise ValueError(f"parallel edge ({u},{v}) not allowed in a simple graph")
        self.adjacency[u].add(v)
        self.adjacency[v].add(u)
        self._edge_pos[key] = len(self._edges)
        self._edges.append(key)

    def remove_edge(self, u: int, v: int) -> None:
        """Delete edge {u, v} in O(1) via swap-delete in the edge array."""
        key = _canon(u, v)
        pos = self._edge_pos.pop(key, None)
        if pos is None:
            raise ValueError(f"edge ({u},{v}) not present")
        self.adjacency[u].discard(v)
        self.adjacency[v].discard(u)
        last = self._edges.pop()
        if last != key:
            self._edges[pos] = last
            self._edge_pos[last] = pos

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g.adjacency = [set(s) for s in self.adjacency]
        g.degrees = list(self.degrees)
        g.original_ids = list(self.original_ids) if self.original_ids else None
        g._edges = list(self._edges)
        g._edge_pos = dict(self._edge_pos)
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.vertex_count == other.vertex_count
            and self.edge_set() == other.edge_set()
        )

    def __hash__(self):  # mutable container semantics
        raise TypeError("Graph is not hashable")

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, m={self.edge_count})"


@dataclass(slots=True)
class DegreeHistogram:
    """Counts of vertices per degree: counts[d] is the number of degree-d vertices."""

    counts: dict[int, int]

    def vertex_total(self) -> int:
        return sum(self.counts.values())

    def degree_mass(self) -> int:
        """Sum of d * counts[d]; equals 2m for a consistent graph."""
        return sum(d * f for d, f in self.counts.items())

    def get(self, degree: int) -> int:
        return self.counts.get(degree, 0)


@dataclass(slots=True)
class JointDegreeMatrix:
    """Edge counts per unordered degree pair, keyed canonically with i <= j."""

    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def get(self, i: int, j: int) -> int:
        return self.entries.get(_canon(i, j), 0)

    def edge_total(self) -> int:
        return sum(self.entries.values())

    def degree_mass(self, d: int) -> int:
        """Sum over j != d of J(d, j) plus 2 * J(d, d).

        For a consistent graph this equals d * f(d): each endpoint of
        degree d contributes one edge slot, and (d, d) edges carry two.
        """
        total = 0
        for (i, j), count in self.entries.items():
            if i == d and j == d:
                total += 2 * count
            elif i == d or j == d:
                total += count
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JointDegreeMatrix):
            return NotImplemented
        return {k: v for k, v in self.entries.items() if v} == {
            k: v for k, v in other.entries.items() if v
        }


def degree_histogram(graph: Graph) -> DegreeHistogram:
    counts: dict[int, int] = {}
    for d in graph.degrees:
        counts[d] = counts.get(d, 0) + 1
    return DegreeHistogram(counts)


def joint_degree_matrix(graph: Graph) -> JointDegreeMatrix:
    deg = graph.degrees
    entries: dict[tuple[int, int], int] = {}
    for u, v in graph.edges():
        key = _canon(deg[u], deg[v])
        entries[key] = entries.get(key, 0) + 1
    return JointDegreeMatrix(entries)


def loads_edge_list(text: str) -> Graph:
    """Parse an edge list from a string; see :func:`load_edge_list`."""
    return _parse_edge_lines(text.splitlines())


def load_edge_list(source: str | IO[str]) -> Graph:
    """Load a simple undirected graph from a whitespace-separated edge list.

    Accepts a path or an open text stream. Lines starting with '#' are
    comments; LF and CRLF both work. Each edge line holds two integer
    vertex ids. Input is symmetrized: duplicate lines and reversed
    duplicates collapse to one undirected edge, and self-loop lines are
    dropped. Vertex ids are compacted to 0..n-1 in ascending original-id
    order; the mapping is kept on ``Graph.original_ids``.

    Raises GraphParseError for malformed lines (with the line number) and
    for input containing no edges.
    """
    if hasattr(source, "read"):
        return _parse_edge_lines(source)  # type: ignore[arg-type]
    with open(source, "r", encoding="utf-8") as handle:
        return _parse_edge_lines(handle)


def _parse_edge_lines(lines: Iterable[str]) -> Graph:
    raw_edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(
                f"line {lineno}: expected two vertex ids, got {len(parts)} fields"
            )
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"line {lineno}: non-integer vertex id") from None
        if u == v:
            continue  # self-loops are dropped on ingest
        raw_edges.add(_canon(u, v))
    if not raw_edges:
        raise GraphParseError("input contains no edges")
    ids = sorted({u for e in raw_edges for u in e})
    compact = {orig: i for i, orig in enumerate(ids)}
    edges = [(compact[u], compact[v]) for u, v in sorted(raw_edges)]
    return Graph(len(ids), edges, original_ids=ids)


def serialize_edge_list(graph: Graph) -> str:
    """Canonical edge-list text: one 'u v' line per edge, u < v, sorted."""
    return "".join(f"{u} {v}\n" for u, v in graph.sorted_edges())


def save_edge_list(graph: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(serialize_edge_list(graph))


@dataclass(slots=True)
class ValidationReport:
    """Outcome of consistency checks; failures are data, not exceptions."""

    passed: bool
    violations: list[str]


def validate(
    graph: Graph,
    histogram: DegreeHistogram,
    jdm: JointDegreeMatrix,
) -> ValidationReport:
    """Check every structural identity tying the graph, f(d) and J together.

    Violated identities are listed by name; the report passes only when
    all hold exactly (integer arithmetic, no tolerance).
    """
    violations: list[str] = []
    n = graph.vertex_count
    m = graph.edge_count

    for u, neighbors in enumerate(graph.adjacency):
        if u in neighbors:
            violations.append(f"self-loop at vertex {u}")
        for v in neighbors:
            if u not in graph.adjacency[v]:
                violations.append(f"asymmetric adjacency ({u},{v})")

    degree_sum = sum(len(s) for s in graph.adjacency)
    if degree_sum != 2 * m:
        violations.append("edge-count identity: sum of degrees != 2m")
    if set(graph._edges) != {
        _canon(u, v) for u, adj in enumerate(graph.adjacency) for v in adj
    }:
        violations.append("edge array out of sync with adjacency")

    if histogram.vertex_total() != n:
        violations.append("degree histogram total != n")
    if histogram.degree_mass() != 2 * m:
        violations.append("degree histogram handshake: sum d*f(d) != 2m")
    if histogram != degree_histogram(graph):
        violations.append("degree histogram does not match graph")

    if jdm.edge_total() != m:
        violations.append("edge-sum identity: sum of J entries != m")
    for d, f_d in histogram.counts.items():
        if jdm.degree_mass(d) != d * f_d:
            violations.append(f"degree-mass identity violated for degree {d}")
    if jdm != joint_degree_matrix(graph):
        violations.append("joint degree matrix does not match graph")

    return ValidationReport(passed=not violations, violations=violations)
