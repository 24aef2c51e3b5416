"""Joint-degree-preserving edge-swap Markov chain.

One step draws an edge (u1, v) uniformly, picks one endpoint u1 uniformly,
draws a second edge uniformly from all m edges, and requires one of its
endpoints to match u1's degree (uniform tie-break when both do). The
matched endpoint u2 and its partner w are rewired to (u1, w) and (u2, v).
Rejections leave the graph untouched but still consume a step: the second
edge is drawn from all m edges with rejection (not from a pre-filtered
pool), degenerate pairs (shared vertex / identical edges) are rejected
rather than resampled, and a swap that would break simplicity is
rejected. This lazy-chain accounting is what the analytic run-length
model counts as one iteration.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .graph import Graph

__all__ = [
    "StepTag",
    "SwapProposal",
    "StepOutcome",
    "ChainConfig",
    "EdgeSeries",
    "RunResult",
    "EdgeSwapChain",
    "ChainStateError",
    "propose",
    "apply_swap",
    "run",
]


class ChainStateError(RuntimeError):
    """A proposal references edges that are no longer in the graph."""


class StepTag(Enum):
    ACCEPTED = "accepted"
    REJECTED_NOT_SIMPLE = "rejected_not_simple"
    REJECTED_NO_DEGREE_MATCH = "rejected_no_degree_match"
    REJECTED_DEGENERATE = "rejected_degenerate"


@dataclass(slots=True)
class SwapProposal:
    """A fully formed swap candidate: both edges drawn, endpoint roles fixed.

    ``chosen_endpoint`` belongs to ``first_edge``; ``matched_endpoint``
    belongs to ``second_edge`` and has the same degree as the chosen one.
    """

    first_edge: tuple[int, int]
    chosen_endpoint: int
    second_edge: tuple[int, int]
    matched_endpoint: int

    def displaced_endpoint(self) -> int:
        """The partner v of the chosen endpoint on the first edge."""
        a, b = self.first_edge
        return b if a == self.chosen_endpoint else a

    def match_partner(self) -> int:
        """The partner w of the matched endpoint on the second edge."""
        a, b = self.second_edge
        return b if a == self.matched_endpoint else a

    def new_edges(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Edges created on acceptance: (u1, w) and (u2, v)."""
        return (
            (self.chosen_endpoint, self.match_partner()),
            (self.matched_endpoint, self.displaced_endpoint()),
        )


@dataclass(slots=True)
class StepOutcome:
    """Disposition of one chain step; ``proposal`` is set when one was formed."""

    tag: StepTag
    proposal: SwapProposal | None = None


@dataclass(slots=True)
class ChainConfig:
    """Parameters of one chain run.

    Each chain must get a distinct seed; ensemble drivers derive them as
    seed_base + chain_index. ``track_edges`` requests occurrence series
    for those vertex pairs (present or not). ``record_outcomes`` keeps the
    full per-step outcome list, which is memory-heavy for long runs; tag
    counts are always collected.
    """

    seed: int
    step_budget: int
    track_edges: set[tuple[int, int]] | None = None
    record_outcomes: bool = False

    def __post_init__(self):
        if self.step_budget < 0:
            raise ValueError("step_budget must be >= 0")


@dataclass(slots=True)
class EdgeSeries:
    """Binary occurrence series of one vertex pair along a chain.

    values[t] is 1 iff the edge existed after step t; index 0 is the
    initial state, so a run of N steps yields N+1 values.
    """

    pair: tuple[int, int]
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.uint8)
        if self.values.ndim != 1 or len(self.values) < 1:
            raise ValueError("series must be one-dimensional and nonempty")
        if self.values.max(initial=0) > 1:
            raise ValueError("series values must be 0 or 1")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(slots=True)
class RunResult:
    final_graph: Graph
    steps: int
    tag_counts: dict[StepTag, int]
    series: dict[tuple[int, int], EdgeSeries] = field(default_factory=dict)
    outcomes: list[StepOutcome] | None = None


def propose(graph: Graph, rng: random.Random) -> SwapProposal | StepTag:
    """Draw one swap candidate; returns a rejection tag when none forms.

    Draw order is fixed for reproducibility: first-edge index, endpoint
    coin, second-edge index, then a tie-break coin only when both
    endpoints of the second edge match the target degree.
    """
    m = graph.edge_count
    if m < 2:
        raise ValueError("edge swaps need at least two edges")
    edges = graph._edges
    degrees = graph.degrees

    first = edges[rng.randrange(m)]
    if rng.getrandbits(1):
        chosen = first[1]
    else:
        chosen = first[0]
    second = edges[rng.randrange(m)]

    target = degrees[chosen]
    a, b = second
    match_a = degrees[a] == target
    match_b = degrees[b] == target
    if not (match_a or match_b):
        return StepTag.REJECTED_NO_DEGREE_MATCH
    if match_a and match_b:
        matched = b if rng.getrandbits(1) else a
    elif match_a:
        matched = a
    else:
        matched = b

    if first is second or first == second:
        return StepTag.REJECTED_DEGENERATE
    u1, v1 = first
    if u1 == a or u1 == b or v1 == a or v1 == b:
        return StepTag.REJECTED_DEGENERATE

    return SwapProposal(
        first_edge=first,
        chosen_endpoint=chosen,
        second_edge=second,
        matched_endpoint=matched,
    )


def apply_swap(graph: Graph, proposal: SwapProposal) -> StepOutcome:
    """Apply a proposal, rejecting any swap that would break simplicity.

    On rejection the graph is left bit-identical. On acceptance the joint
    degree matrix is unchanged: the removed edges carry degree pairs
    (d(u1), d(v)) and (d(u1), d(w)) and the added ones the same two. A
    proposal whose edges are no longer present raises ChainStateError.
    """
    if proposal.first_edge not in graph._edge_pos:
        raise ChainStateError(f"stale proposal: {proposal.first_edge} absent")
    if proposal.second_edge not in graph._edge_pos:
        raise ChainStateError(f"stale proposal: {proposal.second_edge} absent")

    u1 = proposal.chosen_endpoint
    v = proposal.displaced_endpoint()
    u2 = proposal.matched_endpoint
    w = proposal.match_partner()

    # Self-loop guards cover proposals built by hand; uniform proposals
    # with vertex-disjoint edges cannot hit them.
    if u1 == w or u2 == v:
        return StepOutcome(StepTag.REJECTED_NOT_SIMPLE, proposal)
    if graph.has_edge(u1, w) or graph.has_edge(u2, v):
        return StepOutcome(StepTag.REJECTED_NOT_SIMPLE, proposal)

    graph.remove_edge(*proposal.first_edge)
    graph.remove_edge(*proposal.second_edge)
    graph.add_edge(u1, w)
    graph.add_edge(u2, v)
    return StepOutcome(StepTag.ACCEPTED, proposal)


class EdgeSwapChain:
    """Stateful chain over a graph it owns and mutates.

    The chain records, for each tracked pair, the step numbers at which
    the pair's occurrence flips; full 0/1 series are materialized on
    demand. One chain is one logical thread; nothing is shared between
    chains.
    """

    def __init__(
        self,
        graph: Graph,
        seed: int,
        tracked: set[tuple[int, int]] | None = None,
    ):
        self.graph = graph
        self.rng = random.Random(seed)
        self.steps_taken = 0
        self.tag_counts: dict[StepTag, int] = {tag: 0 for tag in StepTag}
        self._tracked: set[tuple[int, int]] | None = None
        self._initial_state: dict[tuple[int, int], int] = {}
        self._flips: dict[tuple[int, int], list[int]] = {}
        if tracked:
            canon = {(u, v) if u < v else (v, u) for u, v in tracked}
            self._tracked = canon
            for pair in canon:
                self._initial_state[pair] = int(graph.has_edge(*pair))
                self._flips[pair] = []

    def step(self) -> StepOutcome:
        """Advance by exactly one step; rejections count like acceptances."""
        self.steps_taken += 1
        result = propose(self.graph, self.rng)
        if isinstance(result, StepTag):
            outcome = StepOutcome(result, None)
        else:
            outcome = apply_swap(self.graph, result)
            if outcome.tag is StepTag.ACCEPTED and self._tracked is not None:
                self._record_flips(result)
        self.tag_counts[outcome.tag] += 1
        return outcome

    def _record_flips(self, proposal: SwapProposal) -> None:
        t = self.steps_taken
        tracked = self._tracked
        flips = self._flips
        new_a, new_b = proposal.new_edges()
        for u, v in (proposal.first_edge, proposal.second_edge, new_a, new_b):
            pair = (u, v) if u < v else (v, u)
            if pair in tracked:
                flips[pair].append(t)

    def run_steps(self, count: int) -> None:
        for _ in range(count):
            self.step()

    def series(self, pair: tuple[int, int]) -> EdgeSeries:
        """Materialize the occurrence series of a tracked pair (length steps+1)."""
        key = (pair[0], pair[1]) if pair[0] < pair[1] else (pair[1], pair[0])
        if self._tracked is None or key not in self._tracked:
            raise KeyError(f"pair {pair} was not tracked")
        values = np.zeros(self.steps_taken + 1, dtype=np.uint8)
        flips = self._flips[key]
        if flips:
            values[np.asarray(flips, dtype=np.int64)] = 1
            values = np.cumsum(values, dtype=np.int64) % 2
            values = values.astype(np.uint8)
        if self._initial_state[key]:
            values ^= 1
        return EdgeSeries(pair=key, values=values)

    def tracked_pairs(self) -> set[tuple[int, int]]:
        return set(self._tracked or ())


def run(graph: Graph, config: ChainConfig) -> RunResult:
    """Execute one chain for exactly ``step_budget`` steps on a copy.

    The input graph is not modified. For each tracked pair the result
    carries a series of length step_budget + 1 including the initial
    state. (graph, seed, budget) fully determines every output.
    """
    working = graph.copy()
    chain = EdgeSwapChain(working, config.seed, tracked=config.track_edges)
    outcomes: list[StepOutcome] | None = [] if config.record_outcomes else None
    for _ in range(config.step_budget):
        outcome = chain.step()
        if outcomes is not None:
            outcomes.append(outcome)
    series = {pair: chain.series(pair) for pair in chain.tracked_pairs()}
    return RunResult(
        final_graph=working,
        steps=chain.steps_taken,
        tag_counts=chain.tag_counts,
        series=series,
        outcomes=outcomes,
    )
