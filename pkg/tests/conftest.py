"""Shared graph builders and simulation helpers for the test suite."""

from __future__ import annotations

import random

import numpy as np
import pytest

from jddsampler import Graph


def triangle() -> Graph:
    return Graph(3, [(0, 1), (1, 2), (0, 2)])


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def random_simple_graph(n: int, m: int, seed: int) -> Graph:
    """Uniform-ish G(n, m): distinct random pairs until m edges."""
    rng = random.Random(seed)
    edges: set[tuple[int, int]] = set()
    limit = n * (n - 1) // 2
    if m > limit:
        raise ValueError("too many edges requested")
    while len(edges) < m:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return Graph(n, sorted(edges))


def caveman_graph(cliques: int, size: int) -> Graph:
    """Ring of cliques: high clustering, two or three degree classes.

    Clique vertices have degree size-1; each clique's vertex 0 gains a
    bridge to the next clique's vertex 1, so bridge endpoints sit one
    degree higher. Strongly atypical for its joint degree matrix, which
    is what makes short-run initialization bias visible.
    """
    edges = []
    for c in range(cliques):
        base = c * size
        for i in range(size):
            for j in range(i + 1, size):
                edges.append((base + i, base + j))
        nxt = ((c + 1) % cliques) * size
        edges.append((base, nxt + 1))
    return Graph(cliques * size, edges)


def simulate_two_state(alpha: float, beta: float, length: int, rng: np.random.Generator) -> np.ndarray:
    """Exact simulation of the two-state chain (0 = absent, 1 = present).

    For alpha == beta the flip probability is state-independent, so the
    path is a cumulative XOR of iid flips (vectorized); otherwise a
    direct sequential simulation is used.
    """
    z = np.empty(length, dtype=np.uint8)
    z[0] = rng.integers(0, 2)
    if alpha == beta:
        flips = rng.random(length - 1) < alpha
        z[1:] = (int(z[0]) + np.cumsum(flips)) % 2
        return z
    u = rng.random(length - 1)
    state = int(z[0])
    for t in range(1, length):
        p_flip = alpha if state == 0 else beta
        if u[t - 1] < p_flip:
            state = 1 - state
        z[t] = state
    return z


class ScriptedRng:
    """Duck-typed rng whose draws are read off a fixed script.

    Entries are consumed in propose()'s documented order: randrange,
    getrandbits, randrange, [getrandbits].
    """

    def __init__(self, values):
        self.values = list(values)

    def randrange(self, _n):
        return self.values.pop(0)

    def getrandbits(self, _bits):
        return self.values.pop(0)


@pytest.fixture
def rng():
    return random.Random(0xDECAF)
