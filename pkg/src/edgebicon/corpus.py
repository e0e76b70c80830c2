"""Graph corpora used by the checking harness and the test-suite."""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterator

import networkx as nx

from .graph import Graph, generate, is_connected


@lru_cache(maxsize=None)
def atlas_catalog(max_n: int = 7) -> tuple[Graph, ...]:
    """Every connected graph on 1..max_n nodes up to isomorphism (max_n <= 7)."""
    if not 1 <= max_n <= 7:
        raise ValueError("the graph atlas covers 1..7 nodes")
    out = []
    for h in nx.graph_atlas_g():
        k = h.number_of_nodes()
        if 1 <= k <= max_n and nx.is_connected(h):
            out.append(Graph(k, h.edges()))
    return tuple(out)


def one_node_extensions(base: tuple[Graph, ...]) -> Iterator[Graph]:
    """Attach a new node to every nonempty neighbor subset of each base graph.

    Every connected graph has a non-cut vertex, so extending all connected
    graphs on k nodes reaches every connected graph on k+1 nodes (with repeats).
    """
    for g in base:
        k = g.n
        for mask in range(1, 1 << k):
            new = [(v, k) for v in range(k) if mask >> v & 1]
            yield Graph(k + 1, list(g.edges) + new)


def random_corpus(count: int = 500, max_n: int = 60, first_seed: int = 1) -> list[tuple[int, Graph]]:
    """Seeded random connected graphs of varied size and density.

    Half the draws use an average degree between 0.5 and 6 (tree-like, many
    bridges), the rest a flat edge probability up to 0.3.
    """
    out = []
    for seed in range(first_seed, first_seed + count):
        rng = random.Random(seed)
        n = rng.randint(2, max_n)
        if rng.random() < 0.5:
            p = min(1.0, rng.uniform(0.5, 6.0) / n)
        else:
            p = rng.uniform(0.0, 0.3)
        out.append((seed, generate("random_connected", n, p, seed=seed)))
    return out


def local_sample(count: int = 200, max_n: int = 10, first_seed: int = 1) -> list[tuple[int, Graph]]:
    """Small connected graphs for the cycle-witness-radius experiments."""
    out = []
    for seed in range(first_seed, first_seed + count):
        rng = random.Random(10_000 + seed)
        n = rng.randint(3, max_n)
        p = rng.uniform(0.1, 0.6)
        g = generate("random_connected", n, p, seed=seed)
        assert is_connected(g)
        out.append((seed, g))
    return out


def gadget_pairs(count: int = 50, max_n: int = 30, first_seed: int = 1) -> list[tuple[int, Graph, tuple[int, int]]]:
    """Random (graph, edge) pairs for the message-coverage experiment."""
    out = []
    for seed in range(first_seed, first_seed + count):
        rng = random.Random(20_000 + seed)
        n = rng.randint(2, max_n)
        g = generate("random_connected", n, rng.uniform(0.0, 0.4), seed=seed)
        e = rng.choice(g.sorted_edges())
        out.append((seed, g, e))
    return out
