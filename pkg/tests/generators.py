"""Seeded random inputs shared by the unit and acceptance tests."""

from __future__ import annotations

import random

import networkx as nx

from bridgegirth.reductions import UndirectedGraph, WeightedDigraphInstance


def random_instance(seed: int, dag: bool = False, max_n: int = 10, max_demands: int = 6):
    """Weighted digraph on at most max_n nodes with reachable, distinct demand pairs."""
    rng = random.Random(seed)
    while True:
        n = rng.randint(3, max_n)
        if dag:
            pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        else:
            pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        chosen = rng.sample(pairs, rng.randint(1, min(len(pairs), 2 * n)))
        edges = tuple((u, v, rng.randint(1, 3)) for u, v in chosen)
        g = nx.DiGraph()
        g.add_nodes_from(range(n))
        g.add_edges_from(chosen)
        reach = [(s, t) for s in range(n) for t in nx.descendants(g, s)]
        if reach:
            demands = rng.sample(reach, min(len(reach), rng.randint(1, max_demands)))
            return WeightedDigraphInstance(n, edges, tuple(demands))


def random_shortcuts(rng: random.Random, count: int, length: int, size: int):
    """``size`` transitive-closure edges of ``count`` disjoint paths of ``length`` nodes."""
    H = []
    for _ in range(size):
        i = rng.randrange(count)
        a, b = sorted(rng.sample(range(length), 2))
        H.append((i * length + a, i * length + b))
    return H


def random_exact_hopset(rng: random.Random, inst: WeightedDigraphInstance, size: int):
    """``size`` edges (u, v, dist(u, v)) with exact weighted distances of ``inst``."""
    g = nx.DiGraph()
    g.add_nodes_from(range(inst.node_count))
    g.add_weighted_edges_from(inst.edges)
    dist = dict(nx.all_pairs_dijkstra_path_length(g))
    pairs = sorted((u, v) for u in dist for v in dist[u] if u != v)
    return [(u, v, dist[u][v]) for u, v in rng.sample(pairs, size)]


def random_weighted_graph(seed: int, max_n: int = 12) -> UndirectedGraph:
    rng = random.Random(seed)
    n = rng.randint(2, max_n)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = rng.sample(pairs, rng.randint(1, len(pairs)))
    return UndirectedGraph(n, tuple((u, v, rng.randint(1, 10)) for u, v in chosen))
