"""Slow reference implementations used only by the tests.

Each one follows a definition literally, with no shared code from the package.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations

import networkx as nx


def path_pos(paths):
    return [{v: i for i, v in enumerate(p)} for p in paths]


def bridge_exists(node_count, paths, b, ordered=False):
    """Whether some bridge has exactly b nodes, by enumerating rivers, arcs and node tuples."""
    pos = path_pos(paths)
    p = len(paths)
    for r in range(p):
        for arcs in permutations([j for j in range(p) if j != r], b - 1):
            if ordered and any(a > r for a in arcs):
                continue
            for nodes in permutations(range(node_count), b):
                if not (nodes[0] in pos[r] and nodes[-1] in pos[r] and pos[r][nodes[0]] < pos[r][nodes[-1]]):
                    continue
                if all(
                    nodes[i] in pos[a] and nodes[i + 1] in pos[a] and pos[a][nodes[i]] < pos[a][nodes[i + 1]]
                    for i, a in enumerate(arcs)
                ):
                    return True
    return False


def girth_upto(node_count, paths, kmax, ordered=False):
    for b in range(2, kmax + 1):
        if bridge_exists(node_count, paths, b, ordered):
            return b
    return None


def has_two_cycle(paths):
    before = set()
    for p in paths:
        for a, c in combinations(range(len(p)), 2):
            before.add((p[a], p[c]))
    return any((v, u) in before for u, v in before)


def consecutive_digraph(node_count, paths):
    g = nx.DiGraph()
    g.add_nodes_from(range(node_count))
    for p in paths:
        g.add_edges_from(zip(p, p[1:]))
    return g


def random_paths(rng: random.Random, n: int, p: int, max_len: int | None = None):
    max_len = n if max_len is None else max_len
    return tuple(tuple(rng.sample(range(n), rng.randint(0, max_len))) for _ in range(p))


def count_shortest(edges, s, t):
    """Number of distinct minimum-weight s-t paths via networkx."""
    g = nx.DiGraph()
    for u, v, w in edges:
        g.add_edge(u, v, weight=w)
    if s not in g or t not in g or not nx.has_path(g, s, t):
        return 0
    return sum(1 for _ in nx.all_shortest_paths(g, s, t, weight="weight"))


def max_internally_disjoint(node_count, edges, s, t):
    """Largest set of internally vertex-disjoint simple s-t paths, by exhaustive search."""
    g = nx.DiGraph()
    g.add_nodes_from(range(node_count))
    g.add_edges_from((e[0], e[1]) for e in edges)
    paths = [tuple(p) for p in nx.all_simple_paths(g, s, t)]
    best = 0

    def grow(start, used, count):
        nonlocal best
        best = max(best, count)
        for k in range(start, len(paths)):
            inner = set(paths[k][1:-1])
            if not inner & used:
                grow(k + 1, used | inner, count + 1)

    grow(0, frozenset(), 0)
    return best
