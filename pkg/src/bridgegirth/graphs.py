"""Small directed-graph toolbox shared by the reduction and gap modules."""

from __future__ import annotations

import heapq
from collections import deque
from typing import Iterable

INF = float("inf")


def adjacency(node_count: int, edges: Iterable[tuple]) -> list[list[tuple[int, int]]]:
    """Out-adjacency ``adj[u] = [(v, w), ...]``; unweighted edges get weight 1."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(node_count)]
    for e in edges:
        u, v = e[0], e[1]
        adj[u].append((v, e[2] if len(e) > 2 else 1))
    return adj


def bfs_hops(adj: list[list[tuple[int, int]]], s: int, skip: tuple[int, int] | None = None) -> list:
    """Hop distances from s, optionally ignoring one edge."""
    dist: list = [INF] * len(adj)
    dist[s] = 0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v, _ in adj[u]:
            if dist[v] == INF and (u, v) != skip:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def bfs_path(adj, s: int, t: int, skip: tuple[int, int] | None = None) -> list[int] | None:
    """A fewest-hop s-t node sequence or None."""
    parent = {s: None}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        if u == t:
            path = [t]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for v, _ in adj[u]:
            if v not in parent and (u, v) != skip:
                parent[v] = u
                queue.append(v)
    return None


def reachable(adj, s: int, skip: tuple[int, int] | None = None) -> set[int]:
    seen = {s}
    stack = [s]
    while stack:
        u = stack.pop()
        for v, _ in adj[u]:
            if v not in seen and (u, v) != skip:
                seen.add(v)
                stack.append(v)
    return seen


def dijkstra(adj, s: int) -> list:
    dist: list = [INF] * len(adj)
    dist[s] = 0
    heap = [(0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def shortest_path_dag(adj, s: int) -> tuple[list, list[int], list[list[int]]]:
    """Distances, a topological order of the tight-edge subgraph, and tight predecessors.

    Raises ValueError when the tight subgraph has a cycle (zero-weight cycle).
    """
    dist = dijkstra(adj, s)
    n = len(adj)
    preds: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    for u in range(n):
        if dist[u] == INF:
            continue
        for v, w in adj[u]:
            if dist[u] + w == dist[v]:
                preds[v].append(u)
                succ[u].append(v)
                indeg[v] += 1
    order = []
    queue = deque(v for v in range(n) if dist[v] != INF and indeg[v] == 0)
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if len(order) != sum(1 for d in dist if d != INF):
        raise ValueError("zero-weight cycle among shortest paths")
    return dist, order, preds


def count_paths_saturating(order: list[int], preds: list[list[int]], s: int, cap: int = 2) -> list[int]:
    count = [0] * len(preds)
    count[s] = 1
    for v in order:
        if v != s:
            count[v] = min(cap, sum(count[u] for u in preds[v]))
    return count


def strongly_connected_components(node_count: int, succ: list[list[int]]) -> list[list[int]]:
    """Tarjan's algorithm (iterative). Components come out in reverse topological order."""
    index = [0] * node_count
    low = [0] * node_count
    visited = [False] * node_count
    on_stack = [False] * node_count
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 1
    for root in range(node_count):
        if visited[root]:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                visited[v] = True
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            while i < len(succ[v]):
                w = succ[v][i]
                i += 1
                if not visited[w]:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def topo_sort(node_count: int, succ: list[list[int]]) -> list[int] | None:
    indeg = [0] * node_count
    for u in range(node_count):
        for v in succ[u]:
            indeg[v] += 1
    queue = deque(v for v in range(node_count) if indeg[v] == 0)
    order = []
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return order if len(order) == node_count else None


def reach_closure(node_count: int, succ: list[list[int]]) -> list[int]:
    """Bitset of nodes reachable from each node (itself included). Works on cyclic graphs."""
    reach = [0] * node_count
    for v in range(node_count):
        mask = 0
        stack = [v]
        seen = {v}
        while stack:
            u = stack.pop()
            mask |= 1 << u
            for w in succ[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        reach[v] = mask
    return reach
