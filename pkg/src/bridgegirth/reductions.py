"""Compile path systems into weighted digraph instances, rewrite instances into
independent form, and check the adversary arguments built on top of them."""

from __future__ import annotations

import heapq
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .bridges import (
    PreconditionError,
    certify_bridge_free_acyclic,
    certify_ordered_bridge_free_acyclic,
    find_bridge_upto,
)
from .core import ParseError, PathSystem, check_valid, consecutive_successors, is_acyclic
from .graphs import (
    INF,
    adjacency,
    bfs_hops,
    bfs_path,
    count_paths_saturating,
    dijkstra,
    reach_closure,
    reachable,
    shortest_path_dag,
    strongly_connected_components,
    topo_sort,
)

PERTURB_BITS = 40


@dataclass(frozen=True)
class WeightedDigraphInstance:
    """Directed graph with nonnegative integer weights and demand pairs."""

    node_count: int
    edges: tuple[tuple[int, int, int], ...]
    demands: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        edges = tuple((int(u), int(v), int(w)) for u, v, w in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "demands", tuple((int(s), int(t)) for s, t in self.demands))
        seen = set()
        for u, v, w in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if (u, v) in seen:
                raise ValueError(f"parallel edge {u}->{v}")
            if w < 0:
                raise ValueError("negative weight")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"edge {u}->{v} out of range")
            seen.add((u, v))
        for s, t in self.demands:
            if not (0 <= s < self.node_count and 0 <= t < self.node_count):
                raise ValueError(f"demand ({s}, {t}) out of range")

    def adj(self) -> list[list[tuple[int, int]]]:
        return adjacency(self.node_count, self.edges)

    def weight_map(self) -> dict[tuple[int, int], int]:
        return {(u, v): w for u, v, w in self.edges}


def serialize_instance(inst: WeightedDigraphInstance) -> str:
    lines = ["digraph 1", f"nodes {inst.node_count}"]
    lines += [f"edge {u} {v} {w}" for u, v, w in inst.edges]
    lines += [f"demand {s} {t}" for s, t in inst.demands]
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> WeightedDigraphInstance:
    n = None
    header = False
    edges, demands = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        try:
            values = [int(t) for t in tokens[1:]]
        except ValueError:
            raise ParseError(lineno, "non-integer token") from None
        if not header:
            if tokens[0] != "digraph" or values != [1]:
                raise ParseError(lineno, "expected 'digraph 1'")
            header = True
        elif n is None:
            if tokens[0] != "nodes" or len(values) != 1 or values[0] < 0:
                raise ParseError(lineno, "expected 'nodes <n>'")
            n = values[0]
        elif tokens[0] == "edge" and len(values) == 3:
            edges.append(tuple(values))
        elif tokens[0] == "demand" and len(values) == 2:
            demands.append(tuple(values))
        else:
            raise ParseError(lineno, f"malformed record '{line}'")
    if n is None:
        raise ParseError(0, "truncated header")
    try:
        return WeightedDigraphInstance(n, tuple(edges), tuple(demands))
    except ValueError as exc:
        raise ParseError(0, str(exc)) from None


def system_to_digraph(system: PathSystem) -> WeightedDigraphInstance:
    """Unit-weight consecutive-pair digraph with one (first, last) demand per path."""
    check_valid(system)
    for i, path in enumerate(system.paths):
        if len(path) < 2:
            raise ValueError(f"path {i} has fewer than 2 nodes")
    succ = consecutive_successors(system)
    edges = tuple((u, v, 1) for u in range(system.node_count) for v in succ[u])
    demands = tuple((p[0], p[-1]) for p in system.paths)
    return WeightedDigraphInstance(system.node_count, edges, demands)


def dp_hard_instance(system: PathSystem) -> WeightedDigraphInstance:
    """Weighted digraph whose demand pairs have their source paths as unique shortest paths.

    Paths are added in order; the edges of path i get weight
    1 + (sum of all earlier edge weights).
    """
    check_valid(system)
    for i, path in enumerate(system.paths):
        if len(path) < 2:
            raise ValueError(f"path {i} has fewer than 2 nodes")
    cert = certify_ordered_bridge_free_acyclic(system)
    if not cert.ok:
        raise PreconditionError(
            f"ordered bridge on path {cert.path} between {cert.u} and {cert.v}: {cert.witness}"
        )
    total = 0
    edges = []
    for path in system.paths:
        w = 1 + total
        for u, v in zip(path, path[1:]):
            edges.append((u, v, w))
            total += w
    demands = tuple((p[0], p[-1]) for p in system.paths)
    return WeightedDigraphInstance(system.node_count, tuple(edges), demands)


def count_shortest_paths(inst: WeightedDigraphInstance, s: int, t: int, adj=None):
    """Exact distance and number of shortest s-t paths, saturating at 2."""
    adj = adj if adj is not None else inst.adj()
    dist, order, preds = shortest_path_dag(adj, s)
    if dist[t] == INF:
        return INF, 0
    return dist[t], count_paths_saturating(order, preds, s)[t]


def _shortest_path(adj, s: int, t: int) -> list[int] | None:
    dist, _, preds = shortest_path_dag(adj, s)
    if dist[t] == INF:
        return None
    path = [t]
    while path[-1] != s:
        path.append(preds[path[-1]][0])
    return path[::-1]


def _edge_set(paths) -> set[tuple[int, int]]:
    return {e for p in paths for e in zip(p, p[1:])}


def _demand_paths(inst: WeightedDigraphInstance, mode: str):
    adj = inst.adj()
    paths = []
    for i, (s, t) in enumerate(inst.demands):
        if s == t:
            return f"demand {i} has equal endpoints"
        if mode == "dp":
            _, count = count_shortest_paths(inst, s, t, adj)
            if count == 0:
                return f"demand {i} unreachable"
            if count > 1:
                return f"non-unique shortest path for demand {i}"
            paths.append(_shortest_path(adj, s, t))
        elif mode == "rp":
            path = bfs_path(adj, s, t)
            if path is None:
                return f"demand {i} unreachable"
            # a simple path is the only one iff each of its edges is required
            for e in zip(path, path[1:]):
                if t in reachable(adj, s, skip=e):
                    return f"non-unique path for demand {i}"
            paths.append(path)
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return paths


def check_independence(inst: WeightedDigraphInstance, mode: str = "dp") -> str | None:
    """``None`` if every demand has a unique (shortest) path and these are edge-disjoint."""
    paths = _demand_paths(inst, mode)
    if isinstance(paths, str):
        return paths
    owner: dict[tuple[int, int], int] = {}
    for i, path in enumerate(paths):
        for e in zip(path, path[1:]):
            if e in owner:
                return f"shared edge {e[0]}->{e[1]} between demands {owner[e]} and {i}"
            owner[e] = i
    return None


def demand_paths(inst: WeightedDigraphInstance, mode: str = "dp") -> list[list[int]]:
    paths = _demand_paths(inst, mode)
    if isinstance(paths, str):
        raise ValueError(paths)
    return paths


def preserver_size(inst: WeightedDigraphInstance, mode: str = "dp") -> int:
    """Edges in the union of the demand paths of an independent instance."""
    problem = check_independence(inst, mode)
    if problem is not None:
        raise PreconditionError(f"instance is not independent: {problem}")
    return len(_edge_set(demand_paths(inst, mode)))


@dataclass
class IndependenceResult:
    instance: WeightedDigraphInstance
    paths: list[list[int]]
    # after each step: total path edge count (dp) or (edge count, total hops) (rp)
    potentials: list = field(default_factory=list)
    log: list[str] = field(default_factory=list)
    contraction: dict[int, int] | None = None
    tree_edges: int = 0


class RetryBudgetExceeded(RuntimeError):
    pass


def _perturb(weights: dict, rng: random.Random) -> dict:
    scale = max(1, len(weights)) << PERTURB_BITS
    return {e: w * scale + rng.randrange(1 << PERTURB_BITS) for e, w in weights.items()}


def _all_unique(node_count: int, weights: dict, demands, paths=None) -> bool:
    """Every demand has exactly one shortest path (equal to ``paths[i]`` when given)."""
    if any(w == 0 for w in weights.values()):
        return False
    adj = adjacency(node_count, [(u, v, w) for (u, v), w in weights.items()])
    for i, (s, t) in enumerate(demands):
        dist, order, preds = shortest_path_dag(adj, s)
        if count_paths_saturating(order, preds, s)[t] != 1:
            return False
        if paths is not None and sum(weights[e] for e in zip(paths[i], paths[i][1:])) != dist[t]:
            return False
    return True


def make_independent_dp(
    inst: WeightedDigraphInstance, seed: int | None = None, retries: int = 20
) -> IndependenceResult:
    """Rewrite a distance-preserver instance into an independent one.

    Weights are perturbed with integer residues to make shortest paths
    unique, the graph is cut down to the union of those paths, and then
    demands that use no edge alone are dropped and edge skips are applied
    until neither rule fires.
    """
    rng = random.Random(seed)
    adj = inst.adj()
    for i, (s, t) in enumerate(inst.demands):
        if s == t or t not in reachable(adj, s):
            raise ValueError(f"demand {i} ({s}, {t}) is degenerate or unreachable")
    n = inst.node_count
    demands = list(inst.demands)
    weights = inst.weight_map()
    for _ in range(retries):
        trial = _perturb(weights, rng)
        if _all_unique(n, trial, demands):
            weights = trial
            break
    else:
        raise RetryBudgetExceeded(f"no tie-free perturbation in {retries} attempts")

    adj = adjacency(n, [(u, v, w) for (u, v), w in weights.items()])
    paths = [_shortest_path(adj, s, t) for s, t in demands]
    on_paths = _edge_set(paths)
    weights = {e: w for e, w in weights.items() if e in on_paths}
    result = IndependenceResult(WeightedDigraphInstance(n, ()), paths)
    result.potentials.append(sum(len(p) - 1 for p in paths))

    while True:
        users: dict[tuple[int, int], int] = {}
        for p in paths:
            for e in zip(p, p[1:]):
                users[e] = users.get(e, 0) + 1
        step = None
        for i, p in enumerate(paths):
            if not any(users[e] == 1 for e in zip(p, p[1:])):
                step = ("delete", i)
                break
        if step is None:
            for i, p in enumerate(paths):
                for k in range(len(p) - 2):
                    x, y, z = p[k : k + 3]
                    first, second = users[(x, y)] == 1, users[(y, z)] == 1
                    if first != second:
                        step = ("skip", i, k, (x, y) if first else (y, z))
                        break
                if step is not None:
                    break
        if step is None:
            break
        if step[0] == "delete":
            i = step[1]
            result.log.append(f"delete demand {demands[i]}")
            del paths[i], demands[i]
        else:
            _, i, k, dropped = step
            x, y, z = paths[i][k : k + 3]
            if (x, z) in weights:
                raise AssertionError("skip edge already present")
            weights[(x, z)] = weights[(x, y)] + weights[(y, z)]
            del weights[dropped]
            paths[i] = paths[i][: k + 1] + paths[i][k + 2 :]
            result.log.append(f"skip {x}->{y}->{z} on demand {demands[i]}, drop {dropped}")
        on_paths = _edge_set(paths)
        weights = {e: w for e, w in weights.items() if e in on_paths}
        if not _all_unique(n, weights, demands, paths):
            # re-perturb once; a perturbation only breaks ties among shortest paths
            weights = _perturb(weights, rng)
            if not _all_unique(n, weights, demands, paths):
                raise RetryBudgetExceeded("uniqueness lost after a rewrite step")
        result.potentials.append(sum(len(p) - 1 for p in paths))

    out = WeightedDigraphInstance(
        n, tuple((u, v, w) for (u, v), w in sorted(weights.items())), tuple(demands)
    )
    problem = check_independence(out, "dp")
    if problem is not None:
        raise AssertionError(f"independence rewrite failed: {problem}")
    result.instance = out
    result.paths = paths
    return result


def _contract_sccs(node_count: int, edge_list: list[tuple[int, int]]):
    succ: list[list[int]] = [[] for _ in range(node_count)]
    for u, v in edge_list:
        succ[u].append(v)
    comps = strongly_connected_components(node_count, succ)
    comps.sort(key=min)
    contraction = {}
    tree_edges = 0
    for cid, comp in enumerate(comps):
        for v in comp:
            contraction[v] = cid
        if len(comp) > 1:
            # one out-tree and one in-tree rooted at the smallest node
            tree_edges += 2 * (len(comp) - 1)
    edges = sorted(
        {(contraction[u], contraction[v]) for u, v in edge_list if contraction[u] != contraction[v]}
    )
    return len(comps), edges, contraction, tree_edges


def make_independent_rp(
    node_count: int, edges: Iterable[Sequence[int]], demands: Iterable[tuple[int, int]]
) -> IndependenceResult:
    """Rewrite a reachability-preserver instance into an independent one.

    Strongly connected components are contracted first (each costs an in-tree
    and an out-tree). Then unrequired edges are dropped, each demand is cut to
    the suffix starting at its first uniquely required edge, and edge skips
    at the topologically earliest middle node are applied until none fires.
    """
    edge_list = sorted({(int(e[0]), int(e[1])) for e in edges if e[0] != e[1]})
    n, dag_edges, contraction, tree_edges = _contract_sccs(node_count, edge_list)
    graph = set(dag_edges)
    result = IndependenceResult(
        WeightedDigraphInstance(n, ()), [], contraction=contraction, tree_edges=tree_edges
    )

    def adj_of(es):
        return adjacency(n, sorted(es))

    def requires(g_adj, s, t, e) -> bool:
        return t not in reachable(g_adj, s, skip=e)

    def requirers(g_adj, dem_list, e) -> list[int]:
        return [i for i, d in enumerate(dem_list) if d is not None and requires(g_adj, d[0], d[1], e)]

    adj = adj_of(graph)
    dem = []
    for s, t in demands:
        cs, ct = contraction[s], contraction[t]
        if cs == ct:
            result.log.append(f"drop demand ({s}, {t}): same component")
        elif ct not in reachable(adj, cs):
            result.log.append(f"drop demand ({s}, {t}): unreachable")
        else:
            dem.append((cs, ct))

    def potential(g_adj, dem_list, routes=()) -> tuple[int, int]:
        # (edge count, total hops over live demands), compared lexicographically
        hops = 0
        for i, d in enumerate(dem_list):
            if d is None:
                continue
            if i < len(routes) and routes[i] is not None:
                hops += len(routes[i]) - 1
            else:
                hops += bfs_hops(g_adj, d[0])[d[1]]
        return len(graph), hops

    result.potentials.append(potential(adj, dem))

    # every edge must be required by some demand; drop the others one at a time
    changed = True
    while changed:
        changed = False
        adj = adj_of(graph)
        for e in sorted(graph):
            if not requirers(adj, dem, e):
                graph.discard(e)
                result.log.append(f"remove unrequired edge {e}")
                result.potentials.append(potential(adj_of(graph), dem))
                changed = True
                break

    succ: list[list[int]] = [[] for _ in range(n)]
    for u, v in graph:
        succ[u].append(v)
    rank = {v: i for i, v in enumerate(topo_sort(n, succ))}

    # suffix rule, one demand at a time against the current demand list
    adj = adj_of(graph)
    current: list = list(dem)
    routes: list = [None] * len(dem)
    for i, (s, t) in enumerate(dem):
        path = bfs_path(adj, s, t)
        first = None
        for k, e in enumerate(zip(path, path[1:])):
            if requirers(adj, current, e) == [i]:
                first = k
                break
        if first is None:
            result.log.append(f"delete demand {(s, t)}")
            current[i] = None
            result.potentials.append(potential(adj, current, routes))
            continue
        u = path[first]
        current[i] = (u, t)
        routes[i] = path[first:]
        if u != s:
            result.log.append(f"shorten demand {(s, t)} to {(u, t)}")
            result.potentials.append(potential(adj, current, routes))
    dem = [d for d in current if d is not None]
    paths = [r for r in routes if r is not None]
    # shortened prefixes can leave edges that no demand needs; keep only path edges
    graph = _edge_set(paths)

    while True:
        adj = adj_of(graph)
        best = None
        for i in range(len(dem)):
            p = paths[i]
            for k in range(len(p) - 2):
                x, y, z = p[k : k + 3]
                if requirers(adj, dem, (x, y)) == [i] and requirers(adj, dem, (y, z)) != [i]:
                    key = (rank[y], i, k)
                    if best is None or key < best:
                        best = key
                    break
        if best is None:
            break
        _, i, k = best
        x, y, z = paths[i][k : k + 3]
        if (x, z) in graph:
            raise AssertionError("skip edge already present")
        graph.discard((x, y))
        graph.add((x, z))
        paths[i] = paths[i][: k + 1] + paths[i][k + 2 :]
        result.log.append(f"skip {x}->{y}->{z} on demand {dem[i]}")
        result.potentials.append((len(graph), sum(len(p) - 1 for p in paths)))

    out = WeightedDigraphInstance(n, tuple((u, v, 1) for u, v in sorted(graph)), tuple(dem))
    problem = check_independence(out, "rp")
    if problem is not None:
        raise AssertionError(f"independence rewrite failed: {problem}")
    result.instance = out
    result.paths = paths
    return result


@dataclass(frozen=True)
class AdversaryResult:
    demand: int
    pair: tuple[int, int]
    hops: int


def shortcut_adversary(system: PathSystem, H: Iterable[tuple[int, int]]) -> AdversaryResult:
    """A demand pair that no shortcut in H touches, with its hop distance in G plus H."""
    H = [(int(u), int(v)) for u, v in H]
    inst = system_to_digraph(system)
    if not is_acyclic(system):
        raise PreconditionError("shortcut adversary needs an acyclic system")
    cert = certify_bridge_free_acyclic(system)
    if not cert.ok:
        raise PreconditionError(f"system has a bridge on path {cert.path}")
    if len(H) >= system.path_count:
        raise ValueError(f"|H| = {len(H)} is not below p = {system.path_count}")
    closure = reach_closure(system.node_count, consecutive_successors(system))
    for u, v in H:
        if u == v or not closure[u] >> v & 1:
            raise ValueError(f"shortcut {u}->{v} is not in the transitive closure")
    return _untouched_pair(system, inst, [(u, v, 1) for u, v in H], unweighted=True)


def _untouched_pair(system: PathSystem, inst: WeightedDigraphInstance, H, unweighted: bool) -> AdversaryResult:
    for j, path in enumerate(system.paths):
        pos = {v: i for i, v in enumerate(path)}
        if any(u in pos and v in pos and pos[u] < pos[v] for u, v, _ in H):
            continue
        s, t = path[0], path[-1]
        merged = inst.weight_map()
        for u, v, w in H:
            merged[(u, v)] = min(w, merged.get((u, v), w))
        adj = adjacency(inst.node_count, [(u, v, w) for (u, v), w in merged.items()])
        hops = bfs_hops(adj, s)[t] if unweighted else _min_hops_among_shortest(adj, s)[t]
        return AdversaryResult(j, (s, t), hops)
    raise ValueError("every demand pair is touched by H")


def _min_hops_among_shortest(adj, s: int) -> list:
    """Lexicographic (distance, hops) Dijkstra; returns the hop component."""
    best: list = [(INF, INF)] * len(adj)
    best[s] = (0, 0)
    heap = [(0, 0, s)]
    while heap:
        d, h, u = heapq.heappop(heap)
        if (d, h) > best[u]:
            continue
        for v, w in adj[u]:
            cand = (d + w, h + 1)
            if cand < best[v]:
                best[v] = cand
                heapq.heappush(heap, (cand[0], cand[1], v))
    return [h for _, h in best]


def hopset_adversary(system: PathSystem, H: Iterable[tuple[int, int, int]]) -> AdversaryResult:
    """A demand pair whose shortest path in G plus H still needs |pi| - 1 hops."""
    H = [(int(u), int(v), int(w)) for u, v, w in H]
    inst = dp_hard_instance(system)
    if len(H) >= system.path_count:
        raise ValueError(f"|H| = {len(H)} is not below p = {system.path_count}")
    adj = inst.adj()
    table = {u: dijkstra(adj, u) for u in {u for u, _, _ in H}}
    for u, v, w in H:
        if u == v or table[u][v] != w:
            raise ValueError(f"not an exact hopset edge: {u}->{v} weight {w}")
    return _untouched_pair(system, inst, H, unweighted=False)


@dataclass
class GameTranscript:
    # (adversary edges added, demand pair, builder edges added) per round
    rounds: list[tuple[tuple[tuple[int, int], ...], tuple[int, int], tuple[tuple[int, int], ...]]]
    final: int


def online_game(system: PathSystem, builder: str = "greedy-shortest") -> GameTranscript:
    """Play the adversary that reveals one path per round against a builder."""
    check_valid(system)
    if builder not in ("greedy-shortest", "lazy"):
        raise ValueError(f"unknown builder {builder!r}")
    n = system.node_count
    A: set[tuple[int, int]] = set()
    B: set[tuple[int, int]] = set()
    rounds = []
    for path in system.paths:
        if len(path) < 2:
            continue
        new = tuple(e for e in zip(path, path[1:]) if e not in A)
        A.update(new)
        s, t = path[0], path[-1]
        if builder == "greedy-shortest":
            route = _min_new_edges_path(n, A, B, s, t)
        elif t in reachable(adjacency(n, B), s):
            route = []
        else:
            route = bfs_path(adjacency(n, A), s, t)
        added = tuple(e for e in zip(route, route[1:]) if e not in B)
        B.update(added)
        if t not in reachable(adjacency(n, B), s):
            raise AssertionError("builder failed to connect the demand")
        rounds.append((new, (s, t), added))
    return GameTranscript(rounds, len(B))


def _min_new_edges_path(n: int, A, B, s: int, t: int) -> list[int]:
    # 0-1 BFS: edges already bought cost 0
    adj = adjacency(n, [(u, v, 0 if (u, v) in B else 1) for u, v in A])
    dist: list = [INF] * n
    parent: list = [None] * n
    dist[s] = 0
    dq = deque([s])
    while dq:
        u = dq.popleft()
        for v, w in adj[u]:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                parent[v] = u
                if w == 0:
                    dq.appendleft(v)
                else:
                    dq.append(v)
    if dist[t] == INF:
        raise AssertionError("demand unreachable in the adversary graph")
    route = [t]
    while route[-1] != s:
        route.append(parent[route[-1]])
    return route[::-1]


@dataclass(frozen=True)
class ADPReport:
    min_hops: float  # min over demand-path edges e of the hop distance in G - e (inf if always cut)
    per_edge: tuple[tuple[int, tuple[int, int], float], ...]  # (demand, edge, hops)


def adp_instance(system: PathSystem, k: int) -> tuple[WeightedDigraphInstance, ADPReport]:
    """Unit digraph plus the single-edge-removal hop report for each demand path."""
    if find_bridge_upto(system, k) is not None:
        raise PreconditionError(f"system has a bridge with at most {k} nodes")
    inst = system_to_digraph(system)
    adj = inst.adj()
    rows = []
    for j, path in enumerate(system.paths):
        s, t = path[0], path[-1]
        for e in zip(path, path[1:]):
            rows.append((j, e, bfs_hops(adj, s, skip=e)[t]))
    return inst, ADPReport(min((r[2] for r in rows), default=INF), tuple(rows))


@dataclass(frozen=True)
class UndirectedGraph:
    node_count: int
    edges: tuple[tuple[int, int, int], ...]  # (u, v, positive weight)


def greedy_spanner(graph: UndirectedGraph, k: int) -> UndirectedGraph:
    """Keep an edge (in nondecreasing weight order) iff the current distance exceeds k times its weight."""
    if k < 1:
        raise ValueError("k must be at least 1")
    kept: list[tuple[int, int, int]] = []
    adj: list[list[tuple[int, int]]] = [[] for _ in range(graph.node_count)]
    for u, v, w in sorted(graph.edges, key=lambda e: e[2]):
        if w <= 0:
            raise ValueError("weights must be positive")
        if _bounded_dist(adj, u, v, k * w) > k * w:
            kept.append((u, v, w))
            adj[u].append((v, w))
            adj[v].append((u, w))
    return UndirectedGraph(graph.node_count, tuple(kept))


def _bounded_dist(adj, s: int, t: int, limit) -> float:
    dist = {s: 0}
    heap = [(0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if u == t:
            return d
        if d > dist.get(u, INF) or d > limit:
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < dist.get(v, INF):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return INF


def _undirected_adj(graph: UndirectedGraph):
    adj: list[list[tuple[int, int]]] = [[] for _ in range(graph.node_count)]
    for u, v, w in graph.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    return adj


def spanner_stretch(graph: UndirectedGraph, spanner: UndirectedGraph):
    """Largest dist_H / dist_G over connected pairs, or inf if H disconnects a pair."""
    g_adj, h_adj = _undirected_adj(graph), _undirected_adj(spanner)
    worst = Fraction(1)
    for s in range(graph.node_count):
        dg, dh = dijkstra(g_adj, s), dijkstra(h_adj, s)
        for t in range(graph.node_count):
            if t == s or dg[t] == INF:
                continue
            if dh[t] == INF:
                return INF
            worst = max(worst, Fraction(dh[t], dg[t]))
    return worst


def girth(graph: UndirectedGraph) -> float:
    """Edge count of the shortest cycle; inf for forests. Assumes no parallel edges."""
    adj = [[v for v, _ in nbrs] for nbrs in _undirected_adj(graph)]
    best = INF
    for s in range(graph.node_count):
        dist = {s: 0}
        parent = {s: None}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif parent[u] != v:
                    best = min(best, dist[u] + dist[v] + 1)
    return best
