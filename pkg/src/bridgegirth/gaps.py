"""Integrality-gap instances: the typed product graph for vertex multicut,
node splitting, and the Directed Steiner Forest instance."""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .bridges import PreconditionError, certify_bridge_free_acyclic
from .core import ParseError, PathSystem, check_valid, is_acyclic
from .reductions import WeightedDigraphInstance


class ResourceLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class GapInstance:
    """Typed directed multigraph with terminals and typed demand pairs.

    ``edges`` holds (u, v, type) triples; the same ordered pair may appear
    with different types. Types run from 1 to d.
    """

    node_count: int
    edges: tuple[tuple[int, int, int], ...]
    terminals: frozenset[int]
    demands: tuple[tuple[int, int], ...]
    demand_types: tuple[int, ...]
    d: int
    d_prime: int = 1
    width: int = 0
    N: int = 0  # nonterminal count
    labels: dict = field(default_factory=dict, compare=False)  # node -> readable label

    @property
    def nonterminals(self) -> list[int]:
        return [v for v in range(self.node_count) if v not in self.terminals]

    def succ(self, only_type: int | None = None) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.node_count)]
        seen = set()
        for u, v, i in self.edges:
            if only_type is not None and i != only_type:
                continue
            if (u, v) not in seen:
                seen.add((u, v))
                out[u].append(v)
        return out


def _reach(succ: list[list[int]], s: int, blocked=frozenset()) -> set[int]:
    seen = {s}
    stack = [s]
    while stack:
        u = stack.pop()
        for v in succ[u]:
            if v not in seen and v not in blocked:
                seen.add(v)
                stack.append(v)
    return seen


def _reverse(succ: list[list[int]]) -> list[list[int]]:
    pred: list[list[int]] = [[] for _ in succ]
    for u, vs in enumerate(succ):
        for v in vs:
            pred[v].append(u)
    return pred


@dataclass(frozen=True)
class PartitionReport:
    parts: tuple[tuple[int, ...], ...]
    coverage: tuple[int, ...]  # nodes touched by each part
    large_parts: int  # parts touching at least n/4 nodes


def partition_paths(system: PathSystem, d: int, seed: int | None = None) -> PartitionReport:
    """Split the paths uniformly at random into d parts of sizes floor/ceil(p/d)."""
    p = system.path_count
    if not 1 <= d <= p:
        raise ValueError(f"need 1 <= d <= p, got d={d}, p={p}")
    order = list(range(p))
    random.Random(seed).shuffle(order)
    base, extra = divmod(p, d)
    parts, start = [], 0
    for i in range(d):
        size = base + (1 if i < extra else 0)
        parts.append(tuple(sorted(order[start : start + size])))
        start += size
    coverage = tuple(len({v for j in part for v in system.paths[j]}) for part in parts)
    large = sum(1 for c in coverage if 4 * c >= system.node_count)
    return PartitionReport(tuple(parts), coverage, large)


def build_gs(system: PathSystem, parts: Sequence[Sequence[int]]) -> GapInstance:
    """Transitive-closure edges of every path in part i get type i; each path gets a terminal pair.

    Terminals s_{i,j}, t_{i,j} follow the n system nodes, in part order.
    """
    check_valid(system)
    used = sorted(j for part in parts for j in part)
    if used != sorted(set(used)):
        raise ValueError("parts overlap")
    n = system.node_count
    typed: dict[tuple[int, int], int] = {}
    edges: list[tuple[int, int, int]] = []
    demands, demand_types = [], []
    labels = {}
    next_id = n
    for i, part in enumerate(parts, start=1):
        for jj, j in enumerate(part, start=1):
            path = system.paths[j]
            if not path:
                raise ValueError(f"path {j} is empty")
            for a, c in combinations(range(len(path)), 2):
                e = (path[a], path[c])
                if e in typed:
                    raise ValueError(f"closure edge {e} claimed twice (the system has a 2-bridge)")
                typed[e] = i
                edges.append((e[0], e[1], i))
            s, t = next_id, next_id + 1
            next_id += 2
            labels[s], labels[t] = f"s{i},{jj}", f"t{i},{jj}"
            edges.append((s, path[0], i))
            edges.append((path[-1], t, i))
            demands.append((s, t))
            demand_types.append(i)
    return GapInstance(
        node_count=next_id,
        edges=tuple(edges),
        terminals=frozenset(range(n, next_id)),
        demands=tuple(demands),
        demand_types=tuple(demand_types),
        d=len(parts),
        N=n,
        labels=labels,
    )


def h_parameters(d: int) -> tuple[int, int]:
    """(layer count d', layer width) for the random layered graph."""
    width = math.ceil(math.log2(d))
    return max(1, d // (2 * width)), width


def build_h(d: int, seed: int | None = None) -> GapInstance:
    """Union over i of a random layered graph H_i on nonterminals 0..d-1.

    H_i has d' layers of ``width`` distinct nodes each, chosen without
    replacement, with s_i -> first layer, complete bipartite edges between
    consecutive layers and last layer -> t_i, all of type i.
    """
    if d < 4:
        raise ValueError("d must be at least 4")
    d_prime, width = h_parameters(d)
    if d_prime * width > d // 2 and d_prime > 1:
        raise AssertionError("layers exceed half the nonterminals")
    rng = random.Random(seed)
    edges = []
    demands, demand_types = [], []
    labels = {}
    for i in range(1, d + 1):
        s, t = d + 2 * (i - 1), d + 2 * (i - 1) + 1
        labels[s], labels[t] = f"s{i}", f"t{i}"
        remaining = list(range(d))
        layers = []
        for _ in range(d_prime):
            layer = rng.sample(remaining, width)
            chosen = set(layer)
            remaining = [v for v in remaining if v not in chosen]
            layers.append(sorted(layer))
        edges += [(s, v, i) for v in layers[0]]
        for a, b in zip(layers, layers[1:]):
            edges += [(u, v, i) for u in a for v in b]
        edges += [(v, t, i) for v in layers[-1]]
        demands.append((s, t))
        demand_types.append(i)
    return GapInstance(
        node_count=3 * d,
        edges=tuple(edges),
        terminals=frozenset(range(d, 3 * d)),
        demands=tuple(demands),
        demand_types=tuple(demand_types),
        d=d,
        d_prime=d_prime,
        width=width,
        N=d,
        labels=labels,
    )


def build_product(gs: GapInstance, h: GapInstance) -> GapInstance:
    """Typed product: nonterminals V_H x V_S, terminals those of G_S.

    An edge of type i joins (x, x') to (y, y') when (x, y) and (x', y') are
    both type-i edges; terminal edges pair H's s_i/t_i edges with G_S's
    s_{i,j}/t_{i,j} edges.
    """
    if gs.d != h.d:
        raise ValueError(f"type ranges differ: {gs.d} vs {h.d}")
    hv, sv = h.nonterminals, gs.nonterminals
    s_index = {v: k for k, v in enumerate(sv)}
    N = len(hv) * len(sv)

    def pid(x: int, xs: int) -> int:
        return x * len(sv) + s_index[xs]

    term_id = {t: N + k for k, t in enumerate(sorted(gs.terminals))}
    h_by_type: dict[int, list[tuple[int, int]]] = {}
    for u, v, i in h.edges:
        h_by_type.setdefault(i, []).append((u, v))
    s_by_type: dict[int, list[tuple[int, int]]] = {}
    for u, v, i in gs.edges:
        s_by_type.setdefault(i, []).append((u, v))
    h_source = {h.demand_types[k]: s for k, (s, _) in enumerate(h.demands)}
    h_sink = {h.demand_types[k]: t for k, (_, t) in enumerate(h.demands)}

    edges = []
    for i in range(1, gs.d + 1):
        h_edges = h_by_type.get(i, [])
        s_edges = s_by_type.get(i, [])
        h_inner = [(x, y) for x, y in h_edges if x not in h.terminals and y not in h.terminals]
        h_out = [y for x, y in h_edges if x == h_source.get(i)]
        h_in = [x for x, y in h_edges if y == h_sink.get(i)]
        for a, b in s_edges:
            if a in gs.terminals:
                edges += [(term_id[a], pid(x, b), i) for x in h_out]
            elif b in gs.terminals:
                edges += [(pid(x, a), term_id[b], i) for x in h_in]
            else:
                edges += [(pid(x, a), pid(y, b), i) for x, y in h_inner]
    labels = {term_id[t]: gs.labels.get(t, str(t)) for t in gs.terminals}
    return GapInstance(
        node_count=N + len(gs.terminals),
        edges=tuple(edges),
        terminals=frozenset(term_id.values()),
        demands=tuple((term_id[s], term_id[t]) for s, t in gs.demands),
        demand_types=gs.demand_types,
        d=gs.d,
        d_prime=h.d_prime,
        width=h.width,
        N=N,
        labels=labels,
    )


@dataclass(frozen=True)
class LongPathReport:
    min_nonterminals: float  # over reachable demands; inf if none is reachable
    min_canonical: float  # same, restricted to single-type paths
    per_demand: tuple[float, ...]
    unreachable: tuple[int, ...]
    non_canonical: tuple[int, ...]  # demands with some path using a foreign edge type
    fractional_value: Fraction  # N / d'
    feasible: bool  # x_v = 1/d' covers every demand path


def _min_nonterminals(g: GapInstance, succ: list[list[int]], s: int, t: int) -> float:
    # 0-1 BFS; entering a nonterminal costs 1
    dist = {s: 0}
    dq = deque([s])
    while dq:
        u = dq.popleft()
        for v in succ[u]:
            w = 0 if v in g.terminals else 1
            if dist[u] + w < dist.get(v, math.inf):
                dist[v] = dist[u] + w
                (dq.appendleft if w == 0 else dq.append)(v)
    return dist.get(t, math.inf)


def typed_violations(g: GapInstance) -> list[int]:
    """Demands with an s-t path through an edge of a foreign type."""
    succ = g.succ()
    pred = _reverse(succ)
    bad = []
    for k, (s, t) in enumerate(g.demands):
        ahead = _reach(succ, s)
        behind = _reach(pred, t)
        i = g.demand_types[k]
        if any(j != i and u in ahead and v in behind for u, v, j in g.edges):
            bad.append(k)
    return bad


def check_long_paths(g: GapInstance) -> LongPathReport:
    succ = g.succ()
    typed = {i: g.succ(i) for i in set(g.demand_types)}
    per, canon, unreachable = [], [], []
    for k, (s, t) in enumerate(g.demands):
        c = _min_nonterminals(g, succ, s, t)
        per.append(c)
        canon.append(_min_nonterminals(g, typed[g.demand_types[k]], s, t))
        if c == math.inf:
            unreachable.append(k)
    reachable = [c for c in per if c != math.inf]
    minimum = min(reachable, default=math.inf)
    d_prime = max(1, g.d_prime)
    return LongPathReport(
        min_nonterminals=minimum,
        min_canonical=min((c for c in canon if c != math.inf), default=math.inf),
        per_demand=tuple(per),
        unreachable=tuple(unreachable),
        non_canonical=tuple(typed_violations(g)),
        fractional_value=Fraction(g.N, d_prime),
        feasible=all(c >= d_prime for c in reachable),
    )


def _relevant_nonterminals(node_count, succ, terminals, demands) -> list[int]:
    pred = _reverse(succ)
    relevant = set()
    for s, t in demands:
        ahead = _reach(succ, s)
        if t not in ahead:
            continue
        relevant |= ahead & _reach(pred, t)
    return sorted(v for v in relevant if v not in terminals)


def brute_force_vertex_multicut(
    g: GapInstance, limit: int = 22
) -> tuple[int, tuple[int, ...]]:
    """Exact minimum set of nonterminals whose removal disconnects every demand."""
    succ = g.succ()
    candidates = _relevant_nonterminals(g.node_count, succ, g.terminals, g.demands)
    if len(candidates) > limit:
        raise ResourceLimitError(f"{len(candidates)} relevant nonterminals exceed the limit of {limit}")
    live = [(s, t) for s, t in g.demands if t in _reach(succ, s)]
    for size in range(len(candidates) + 1):
        for cut in combinations(candidates, size):
            blocked = frozenset(cut)
            if all(t not in _reach(succ, s, blocked) for s, t in live):
                return size, cut
    raise AssertionError("removing every relevant nonterminal must disconnect all demands")


def disjoint_path_packing(g: GapInstance) -> int:
    """Greedy count of demands routable on pairwise nonterminal-disjoint paths.

    Every multicut must hit each packed path in a distinct node, so this is a
    lower bound on the integral multicut.
    """
    succ = g.succ()
    used: set[int] = set()
    packed = 0
    for s, t in g.demands:
        parent = {s: None}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if u == t:
                break
            for v in succ[u]:
                if v not in parent and v not in used:
                    parent[v] = u
                    queue.append(v)
        if t in parent:
            packed += 1
            v = t
            while v is not None:
                if v not in g.terminals:
                    used.add(v)
                v = parent[v]
    return packed


@dataclass(frozen=True)
class BigMulticutReport:
    max_set_size: int
    sets_checked: int
    worst_disconnected: int  # largest number of pairs some small set disconnects inside their own H_i
    threshold: float  # (1 - eps) d
    sets_over_threshold: int


def big_multicut_report(h: GapInstance, eps: float = 0.5) -> BigMulticutReport:
    """Enumerate nonterminal sets of size <= d/16 and count the pairs each one cuts in H_i."""
    size_cap = h.d // 16
    per_type = {i: h.succ(i) for i in range(1, h.d + 1)}
    worst, checked, over = 0, 0, 0
    threshold = (1 - eps) * h.d
    for size in range(size_cap + 1):
        for cut in combinations(h.nonterminals, size):
            blocked = frozenset(cut)
            cut_pairs = sum(
                1
                for k, (s, t) in enumerate(h.demands)
                if t not in _reach(per_type[h.demand_types[k]], s, blocked)
            )
            checked += 1
            worst = max(worst, cut_pairs)
            over += cut_pairs > threshold
    return BigMulticutReport(size_cap, checked, worst, threshold, over)


@dataclass(frozen=True)
class SplitGraph:
    instance: WeightedDigraphInstance  # weight 1 on (v+, v-) for nonterminals, 0 elsewhere
    inlet: dict[int, int]  # original node -> node receiving its in-edges
    outlet: dict[int, int]  # original node -> node emitting its out-edges


def node_split(node_count: int, edges: Iterable[Sequence[int]], terminals: Iterable[int] = ()) -> SplitGraph:
    """Replace each nonterminal v by an edge (v+, v-) of weight 1."""
    terminals = set(terminals)
    inlet, outlet = {}, {}
    out_edges = []
    next_id = 0
    for v in range(node_count):
        if v in terminals:
            inlet[v] = outlet[v] = next_id
            next_id += 1
        else:
            inlet[v], outlet[v] = next_id, next_id + 1
            out_edges.append((next_id, next_id + 1, 1))
            next_id += 2
    seen = set()
    for e in edges:
        a, b = outlet[e[0]], inlet[e[1]]
        if (a, b) not in seen:
            seen.add((a, b))
            out_edges.append((a, b, 0))
    return SplitGraph(WeightedDigraphInstance(next_id, tuple(out_edges)), inlet, outlet)


def max_flow(node_count: int, capacities: dict[tuple[int, int], int], s: int, t: int) -> int:
    """Edmonds-Karp on an edge-capacitated digraph."""
    residual: dict[int, dict[int, int]] = {v: {} for v in range(node_count)}
    for (u, v), c in capacities.items():
        residual[u][v] = residual[u].get(v, 0) + c
        residual[v].setdefault(u, 0)
    flow = 0
    while True:
        parent = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for v, c in residual[u].items():
                if c > 0 and v not in parent:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            return flow
        bottleneck = math.inf
        v = t
        while parent[v] is not None:
            bottleneck = min(bottleneck, residual[parent[v]][v])
            v = parent[v]
        v = t
        while parent[v] is not None:
            u = parent[v]
            residual[u][v] -= bottleneck
            residual[v][u] += bottleneck
            v = u
        flow += bottleneck


def max_node_disjoint_paths(node_count: int, edges: Iterable[Sequence[int]], s: int, t: int) -> int:
    """Maximum number of internally vertex-disjoint s-t paths, via unit node capacities."""
    if s == t:
        raise ValueError("s and t must differ")
    edges = list(edges)
    split = node_split(node_count, edges, terminals={s, t})
    caps = {}
    for u, v, w in split.instance.edges:
        caps[(u, v)] = 1  # internal edges carry the node capacity, original edges are simple
    return max_flow(split.instance.node_count, caps, split.inlet[s], split.outlet[t])


@dataclass(frozen=True)
class DsfInstance:
    node_count: int
    edges: tuple[tuple[int, int], ...]
    sources: tuple[int, ...]
    sink_of: dict[int, int]  # x -> y_x
    families: dict[int, tuple[int, ...]]  # x -> indices of the paths starting at x
    terminals: frozenset[int]

    @property
    def demands(self) -> tuple[tuple[int, int], ...]:
        return tuple((x, self.sink_of[x]) for x in self.sources)


def is_source_restricted(system: PathSystem, X: Iterable[int]) -> bool:
    X = set(X)
    return all(not p or (p[0] in X and not any(v in X for v in p[1:])) for p in system.paths)


def build_dsf_instance(system: PathSystem, X: Iterable[int]) -> DsfInstance:
    """Directed Steiner Forest instance: path edges plus a sink y_x fed by the last node of every path from x.

    Paths with fewer than two nodes carry no edge and are ignored.
    """
    check_valid(system)
    X = sorted(set(X))
    if not is_source_restricted(system, X):
        raise PreconditionError("system is not source-restricted with respect to X")
    if not is_acyclic(system) or not certify_bridge_free_acyclic(system).ok:
        raise PreconditionError("system is not certified bridge-free")
    n = system.node_count
    sink_of = {x: n + k for k, x in enumerate(X)}
    families: dict[int, list[int]] = {x: [] for x in X}
    edges = set()
    for j, path in enumerate(system.paths):
        if len(path) < 2:
            continue
        families[path[0]].append(j)
        edges.update(zip(path, path[1:]))
        edges.add((path[-1], sink_of[path[0]]))
    return DsfInstance(
        node_count=n + len(X),
        edges=tuple(sorted(edges)),
        sources=tuple(X),
        sink_of=sink_of,
        families={x: tuple(js) for x, js in families.items()},
        terminals=frozenset(X) | frozenset(sink_of.values()),
    )


def dsf_disjoint_counts(inst: DsfInstance) -> dict[int, int]:
    return {
        x: max_node_disjoint_paths(inst.node_count, inst.edges, x, inst.sink_of[x]) for x in inst.sources
    }


def simple_paths(node_count: int, edges: Iterable[Sequence[int]], s: int, t: int, limit: int = 100000) -> list[list[int]]:
    succ: list[list[int]] = [[] for _ in range(node_count)]
    for e in edges:
        succ[e[0]].append(e[1])
    found: list[list[int]] = []
    stack = [(s, [s])]
    while stack:
        u, path = stack.pop()
        if u == t:
            found.append(path)
            if len(found) > limit:
                raise ResourceLimitError("too many simple paths")
            continue
        for v in succ[u]:
            if v not in path:
                stack.append((v, path + [v]))
    return found


def check_dsf_routes(system: PathSystem, inst: DsfInstance) -> list[tuple[int, list[int]]]:
    """Routes x ~> y_x that contain no path of the family of x as a subsequence."""
    bad = []
    for x in inst.sources:
        family = [system.paths[j] for j in inst.families[x]]
        for route in simple_paths(inst.node_count, inst.edges, x, inst.sink_of[x]):
            if not any(_is_subsequence(p, route) for p in family):
                bad.append((x, route))
    return bad


def _is_subsequence(small: Sequence[int], big: Sequence[int]) -> bool:
    it = iter(big)
    return all(any(v == w for w in it) for v in small)


def serialize_gap(g: GapInstance) -> str:
    lines = ["digraph 1", f"nodes {g.node_count}"]
    lines += [f"param d {g.d}", f"param d_prime {g.d_prime}", f"param width {g.width}", f"param N {g.N}"]
    lines += [f"terminal {v}" for v in sorted(g.terminals)]
    for k, (u, v, i) in enumerate(g.edges):
        lines.append(f"edge {u} {v} 1")
        lines.append(f"type {k} {i}")
    for (s, t), i in zip(g.demands, g.demand_types):
        lines.append(f"demand {s} {t}")
        lines.append(f"demand-type {i}")
    return "\n".join(lines) + "\n"


def parse_gap(text: str) -> GapInstance:
    n = None
    params = {}
    terminals, edges, types, demands, demand_types = set(), [], {}, [], []
    header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        key = tokens[0]
        try:
            if not header:
                if tokens != ["digraph", "1"]:
                    raise ParseError(lineno, "expected 'digraph 1'")
                header = True
            elif n is None:
                if key != "nodes" or len(tokens) != 2:
                    raise ParseError(lineno, "expected 'nodes <n>'")
                n = int(tokens[1])
            elif key == "param" and len(tokens) == 3:
                params[tokens[1]] = int(tokens[2])
            elif key == "terminal" and len(tokens) == 2:
                terminals.add(int(tokens[1]))
            elif key == "edge" and len(tokens) == 4:
                edges.append((int(tokens[1]), int(tokens[2])))
            elif key == "type" and len(tokens) == 3:
                types[int(tokens[1])] = int(tokens[2])
            elif key == "demand" and len(tokens) == 3:
                demands.append((int(tokens[1]), int(tokens[2])))
            elif key == "demand-type" and len(tokens) == 2:
                demand_types.append(int(tokens[1]))
            else:
                raise ParseError(lineno, f"malformed record '{line}'")
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(lineno, "non-integer token") from None
    if n is None:
        raise ParseError(0, "truncated header")
    if len(types) != len(edges) or len(demand_types) != len(demands):
        raise ParseError(0, "every edge and demand needs a type")
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(0, f"edge {u}->{v} out of range")
    return GapInstance(
        node_count=n,
        edges=tuple((u, v, types[k]) for k, (u, v) in enumerate(edges)),
        terminals=frozenset(terminals),
        demands=tuple(demands),
        demand_types=tuple(demand_types),
        d=params.get("d", 0),
        d_prime=params.get("d_prime", 1),
        width=params.get("width", 0),
        N=params.get("N", n - len(terminals)),
    )
