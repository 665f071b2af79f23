"""Bridge detection, bridge girth and polynomial certificates for acyclic systems."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .core import PathSystem, check_valid, consecutive_successors, topological_order

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """The node-expansion budget of an exhaustive search ran out."""

    def __init__(self, budget: int):
        super().__init__(f"search exceeded work limit of {budget} expansions")
        self.budget = budget


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class BridgeWitness:
    river: int
    arcs: tuple[int, ...]
    nodes: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class TwoCycle:
    u: int
    v: int
    first: int  # path with u before v
    second: int  # path with v before u


@dataclass(frozen=True)
class Certificate:
    """Outcome of a certificate check.

    ``ok`` means bridge-free (or ordered-bridge-free). Otherwise ``path`` is
    the river index, ``u``/``v`` the river pair that is reachable without
    the river, and ``witness`` an explicit bridge when one was reconstructed.
    """

    ok: bool
    path: int | None = None
    u: int | None = None
    v: int | None = None
    witness: BridgeWitness | None = None


def _positions(system: PathSystem) -> list[dict[int, int]]:
    return [{v: i for i, v in enumerate(path)} for path in system.paths]


def validate_bridge(system: PathSystem, witness: BridgeWitness, ordered: bool | None = None) -> bool:
    """Check a witness against the bridge definition.

    With ``ordered`` (defaulting to the system's flag) the river must also come
    after every arc in path order.
    """
    p = system.path_count
    indices = (witness.river, *witness.arcs)
    for i in indices:
        if not 0 <= i < p:
            raise IndexError(f"path index {i} out of range")
    for v in witness.nodes:
        if not 0 <= v < system.node_count:
            raise IndexError(f"node {v} out of range")
    b = len(witness.nodes)
    if b < 2 or len(witness.arcs) != b - 1:
        return False
    if len(set(indices)) != len(indices) or len(set(witness.nodes)) != b:
        return False
    if ordered is None:
        ordered = system.ordered
    if ordered and any(a > witness.river for a in witness.arcs):
        return False
    pos = _positions(system)
    for i, arc in enumerate(witness.arcs):
        a, c = witness.nodes[i], witness.nodes[i + 1]
        if a not in pos[arc] or c not in pos[arc] or pos[arc][a] >= pos[arc][c]:
            return False
    river = pos[witness.river]
    first, last = witness.nodes[0], witness.nodes[-1]
    return first in river and last in river and river[first] < river[last]


def find_two_bridges(system: PathSystem) -> BridgeWitness | None:
    """Lowest pair of paths sharing two nodes in the same relative order.

    The witness uses the earlier path as arc and the later one as river, so it
    is also a valid ordered bridge.
    """
    pos = _positions(system)
    node_paths: list[list[int]] = [[] for _ in range(system.node_count)]
    for j, path in enumerate(system.paths):
        for v in path:
            node_paths[v].append(j)
    for j, path in enumerate(system.paths):
        # for each earlier path i, the positions on i of the common nodes, in j-order
        seen: dict[int, list[int]] = {}
        for v in path:
            for i in node_paths[v]:
                if i < j:
                    seen.setdefault(i, []).append(v)
        for i in sorted(seen):
            common = seen[i]
            best = None
            # an increasing pair in the sequence of i-positions
            lowest = common[0]
            for v in common[1:]:
                if pos[i][v] > pos[i][lowest]:
                    best = (lowest, v)
                    break
                lowest = v
            if best is not None:
                return BridgeWitness(river=j, arcs=(i,), nodes=best)
    return None


def find_two_cycles(system: PathSystem) -> TwoCycle | None:
    """Two nodes that appear in opposite orders on two paths."""
    order_seen: dict[tuple[int, int], int] = {}
    for j, path in enumerate(system.paths):
        for a in range(len(path)):
            for c in range(a + 1, len(path)):
                u, v = path[a], path[c]
                if (v, u) in order_seen:
                    i = order_seen[(v, u)]
                    return TwoCycle(u=v, v=u, first=i, second=j)
                order_seen.setdefault((u, v), j)
    return None


def find_bridge_upto(
    system: PathSystem,
    kmax: int,
    ordered: bool | None = None,
    budget: int = DEFAULT_BUDGET,
) -> BridgeWitness | None:
    """A minimum-size bridge with at most ``kmax`` nodes, or ``None``.

    Iterative deepening on the bridge size; within a size, rivers and then
    river positions are tried in index order, so the witness is deterministic.
    """
    if kmax < 2:
        raise ValueError("kmax must be at least 2")
    check_valid(system)
    if ordered is None:
        ordered = system.ordered
    pos = _positions(system)
    occurrences: list[list[tuple[int, int]]] = [[] for _ in range(system.node_count)]
    for j, path in enumerate(system.paths):
        for i, v in enumerate(path):
            occurrences[v].append((j, i))
    paths = system.paths
    work = [0]

    def chain(x: int, target: int, arcs_left: int, used_paths: set, used_nodes: set, arcs, nodes, river):
        # extend from x with `arcs_left` more arcs, ending exactly at target
        work[0] += 1
        if work[0] > budget:
            raise BudgetExceeded(budget)
        for j, i in occurrences[x]:
            if j in used_paths or (ordered and j > river):
                continue
            path = paths[j]
            if arcs_left == 1:
                t = pos[j].get(target)
                if t is not None and t > i:
                    return arcs + [j], nodes + [target]
                continue
            used_paths.add(j)
            for y in path[i + 1 :]:
                if y in used_nodes or y == target:
                    continue
                used_nodes.add(y)
                found = chain(y, target, arcs_left - 1, used_paths, used_nodes, arcs + [j], nodes + [y], river)
                used_nodes.discard(y)
                if found is not None:
                    used_paths.discard(j)
                    return found
            used_paths.discard(j)
        return None

    bmax = min(kmax, system.node_count, system.path_count)
    for b in range(2, bmax + 1):
        for r, river in enumerate(paths):
            for a in range(len(river)):
                for c in range(a + 1, len(river)):
                    v1, vb = river[a], river[c]
                    found = chain(v1, vb, b - 1, {r}, {v1, vb}, [], [v1], r)
                    if found is not None:
                        arcs, nodes = found
                        return BridgeWitness(river=r, arcs=tuple(arcs), nodes=tuple(nodes))
    return None


def bridge_girth(
    system: PathSystem, kmax: int, ordered: bool | None = None, budget: int = DEFAULT_BUDGET
) -> int | None:
    """Smallest bridge size up to ``kmax``; ``None`` stands for "greater than kmax"."""
    witness = find_bridge_upto(system, kmax, ordered, budget)
    return None if witness is None else witness.size


def _require_acyclic(system: PathSystem) -> tuple[int, ...]:
    order = topological_order(system).order
    if order is None:
        raise PreconditionError("system is not acyclic; use find_bridge_upto instead")
    return order


def _closures(succ: list[list[int]], order: tuple[int, ...]) -> list[int]:
    # reach[v] is a bitset of nodes reachable from v, v included
    reach = [0] * len(succ)
    for v in reversed(order):
        mask = 1 << v
        for w in succ[v]:
            mask |= reach[w]
        reach[v] = mask
    return reach


def _path_label(system: PathSystem, forbid: int | None, allowed=None) -> dict[tuple[int, int], int]:
    label: dict[tuple[int, int], int] = {}
    for j, path in enumerate(system.paths):
        if j == forbid or (allowed is not None and not allowed(j)):
            continue
        for e in zip(path, path[1:]):
            label.setdefault(e, j)
    return label


def _witness_from_walk(system: PathSystem, walk: list[int], river: int, label: dict) -> BridgeWitness:
    """Turn a simple forward walk into a bridge by merging and shortcutting arc runs."""
    runs = [[label[(a, c)], k, k + 1] for k, (a, c) in enumerate(zip(walk, walk[1:]))]
    changed = True
    while changed:
        changed = False
        first_at: dict[int, int] = {}
        for idx, run in enumerate(runs):
            j = run[0]
            if j in first_at:
                start = first_at[j]
                runs[start : idx + 1] = [[j, runs[start][1], run[2]]]
                changed = True
                break
            first_at[j] = idx
    nodes = [walk[runs[0][1]]] + [walk[run[2]] for run in runs]
    return BridgeWitness(river=river, arcs=tuple(run[0] for run in runs), nodes=tuple(nodes))


def _bfs_to_targets(succ, start_edges, blocked_edge, targets: set[int], allowed_node) -> list[int] | None:
    """BFS from the heads of ``start_edges``; returns the walk (starting at the tail) to the first target."""
    parent: dict[int, int] = {}
    queue: deque[int] = deque()
    for u, w in start_edges:
        if w not in parent:
            parent[w] = u
            queue.append(w)
    while queue:
        x = queue.popleft()
        if x in targets:
            walk = [x]
            while walk[-1] in parent:
                walk.append(parent[walk[-1]])
            return walk[::-1]
        for y in succ[x]:
            if y not in parent and not blocked_edge(x, y) and allowed_node(y):
                parent[y] = x
                queue.append(y)
    return None


def certify_bridge_free_acyclic(system: PathSystem) -> Certificate:
    """Polynomial bridge-freeness check for acyclic systems.

    A 2-bridge is checked first. Otherwise, a pair u before v on a path is
    reachable in the consecutive-pair digraph without that path's edges iff the
    system has a bridge with that river.
    """
    check_valid(system)
    order = _require_acyclic(system)
    two = find_two_bridges(system)
    if two is not None:
        return Certificate(False, two.river, two.nodes[0], two.nodes[1], two)
    succ = consecutive_successors(system)
    reach = _closures(succ, order)
    label = _path_label(system, None)
    for r, river in enumerate(system.paths):
        on_river = 0
        for v in river:
            on_river |= 1 << v
        river_nodes = set(river)
        river_edges = set(zip(river, river[1:]))
        for u in river:
            starts = [(u, w) for w in succ[u] if (u, w) not in river_edges and reach[w] & on_river]
            if not starts:
                continue
            walk = _bfs_to_targets(
                succ,
                starts,
                lambda a, c: (a, c) in river_edges,
                river_nodes,
                lambda y: True,
            )
            assert walk is not None
            witness = _witness_from_walk(system, walk, r, label)
            return Certificate(False, r, walk[0], walk[-1], witness)
    return Certificate(True)


def certify_ordered_bridge_free_acyclic(system: PathSystem) -> Certificate:
    """Ordered analogue: for each path, no pair on it is connected using only earlier paths."""
    check_valid(system)
    _require_acyclic(system)
    n = system.node_count
    succ: list[list[int]] = [[] for _ in range(n)]
    seen: set[tuple[int, int]] = set()
    label: dict[tuple[int, int], int] = {}
    for i, path in enumerate(system.paths):
        if len(path) >= 2:
            river_nodes = set(path)
            # multi-source search from each node of the path over edges of earlier paths
            owner = {v: v for v in path}
            queue = deque(path)
            hit = None
            while queue and hit is None:
                x = queue.popleft()
                for y in succ[x]:
                    if y in river_nodes:
                        # owner[x] reaches y; in a DAG with path order agreeing this is a forward pair
                        hit = (x, y)
                        break
                    if y not in owner:
                        owner[y] = owner[x]
                        queue.append(y)
            if hit is not None:
                x, y = hit
                start = owner[x]
                walk = _walk_back(succ, start, x, i, label) + [y]
                witness = _witness_from_walk(system, walk, i, label)
                return Certificate(False, i, start, y, witness)
        for e in zip(path, path[1:]):
            if e not in seen:
                seen.add(e)
                succ[e[0]].append(e[1])
            label.setdefault(e, i)
    return Certificate(True)


def _walk_back(succ, start: int, end: int, limit: int, label) -> list[int]:
    # BFS from start to end over the edges labelled by paths < limit
    parent = {start: start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        if x == end:
            break
        for y in succ[x]:
            if y not in parent:
                parent[y] = x
                queue.append(y)
    walk = [end]
    while walk[-1] != start:
        walk.append(parent[walk[-1]])
    return walk[::-1]
