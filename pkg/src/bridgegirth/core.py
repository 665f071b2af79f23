"""Path systems: data model, statistics, validation and the text format."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class ParseError(ValueError):
    """Malformed text input. Carries the 1-based line number."""

    def __init__(self, lineno: int, reason: str):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason


class InvalidSystemError(ValueError):
    pass


@dataclass(frozen=True)
class PathSystem:
    """A node ground set ``0..node_count-1`` and a multiset of node sequences.

    When ``ordered`` is set, the order of ``paths`` is the total order of the
    system (later paths may serve as rivers for earlier arcs).
    """

    node_count: int
    paths: tuple[tuple[int, ...], ...] = ()
    ordered: bool = False

    def __post_init__(self):
        object.__setattr__(self, "paths", tuple(tuple(int(v) for v in p) for p in self.paths))

    @property
    def path_count(self) -> int:
        return len(self.paths)

    @property
    def size(self) -> int:
        return sum(len(p) for p in self.paths)

    def degrees(self) -> list[int]:
        deg = [0] * self.node_count
        for path in self.paths:
            for v in path:
                deg[v] += 1
        return deg

    def with_order(self, ordered: bool = True) -> PathSystem:
        return PathSystem(self.node_count, self.paths, ordered)

    def with_paths(self, paths: Iterable[Sequence[int]]) -> PathSystem:
        return PathSystem(self.node_count, tuple(tuple(p) for p in paths), self.ordered)


def OrderedPathSystem(node_count: int, paths: Iterable[Sequence[int]]) -> PathSystem:
    """Shorthand for a :class:`PathSystem` whose list order is significant."""
    return PathSystem(node_count, tuple(tuple(p) for p in paths), ordered=True)


@dataclass(frozen=True)
class SystemStats:
    node_count: int
    path_count: int
    size: int
    avg_degree: Fraction
    avg_length: Fraction
    min_degree: int
    max_degree: int
    min_length: int
    max_length: int
    l2_norm_sq: int
    acyclic: bool


def validate(system: PathSystem) -> str | None:
    """Return ``None`` if the system is valid, else a description of the first violation."""
    n = system.node_count
    if n < 0:
        return f"negative node count {n}"
    for i, path in enumerate(system.paths):
        seen = set()
        for v in path:
            if v < 0 or v >= n:
                return f"node {v} out of range in path {i}"
            if v in seen:
                return f"repeated node {v} in path {i}"
            seen.add(v)
    return None


def check_valid(system: PathSystem) -> PathSystem:
    problem = validate(system)
    if problem is not None:
        raise InvalidSystemError(problem)
    return system


def stats(system: PathSystem) -> SystemStats:
    check_valid(system)
    n, p = system.node_count, system.path_count
    size = system.size
    deg = system.degrees()
    lengths = [len(path) for path in system.paths]
    return SystemStats(
        node_count=n,
        path_count=p,
        size=size,
        avg_degree=Fraction(size, n) if n else Fraction(0),
        avg_length=Fraction(size, p) if p else Fraction(0),
        min_degree=min(deg, default=0),
        max_degree=max(deg, default=0),
        min_length=min(lengths, default=0),
        max_length=max(lengths, default=0),
        l2_norm_sq=sum(x * x for x in lengths),
        acyclic=topological_order(system).order is not None,
    )


def consecutive_successors(system: PathSystem) -> list[list[int]]:
    """Adjacency lists of the consecutive-pair digraph (deduplicated, first-seen order)."""
    succ: list[list[int]] = [[] for _ in range(system.node_count)]
    seen: set[tuple[int, int]] = set()
    for path in system.paths:
        for u, v in zip(path, path[1:]):
            if (u, v) not in seen:
                seen.add((u, v))
                succ[u].append(v)
    return succ


@dataclass(frozen=True)
class TopoResult:
    order: tuple[int, ...] | None
    cycle: tuple[int, ...] | None = None  # v0 -> v1 -> ... -> v0 (first node not repeated)


def topological_order(system: PathSystem) -> TopoResult:
    """Node order consistent with every path, or a directed cycle of forward hops."""
    succ = consecutive_successors(system)
    n = system.node_count
    indeg = [0] * n
    for u in range(n):
        for v in succ[u]:
            indeg[v] += 1
    queue = deque(v for v in range(n) if indeg[v] == 0)
    order = []
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if len(order) == n:
        return TopoResult(tuple(order))
    return TopoResult(None, _find_cycle(succ, [v for v in range(n) if indeg[v] > 0]))


def _find_cycle(succ: list[list[int]], candidates: list[int]) -> tuple[int, ...]:
    # iterative DFS; every candidate lies on or leads to a cycle
    color = {}
    for root in candidates:
        if root in color:
            continue
        stack = [(root, iter(succ[root]))]
        color[root] = 1
        on_stack = [root]
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if color.get(v) == 1:
                    start = on_stack.index(v)
                    cyc = on_stack[start:]
                    k = cyc.index(min(cyc))
                    return tuple(cyc[k:] + cyc[:k])
                if v not in color:
                    color[v] = 1
                    stack.append((v, iter(succ[v])))
                    on_stack.append(v)
                    advanced = True
                    break
            if not advanced:
                color[u] = 2
                stack.pop()
                on_stack.pop()
    raise AssertionError("no cycle among candidates")


def is_acyclic(system: PathSystem) -> bool:
    return topological_order(system).order is not None


def induced_subsystem(
    system: PathSystem, keep: Iterable[int], prune_empty: bool = False
) -> tuple[PathSystem, dict[int, int]]:
    """Restrict every path to ``keep`` and re-index the kept nodes densely.

    Returns the new system and the map old id -> new id.
    """
    kept = sorted(set(keep))
    for v in kept:
        if not 0 <= v < system.node_count:
            raise ValueError(f"node {v} out of range")
    id_map = {v: i for i, v in enumerate(kept)}
    paths = []
    for path in system.paths:
        sub = tuple(id_map[v] for v in path if v in id_map)
        if sub or not prune_empty:
            paths.append(sub)
    return PathSystem(len(kept), tuple(paths), system.ordered), id_map


def serialize(system: PathSystem) -> str:
    lines = ["pathsys 1", f"nodes {system.node_count}", f"ordered {int(system.ordered)}"]
    for path in system.paths:
        lines.append(" ".join(["path", *map(str, path)]))
    return "\n".join(lines) + "\n"


def parse(text: str) -> PathSystem:
    header: dict[str, int] = {}
    paths: list[tuple[int, ...]] = []
    expected = ["pathsys", "nodes", "ordered"]
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        key = tokens[0]
        if len(header) < 3:
            if key != expected[len(header)]:
                raise ParseError(lineno, f"expected '{expected[len(header)]}', got '{key}'")
            if len(tokens) != 2:
                raise ParseError(lineno, f"'{key}' takes exactly one value")
            value = _parse_int(tokens[1], lineno)
            if key == "pathsys" and value != 1:
                raise ParseError(lineno, f"unsupported format version {value}")
            if key == "nodes" and value < 0:
                raise ParseError(lineno, "negative node count")
            if key == "ordered" and value not in (0, 1):
                raise ParseError(lineno, "ordered flag must be 0 or 1")
            header[key] = value
            continue
        if key != "path":
            raise ParseError(lineno, f"unknown record '{key}'")
        path = tuple(_parse_int(tok, lineno) for tok in tokens[1:])
        seen = set()
        for v in path:
            if not 0 <= v < header["nodes"]:
                raise ParseError(lineno, f"node {v} out of range")
            if v in seen:
                raise ParseError(lineno, f"repeated node {v}")
            seen.add(v)
        paths.append(path)
    if len(header) < 3:
        raise ParseError(0, "truncated header")
    return PathSystem(header["nodes"], tuple(paths), bool(header["ordered"]))


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(lineno, f"not an integer: '{token}'") from None
