"""Extremal and baseline path-system constructions."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .core import ParseError, PathSystem, induced_subsystem


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class QuadParams:
    q: int

    def __post_init__(self):
        if self.q < 3 or self.q % 2 == 0 or not is_prime(self.q):
            raise ValueError(f"q must be an odd prime, got {self.q}")


@dataclass(frozen=True)
class LatticeParams:
    n: int
    ell: int

    def __post_init__(self):
        if self.ell < 1 or 2 * self.ell * self.ell > self.n:
            raise ValueError(f"need 1 <= ell and 2*ell^2 <= n, got n={self.n}, ell={self.ell}")


def _block_sizes(total: int, parts: int) -> list[int]:
    base, extra = divmod(total, parts)
    return [base + 1 if i < extra else base for i in range(parts)]


def quad_construction(params: QuadParams | int) -> PathSystem:
    """Quadratic polynomials over F_q as nodes; paths cut from the pencils through each point.

    The q^2 polynomials through a point (x, y) are sorted by their derivative
    at x (ties by coefficient pair) and cut into three contiguous blocks.
    """
    if isinstance(params, int):
        params = QuadParams(params)
    q = params.q
    sizes = _block_sizes(q * q, 3)
    paths = []
    for x in range(q):
        for y in range(q):
            pencil = []
            for a in range(q):
                for b in range(q):
                    c = (y - a * x * x - b * x) % q
                    pencil.append(((2 * a * x + b) % q, a, b, a * q * q + b * q + c))
            pencil.sort()
            start = 0
            for size in sizes:
                paths.append(tuple(item[3] for item in pencil[start : start + size]))
                start += size
    return PathSystem(q**3, tuple(paths))


def lattice_coordinates(params: LatticeParams) -> tuple[int, list[list[tuple[int, int]]]]:
    """Height of the grid and the lattice points of every path, in path order."""
    n, ell = params.n, params.ell
    height = n // ell
    starts = n // (2 * ell)
    slopes = n // (2 * ell * ell)
    if starts == 0 or slopes == 0:
        raise ValueError("empty start or slope set")
    lines = []
    for i in range(1, slopes + 1):
        for y0 in range(1, starts + 1):
            pts = [(1 + k, y0 + k * i) for k in range(ell)]
            for a, b in pts:
                if not (1 <= a <= ell and 1 <= b <= height):
                    raise AssertionError(f"lattice point {(a, b)} out of range")
            lines.append(pts)
    return height, lines


def lattice_construction(params: LatticeParams | tuple[int, int]) -> PathSystem:
    """Ordered system of lattice lines, sorted by increasing slope."""
    if isinstance(params, tuple):
        params = LatticeParams(*params)
    height, lines = lattice_coordinates(params)
    paths = tuple(tuple((a - 1) * height + (b - 1) for a, b in pts) for pts in lines)
    return PathSystem(params.ell * height, paths, ordered=True)


def is_ap_free(values: Iterable[int]) -> bool:
    s = sorted(set(values))
    members = set(s)
    for x, y in combinations(s, 2):
        if 2 * y - x in members:
            return False
    return True


def _greedy_ap_free(m: int) -> set[int]:
    chosen: list[int] = []
    members: set[int] = set()
    for z in range(m):
        # z would be the largest term of x < y < z with x + z = 2y
        if any(2 * y - z in members for y in chosen if 2 * y >= z):
            continue
        chosen.append(z)
        members.add(z)
    return members


def _behrend(m: int) -> set[int]:
    best: set[int] = {0} if m >= 1 else set()
    d = 2
    while (d - 1) ** 2 <= m and d <= m:
        base = 2 * d - 1
        shells: dict[int, set[int]] = {}
        for x in range(m):
            t, norm, ok = x, 0, True
            while t:
                digit = t % base
                if digit >= d:
                    ok = False
                    break
                norm += digit * digit
                t //= base
            if ok:
                shells.setdefault(norm, set()).add(x)
        for shell in shells.values():
            if len(shell) > len(best):
                best = shell
        d += 1
    return best


def ap_free_set(m: int, method: str = "greedy") -> set[int]:
    """A subset of [0, m) without 3-term arithmetic progressions."""
    if m < 1:
        raise ValueError("m must be positive")
    if method == "greedy":
        result = _greedy_ap_free(m)
    elif method == "behrend":
        result = _behrend(m)
    else:
        raise ValueError(f"unknown method {method!r}")
    if not is_ap_free(result):
        raise AssertionError("constructed set contains a 3-term progression")
    return result


def rs_construction(m: int, A: Iterable[int]) -> PathSystem:
    """Three-layer system with a path (x, m+x+a, 3m+x+2a) for x in [0,m), a in A."""
    A = sorted(set(A))
    if any(not 0 <= a < m for a in A):
        raise ValueError("A must lie in [0, m)")
    if not is_ap_free(A):
        raise ValueError("A contains a 3-term arithmetic progression")
    paths = tuple((x, m + x + a, 3 * m + x + 2 * a) for x in range(m) for a in A)
    return PathSystem(6 * m, paths)


@dataclass(frozen=True)
class BipartiteGraph:
    """Left vertices 0..left-1; ``adjacency[r]`` lists the left neighbours of right vertex r."""

    left: int
    adjacency: tuple[tuple[int, ...], ...]


def bipartite_to_path_system(graph: BipartiteGraph) -> PathSystem:
    """One path per right vertex through its neighbourhood in ascending order."""
    return PathSystem(graph.left, tuple(tuple(sorted(set(nbrs))) for nbrs in graph.adjacency))


def parse_bipartite(text: str) -> BipartiteGraph:
    """Text format: ``bipartite 1``, ``left <n>``, then one ``adj <v>...`` line per right vertex."""
    left = None
    seen_header = False
    adjacency = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        try:
            values = [int(t) for t in tokens[1:]]
        except ValueError:
            raise ParseError(lineno, "non-integer token") from None
        if not seen_header:
            if tokens[0] != "bipartite" or values != [1]:
                raise ParseError(lineno, "expected 'bipartite 1'")
            seen_header = True
        elif left is None:
            if tokens[0] != "left" or len(values) != 1 or values[0] < 0:
                raise ParseError(lineno, "expected 'left <n>'")
            left = values[0]
        elif tokens[0] == "adj":
            for v in values:
                if not 0 <= v < left:
                    raise ParseError(lineno, f"vertex {v} out of range")
            if len(set(values)) != len(values):
                raise ParseError(lineno, "repeated neighbour")
            adjacency.append(tuple(values))
        else:
            raise ParseError(lineno, f"unknown record '{tokens[0]}'")
    if left is None:
        raise ParseError(0, "truncated header")
    return BipartiteGraph(left, tuple(adjacency))


def trim(system: PathSystem, target_n: int, target_p: int, seed: int | None = None) -> PathSystem:
    """Delete random nodes, then random paths, down to the targets."""
    if not (0 <= target_n <= system.node_count and 0 <= target_p <= system.path_count):
        raise ValueError("targets must not exceed the current counts")
    rng = random.Random(seed)
    keep = rng.sample(range(system.node_count), target_n)
    reduced, _ = induced_subsystem(system, keep)
    kept_paths = sorted(rng.sample(range(reduced.path_count), target_p))
    return reduced.with_paths(reduced.paths[i] for i in kept_paths)


def gallery() -> dict[str, PathSystem]:
    """Small named systems used by reports and tests."""
    return {
        "quad3": quad_construction(3),
        "quad5": quad_construction(5),
        "lattice-8-2": lattice_construction((8, 2)),
        "lattice-128-4": lattice_construction((128, 4)),
        "rs5": rs_construction(5, ap_free_set(5)),
        "rs20": rs_construction(20, ap_free_set(20)),
    }


def disjoint_paths(count: int, length: int) -> PathSystem:
    """``count`` node-disjoint paths of ``length`` nodes each."""
    return PathSystem(
        count * length, tuple(tuple(range(i * length, (i + 1) * length)) for i in range(count))
    )

