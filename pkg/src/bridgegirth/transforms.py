"""System rewriting: cleaning, 2-cycle stripping, subsampling, source restriction, base-path subsystems."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .core import PathSystem, check_valid, induced_subsystem


def _prune(
    node_count: int,
    paths: list[list[int]],
    min_degree: Fraction,
    min_length: Fraction,
    killers: set[int] = frozenset(),
) -> tuple[list[list[int]], set[int]]:
    """Repeatedly delete nodes of degree < min_degree and paths of length < min_length.

    Deleting a node in ``killers`` deletes every path containing it instead of
    just removing the node. Returns surviving paths (in order) and deleted nodes.
    """
    alive = [True] * len(paths)
    members: list[list[int]] = [[] for _ in range(node_count)]
    for j, path in enumerate(paths):
        for v in path:
            members[v].append(j)
    current = [set(p) for p in paths]
    degree = [len(m) for m in members]
    deleted: set[int] = set()
    node_queue = [v for v in range(node_count) if degree[v] < min_degree]
    path_queue = [j for j in range(len(paths)) if len(current[j]) < min_length]

    def kill_path(j: int):
        if not alive[j]:
            return
        alive[j] = False
        for v in current[j]:
            degree[v] -= 1
            if degree[v] < min_degree and v not in deleted:
                node_queue.append(v)

    while node_queue or path_queue:
        while path_queue:
            kill_path(path_queue.pop())
        if node_queue:
            v = node_queue.pop()
            if v in deleted:
                continue
            deleted.add(v)
            for j in members[v]:
                if not alive[j]:
                    continue
                if v in killers:
                    kill_path(j)
                    continue
                current[j].discard(v)
                if len(current[j]) < min_length:
                    path_queue.append(j)
            degree[v] = 0
    survivors = [[v for v in paths[j] if v not in deleted] for j in range(len(paths)) if alive[j]]
    return survivors, deleted


def clean_regularize(system: PathSystem) -> PathSystem:
    """Regularize degrees and lengths by splitting long paths and high-degree nodes,
    then deleting low-degree nodes and short paths.

    The thresholds use the average degree d and length ell of the input,
    fixed once at the start.
    """
    check_valid(system)
    size = system.size
    if size == 0:
        return PathSystem(0, (), system.ordered)
    d = Fraction(size, system.node_count)
    ell = Fraction(size, system.path_count)

    # paths: split at ceil(len/2) while both halves stay >= ell/4
    paths: list[list[int]] = []
    work = [list(p) for p in system.paths]
    while work:
        path = work.pop(0)
        half = len(path) // 2
        if len(path) >= 2 and len(path) >= ell / 2 and half >= ell / 4:
            cut = len(path) - half
            work[0:0] = [path[:cut], path[cut:]]
        else:
            paths.append(path)

    # nodes: split while deg >= d/2, alternating incidences between the halves
    node_count = system.node_count
    incidences: list[list[tuple[int, int]]] = [[] for _ in range(node_count)]
    for j, path in enumerate(paths):
        for i, v in enumerate(path):
            incidences[v].append((j, i))
    stack = list(range(node_count))
    while stack:
        v = stack.pop()
        occ = incidences[v]
        if len(occ) >= d / 2 and len(occ) // 2 >= max(1, d / 4):
            new = node_count
            node_count += 1
            moved = occ[1::2]
            incidences[v] = occ[0::2]
            incidences.append(moved)
            for j, i in moved:
                paths[j][i] = new
            stack.extend((v, new))

    survivors, deleted = _prune(node_count, paths, d / 4, ell / 4)
    keep = [v for v in range(node_count) if v not in deleted]
    result, _ = induced_subsystem(PathSystem(node_count, survivors, system.ordered), keep)
    return result


def strip_two_cycles(system: PathSystem) -> PathSystem:
    """Keep a subpath of each path so that no two kept paths form a 2-cycle.

    Node v of the current path is omitted when some later node u of the path
    appears before v on an already-added path.
    """
    check_valid(system)
    before: set[tuple[int, int]] = set()  # (u, v) with u before v on some added path
    out = []
    for path in system.paths:
        kept = []
        for a, v in enumerate(path):
            if any((u, v) in before for u in path[a + 1 :]):
                continue
            kept.append(v)
        for a in range(len(kept)):
            for c in range(a + 1, len(kept)):
                before.add((kept[a], kept[c]))
        out.append(tuple(kept))
    return system.with_paths(out)


def subsample(system: PathSystem, c: Fraction | float | str, seed: int | None = None) -> PathSystem:
    """Keep exactly ceil(c n) random nodes and ceil(c p) random paths."""
    c = Fraction(c)
    if not 0 <= c <= 1:
        raise ValueError("c must lie in [0, 1]")
    rng = random.Random(seed)
    keep_nodes = rng.sample(range(system.node_count), math.ceil(c * system.node_count))
    keep_paths = sorted(rng.sample(range(system.path_count), math.ceil(c * system.path_count)))
    reduced, _ = induced_subsystem(system, keep_nodes)
    return reduced.with_paths(reduced.paths[j] for j in keep_paths)


@dataclass(frozen=True)
class SourceRestricted:
    system: PathSystem
    sources: frozenset[int]
    retention: Fraction  # output size over input size


def clean_source_restricted(
    system: PathSystem,
    lam: Fraction | float | str = Fraction(1, 16),
    seed: int | None = None,
    sources: set[int] | None = None,
) -> SourceRestricted:
    """Make every path start in a sampled source set X and avoid X afterwards.

    Node ids are preserved; deleted nodes are left isolated. ``sources``
    overrides the random choice of X.
    """
    check_valid(system)
    lam = Fraction(lam)
    size = system.size
    if system.node_count == 0 or size == 0:
        raise ValueError("system must have positive average degree")
    d = Fraction(size, system.node_count)
    ell = Fraction(size, system.path_count)
    if sources is None:
        k = math.floor(system.path_count / d)
        if k == 0:
            raise ValueError("sampled source set is empty; use more paths or a larger lambda")
        sources = set(random.Random(seed).sample(range(system.node_count), k))
    X = set(sources)
    if not X:
        raise ValueError("source set is empty")
    paths = []
    for path in system.paths:
        first = next((i for i, v in enumerate(path) if v in X), None)
        if first is None:
            continue
        x = path[first]
        paths.append([x] + [v for v in path[first + 1 :] if v not in X])
    survivors, deleted = _prune(system.node_count, paths, lam * d, lam * ell, killers=X)
    out = system.with_paths(survivors)
    return SourceRestricted(out, frozenset(X - deleted), Fraction(out.size, size))


@dataclass(frozen=True)
class BaseSubsystem:
    system: PathSystem
    base: int
    forwards: bool
    id_map: dict[int, int]
    crossing: int  # |Q|, paths meeting the base in exactly one node
    kept: frozenset[int]


def sample_base_subsystem(system: PathSystem, h: int, seed: int | None = None) -> BaseSubsystem:
    """Induced subsystem around a random base path.

    Q is the set of paths meeting the base in exactly one node u. Kept nodes
    are the base itself plus every node within h-1 positions after u on a
    path of Q (before u when the coin says backwards).
    """
    check_valid(system)
    if system.path_count == 0:
        raise ValueError("empty system")
    if h < 1:
        raise ValueError("h must be positive")
    rng = random.Random(seed)
    base = rng.randrange(system.path_count)
    forwards = rng.random() < 0.5
    base_nodes = set(system.paths[base])
    kept = set(base_nodes)
    crossing = 0
    for j, path in enumerate(system.paths):
        if j == base:
            continue
        hits = [i for i, v in enumerate(path) if v in base_nodes]
        if len(hits) != 1:
            continue
        crossing += 1
        i = hits[0]
        window = path[i : i + h] if forwards else path[max(0, i - h + 1) : i + 1]
        kept.update(window)
    sub, id_map = induced_subsystem(system, kept)
    return BaseSubsystem(sub, base, forwards, id_map, crossing, frozenset(kept))


@dataclass(frozen=True)
class L2Report:
    l2_norm_sq: int
    max_length: int
    n_times_max_length: int
    p_n_term: float  # p^(1/3) n^(4/3)
    ratio: float  # l2_norm_sq / (n L + p^(1/3) n^(4/3)); 0 for empty systems


def l2_report(system: PathSystem) -> L2Report:
    l2 = sum(len(p) ** 2 for p in system.paths)
    L = max((len(p) for p in system.paths), default=0)
    n, p = system.node_count, system.path_count
    nL = n * L
    term = p ** (1 / 3) * n ** (4 / 3)
    denom = nL + term
    return L2Report(l2, L, nL, term, l2 / denom if denom else 0.0)
