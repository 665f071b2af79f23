"""Exhaustive search for the largest path systems of bridge girth above k, at tiny sizes."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations
from typing import Iterable, Iterator

from .core import PathSystem, is_acyclic

DEFAULT_SEARCH_BUDGET = 5 * 10**6


class SearchBudgetExceeded(RuntimeError):
    """Raised when the search tree outgrows its budget; ``best`` is only a lower bound."""

    def __init__(self, budget: int, best: SearchResult):
        super().__init__(f"search budget of {budget} nodes exceeded; best so far {best.value} is a lower bound")
        self.budget = budget
        self.best = best


@dataclass(frozen=True)
class SearchResult:
    value: int
    witness: PathSystem
    explored: int
    n: int
    p: int
    k: int | None  # None means no bound on the bridge size
    ordered: bool
    acyclic_only: bool


def all_sequences(n: int) -> list[tuple[int, ...]]:
    """Every sequence of distinct nodes from range(n), shortest first."""
    out: list[tuple[int, ...]] = []
    for length in range(n + 1):
        out.extend(permutations(range(n), length))
    return out


def all_systems(n: int, p: int) -> Iterator[PathSystem]:
    """Every multiset of exactly p paths on n labelled nodes (empty paths included)."""
    for paths in combinations_with_replacement(all_sequences(n), p):
        yield PathSystem(n, paths)


def creates_bridge(paths: list[tuple[int, ...]], new: int, kmax: int, ordered: bool) -> bool:
    """Whether some bridge with at most kmax nodes uses path ``new`` as river or arc.

    When every other path is already bridge-free among themselves, this
    decides whether the whole system has a bridge of size <= kmax.
    """
    p = len(paths)
    pos = [{v: i for i, v in enumerate(path)} for path in paths]

    def chain(x, target, arcs_left, used, seen, river, touched) -> bool:
        for j in range(p):
            if j in used or (ordered and j > river):
                continue
            i = pos[j].get(x)
            if i is None:
                continue
            hit = touched or j == new
            t = pos[j].get(target)
            if t is not None and t > i and hit:
                return True
            if arcs_left == 1:
                continue
            for y in paths[j][i + 1 :]:
                if y in seen:
                    continue
                seen.add(y)
                used.add(j)
                found = chain(y, target, arcs_left - 1, used, seen, river, hit)
                used.discard(j)
                seen.discard(y)
                if found:
                    return True
        return False

    for r, river in enumerate(paths):
        for a in range(len(river)):
            for c in range(a + 1, len(river)):
                if chain(river[a], river[c], kmax - 1, {r}, {river[a], river[c]}, r, r == new):
                    return True
    return False


def max_system(
    n: int,
    p: int,
    k: int | None,
    ordered: bool = False,
    acyclic_only: bool = False,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> SearchResult:
    """Exact maximum size of a system with n nodes, at most p paths and no bridge of size <= k.

    Paths are added one at a time; node labels are broken by first use, and
    for unordered systems path lengths are non-increasing. Both rules keep at
    least one copy of every system up to isomorphism and reordering.
    """
    if n < 0 or p < 0:
        raise ValueError("n and p must be non-negative")
    if k is not None and k < 2:
        raise ValueError("k must be at least 2")
    kmax = min(k if k is not None else n * p, n, p)
    sequences = all_sequences(n)
    paths: list[tuple[int, ...]] = []
    best = [0, ()]
    explored = [0]

    def result(value, witness) -> SearchResult:
        return SearchResult(value, PathSystem(n, witness, ordered), explored[0], n, p, k, ordered, acyclic_only)

    def extend(size: int, used_labels: int, max_len: int):
        explored[0] += 1
        if explored[0] > budget:
            raise SearchBudgetExceeded(budget, result(best[0], best[1]))
        if size > best[0]:
            best[0], best[1] = size, tuple(paths)
        slots = p - len(paths)
        if slots == 0 or size + slots * max_len <= best[0]:
            return
        for seq in reversed(sequences):  # long paths first so good witnesses appear early
            if len(seq) == 0 or len(seq) > max_len:
                continue
            fresh = [v for v in seq if v >= used_labels]
            if fresh != list(range(used_labels, used_labels + len(fresh))):
                continue
            paths.append(seq)
            ok = kmax < 2 or not creates_bridge(paths, len(paths) - 1, kmax, ordered)
            if ok and acyclic_only:
                ok = is_acyclic(PathSystem(n, tuple(paths)))
            if ok:
                extend(size + len(seq), used_labels + len(fresh), max_len if ordered else len(seq))
            paths.pop()

    extend(0, 0, n)
    return result(best[0], best[1])


@dataclass(frozen=True)
class TableRow:
    n: int
    p: int
    k: int | None
    beta: int
    beta_star: int
    witness: PathSystem
    witness_star: PathSystem


def parse_k(token: str) -> int | None:
    return None if token in ("inf", "infinite", "∞") else int(token)


def format_k(k: int | None) -> str:
    return "inf" if k is None else str(k)


def _k_key(k: int | None) -> float:
    return float("inf") if k is None else k


def beta_table(
    max_n: int,
    max_p: int,
    ks: Iterable[int | None],
    acyclic_only: bool = False,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> list[TableRow]:
    """beta and beta* for every 1 <= n <= max_n, 1 <= p <= max_p and k in ks.

    Raises AssertionError if the table breaks monotonicity.
    """
    rows = []
    for n in range(1, max_n + 1):
        for p in range(1, max_p + 1):
            for k in ks:
                plain = max_system(n, p, k, False, acyclic_only, budget)
                star = max_system(n, p, k, True, acyclic_only, budget)
                rows.append(TableRow(n, p, k, plain.value, star.value, plain.witness, star.witness))
    problems = monotonicity_violations(rows)
    if problems:
        raise AssertionError("; ".join(problems))
    return rows


def monotonicity_violations(rows: list[TableRow]) -> list[str]:
    """beta non-increasing in k, non-decreasing in n and p, and beta* >= beta."""
    cell = {(r.n, r.p, _k_key(r.k)): r for r in rows}
    problems = []
    for (n, p, k), r in cell.items():
        if r.beta_star < r.beta:
            problems.append(f"beta* < beta at {(n, p, k)}")
        for other, label in (((n + 1, p, k), "n"), ((n, p + 1, k), "p")):
            if other in cell and cell[other].beta < r.beta:
                problems.append(f"beta decreases in {label} at {(n, p, k)}")
        later = [key for key in cell if key[:2] == (n, p) and key[2] > k]
        for key in later:
            if cell[key].beta > r.beta or cell[key].beta_star > r.beta_star:
                problems.append(f"beta increases in k at {(n, p, k)}")
    return problems


def table_csv(rows: list[TableRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["n", "p", "k", "beta", "beta_star"])
    for r in rows:
        writer.writerow([r.n, r.p, format_k(r.k), r.beta, r.beta_star])
    return out.getvalue()
