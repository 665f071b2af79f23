"""Acceptance suite: one test per criterion, reported as PASS/FAIL in the terminal summary."""

from __future__ import annotations

import random
import time
from fractions import Fraction

import networkx as nx

from bridgegirth.bridges import (
    bridge_girth,
    certify_bridge_free_acyclic,
    certify_ordered_bridge_free_acyclic,
    find_bridge_upto,
    find_two_bridges,
    find_two_cycles,
    validate_bridge,
)
from bridgegirth.constructions import (
    ap_free_set,
    disjoint_paths,
    gallery,
    lattice_construction,
    lattice_coordinates,
    LatticeParams,
    quad_construction,
    rs_construction,
)
from bridgegirth.core import PathSystem, is_acyclic, stats
from bridgegirth.gaps import (
    brute_force_vertex_multicut,
    build_dsf_instance,
    build_gs,
    build_h,
    build_product,
    check_dsf_routes,
    check_long_paths,
    disjoint_path_packing,
    dsf_disjoint_counts,
    max_node_disjoint_paths,
    node_split,
    partition_paths,
)
from bridgegirth.reductions import (
    check_independence,
    count_shortest_paths,
    dp_hard_instance,
    greedy_spanner,
    hopset_adversary,
    make_independent_dp,
    make_independent_rp,
    online_game,
    preserver_size,
    shortcut_adversary,
    system_to_digraph,
)
from bridgegirth.search import all_systems, beta_table, creates_bridge, max_system, monotonicity_violations
from bridgegirth.transforms import clean_regularize, l2_report, strip_two_cycles
from generators import random_exact_hopset, random_instance, random_shortcuts, random_weighted_graph
from oracles import max_internally_disjoint, random_paths


def report(number: int, ok: bool, detail: str) -> None:
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")


def exact_girth(system: PathSystem, ordered: bool = False):
    kmax = min(system.node_count, system.path_count)
    if kmax < 2:
        return None
    return bridge_girth(system, kmax, ordered=ordered)


def _inf(g):
    return float("inf") if g is None else g


def tiny_systems():
    for n in range(1, 5):
        for p in range(1, 4):
            yield from all_systems(n, p)


def random_tiny_systems(count=1000, seed=2024):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, 5)
        p = rng.randint(1, 4)
        yield PathSystem(n, random_paths(rng, n, p))


def test_criterion_01_quad_exactness():
    start = time.perf_counter()
    for q in (3, 5, 7, 11):
        system = quad_construction(q)
        s = stats(system)
        assert (s.node_count, s.path_count, s.size) == (q**3, 3 * q * q, q**4)
        assert s.min_degree == s.max_degree == q
        assert find_two_bridges(system) is None
    elapsed = time.perf_counter() - start
    assert elapsed < 10
    report(1, True, f"q in 3,5,7,11 exact, no 2-bridge ({elapsed:.2f}s)")


def test_criterion_02_lattice_exactness():
    start = time.perf_counter()
    for n, ell in ((8, 2), (128, 4), (1024, 8)):
        system = lattice_construction((n, ell))
        p = (n // (2 * ell)) * (n // (2 * ell * ell))
        assert system.path_count == p
        assert system.size == p * ell
        height, lines = lattice_coordinates(LatticeParams(n, ell))
        assert all(1 <= a <= ell and 1 <= b <= height for pts in lines for a, b in pts)
        assert all(0 <= v < system.node_count for path in system.paths for v in path)
        assert certify_ordered_bridge_free_acyclic(system).ok
        if n <= 16:
            assert find_bridge_upto(system, 8, ordered=True) is None
    elapsed = time.perf_counter() - start
    assert elapsed < 5
    report(2, True, f"three lattices exact and certified ({elapsed:.2f}s)")


def _bridge_by_search_module(system: PathSystem, ordered: bool) -> bool:
    # independent path: add paths one by one and ask whether the newest creates a bridge
    kmax = min(system.node_count, system.path_count)
    if kmax < 2:
        return False
    paths = []
    for j, path in enumerate(system.paths):
        paths.append(path)
        if creates_bridge(paths, j, kmax, ordered):
            return True
    return False


def test_criterion_03_oracle_agreement():
    start = time.perf_counter()
    checked = certified = 0
    for system in list(tiny_systems()) + list(random_tiny_systems()):
        checked += 1
        kmax = max(2, system.node_count * system.path_count)
        for ordered in (False, True):
            w = find_bridge_upto(system, kmax, ordered=ordered)
            assert (w is not None) == _bridge_by_search_module(system, ordered)
            if w is not None:
                assert validate_bridge(system, w, ordered=ordered)
        plain = exact_girth(system)
        star = exact_girth(system, ordered=True)
        assert _inf(star) >= _inf(plain)
        if is_acyclic(system):
            certified += 1
            for ordered, certify in ((False, certify_bridge_free_acyclic), (True, certify_ordered_bridge_free_acyclic)):
                cert = certify(system)
                assert cert.ok == (find_bridge_upto(system, kmax, ordered=ordered) is None)
                if not cert.ok:
                    assert validate_bridge(system, cert.witness, ordered=ordered)
        for j in range(system.path_count):
            smaller = system.with_paths(system.paths[:j] + system.paths[j + 1 :])
            assert _inf(exact_girth(smaller)) >= _inf(plain)
    rows = beta_table(4, 3, [2, 3, None])
    assert monotonicity_violations(rows) == []
    for r in rows:
        assert r.beta_star >= r.beta
        for witness, ordered in ((r.witness, False), (r.witness_star, True)):
            k = min(r.k or 99, witness.node_count, witness.path_count)
            if k >= 2:
                assert find_bridge_upto(witness, k, ordered=ordered) is None
    elapsed = time.perf_counter() - start
    assert elapsed < 300
    report(3, True, f"{checked} systems, {certified} certified, beta table monotone ({elapsed:.1f}s)")


def test_criterion_04_tiny_beta():
    a = max_system(3, 2, 2).value
    b = max_system(3, 3, 2).value
    assert (a, b) == (6, 7)
    report(4, True, f"beta(3,2,2)={a}, beta(3,3,2)={b}")


def test_criterion_05_preserver_chain():
    start = time.perf_counter()
    system = lattice_construction((128, 4))
    inst = dp_hard_instance(system)
    adj = inst.adj()
    weights = inst.weight_map()
    for (s, t), path in zip(inst.demands, system.paths):
        dist, count = count_shortest_paths(inst, s, t, adj)
        assert count == 1
        assert dist == sum(weights[e] for e in zip(path, path[1:]))
    size = preserver_size(inst)
    final = online_game(system, "greedy-shortest").final
    assert size == final == system.size - system.path_count == 192
    elapsed = time.perf_counter() - start
    assert elapsed < 30
    report(5, True, f"unique shortest paths, preserver 192, game 192 ({elapsed:.2f}s)")


def test_criterion_06_reachability_instance():
    system = rs_construction(50, ap_free_set(50))
    inst = system_to_digraph(system)
    g = nx.DiGraph()
    g.add_edges_from((u, v) for u, v, _ in inst.edges)
    assert nx.is_directed_acyclic_graph(g)
    used = set()
    for s, t in inst.demands:
        routes = list(nx.all_simple_paths(g, s, t))
        assert len(routes) == 1
        edges = set(zip(routes[0], routes[0][1:]))
        assert not edges & used
        used |= edges
    assert len(inst.edges) == system.size - system.path_count
    assert check_independence(inst, "rp") is None
    report(6, True, f"{len(inst.demands)} demands, unique and edge-disjoint, {len(inst.edges)} edges")


def test_criterion_07_adversaries():
    rng = random.Random(77)
    paths = disjoint_paths(65, 16)
    for _ in range(50):
        assert shortcut_adversary(paths, random_shortcuts(rng, 65, 16, 64)).hops == 15
    lattice = lattice_construction((128, 4))
    inst = dp_hard_instance(lattice)
    for _ in range(50):
        assert hopset_adversary(lattice, random_exact_hopset(rng, inst, 63)).hops == 3
    report(7, True, "50/50 shortcut sets leave a 15-hop pair, 50/50 hopsets leave a 3-hop pair")


def _oracle_independent(inst, mode: str) -> bool:
    g = nx.DiGraph()
    g.add_nodes_from(range(inst.node_count))
    for u, v, w in inst.edges:
        g.add_edge(u, v, weight=w)
    used = set()
    for s, t in inst.demands:
        if mode == "dp":
            routes = list(nx.all_shortest_paths(g, s, t, weight="weight"))
        else:
            routes = list(nx.all_simple_paths(g, s, t))
        if len(routes) != 1:
            return False
        edges = set(zip(routes[0], routes[0][1:]))
        if edges & used:
            return False
        used |= edges
    return True


def test_criterion_08_independence_transforms():
    steps = 0
    for seed in range(200):
        inst = random_instance(seed, dag=seed % 2 == 1)
        dp = make_independent_dp(inst, seed=seed)
        assert check_independence(dp.instance, "dp") is None
        assert _oracle_independent(dp.instance, "dp")
        assert all(a > b for a, b in zip(dp.potentials, dp.potentials[1:]))
        rp = make_independent_rp(inst.node_count, inst.edges, inst.demands)
        assert check_independence(rp.instance, "rp") is None
        assert _oracle_independent(rp.instance, "rp")
        assert all(a > b for a, b in zip(rp.potentials, rp.potentials[1:]))
        steps += len(dp.potentials) + len(rp.potentials) - 2
    report(8, True, f"200 instances, {steps} rewrite steps, potentials strictly decreasing")


def test_criterion_09_transform_guarantees():
    start = time.perf_counter()
    count = 0
    for system in tiny_systems():
        count += 1
        before = _inf(exact_girth(system))
        stripped = strip_two_cycles(system)
        assert find_two_cycles(stripped) is None
        if before > 3:
            assert 2 * stripped.size >= system.size
        cleaned = clean_regularize(system)
        assert 2 * cleaned.size >= system.size
        after = _inf(exact_girth(cleaned))
        assert after >= before
    elapsed = time.perf_counter() - start
    report(9, True, f"{count} systems: strip and clean guarantees hold ({elapsed:.1f}s)")


def test_criterion_10_gap_structure():
    start = time.perf_counter()
    system = rs_construction(5, ap_free_set(5))
    h = build_h(16, seed=1)
    parts = partition_paths(system, 16, seed=1).parts
    product = build_product(build_gs(system, parts), h)
    r = check_long_paths(product)
    assert product.d_prime == 2
    assert r.unreachable == () and r.non_canonical == ()
    assert r.min_nonterminals >= product.d_prime
    assert r.feasible
    # tiny instance: H on 16 nonterminals
    tiny = check_long_paths(h)
    assert tiny.feasible and h.N <= 20
    size, _ = brute_force_vertex_multicut(h)
    packing = disjoint_path_packing(h)
    assert size >= packing
    assert size >= tiny.fractional_value
    ratio = Fraction(size) / tiny.fractional_value
    elapsed = time.perf_counter() - start
    assert elapsed < 120
    report(
        10,
        True,
        f"product min {r.min_nonterminals} >= d'=2, fractional {r.fractional_value}; "
        f"tiny multicut {size} vs fractional {tiny.fractional_value} (ratio {ratio}), packing {packing}",
    )


def test_criterion_11_dsf_instance():
    system = PathSystem(11, ((0, 2, 3), (0, 4, 5), (1, 6, 7), (1, 8, 9), (1, 3, 10)))
    inst = build_dsf_instance(system, [0, 1])
    degrees = {x: len(inst.families[x]) for x in inst.sources}
    assert sorted(degrees.values()) == [2, 3]
    counts = dsf_disjoint_counts(inst)
    assert counts == degrees
    for x in inst.sources:
        assert counts[x] == max_internally_disjoint(inst.node_count, inst.edges, x, inst.sink_of[x])
    assert check_dsf_routes(system, inst) == []
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(2, 8)
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        edges = rng.sample(pairs, rng.randint(0, min(len(pairs), 16)))
        s, t = rng.sample(range(n), 2)
        split = node_split(n, edges, terminals={s, t})
        assert all(w == 1 for u, v, w in split.instance.edges if (u, v) in {(split.inlet[x], split.outlet[x]) for x in range(n)})
        assert max_node_disjoint_paths(n, edges, s, t) == max_internally_disjoint(n, edges, s, t)
    report(11, True, "disjoint paths equal source degrees {2, 3}; node split matches enumeration on 100 graphs")


def _nx_girth(n, edges):
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((u, v) for u, v, _ in edges)
    best = float("inf")
    for u, v in list(g.edges):
        g.remove_edge(u, v)
        if nx.has_path(g, u, v):
            best = min(best, nx.shortest_path_length(g, u, v) + 1)
        g.add_edge(u, v)
    return best


def _nx_stretch(graph, spanner):
    def build(es):
        g = nx.Graph()
        g.add_nodes_from(range(graph.node_count))
        g.add_weighted_edges_from(es)
        return g

    dg = dict(nx.all_pairs_dijkstra_path_length(build(graph.edges)))
    dh = dict(nx.all_pairs_dijkstra_path_length(build(spanner.edges)))
    worst = Fraction(1)
    for s in dg:
        for t, d in dg[s].items():
            if s != t:
                if t not in dh[s]:
                    return float("inf")
                worst = max(worst, Fraction(dh[s][t], d))
    return worst


def test_criterion_12_greedy_spanner():
    for seed in range(100):
        graph = random_weighted_graph(seed)
        for k in (2, 3):
            sp = greedy_spanner(graph, k)
            assert _nx_stretch(graph, sp) <= k
            assert _nx_girth(graph.node_count, sp.edges) > k + 1
    report(12, True, "100 graphs, k in {2, 3}: stretch <= k and girth > k+1")


def test_criterion_13_l2_diagnostic():
    lines = []
    for name, system in gallery().items():
        r = l2_report(system)
        assert r.l2_norm_sq == sum(len(p) ** 2 for p in system.paths)
        if is_acyclic(system):
            certify = certify_ordered_bridge_free_acyclic if system.ordered else certify_bridge_free_acyclic
            above_three = certify(system).ok
        else:
            above_three = bridge_girth(system, 3) is None
        if above_three:
            lines.append(f"{name} ratio {r.ratio:.4f}")
    assert lines
    report(13, True, "; ".join(lines))
