from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bridgegirth.bridges import (
    BridgeWitness,
    BudgetExceeded,
    PreconditionError,
    bridge_girth,
    certify_bridge_free_acyclic,
    certify_ordered_bridge_free_acyclic,
    find_bridge_upto,
    find_two_bridges,
    find_two_cycles,
    validate_bridge,
)
from bridgegirth.constructions import lattice_construction
from bridgegirth.core import PathSystem, is_acyclic
from oracles import bridge_exists, girth_upto, has_two_cycle, random_paths
from test_core import systems


class TestValidateBridge:
    def test_two_bridge(self, two_bridge):
        assert validate_bridge(two_bridge, BridgeWitness(river=0, arcs=(1,), nodes=(0, 2)))

    def test_wrong_direction(self, two_bridge):
        assert not validate_bridge(two_bridge, BridgeWitness(river=0, arcs=(1,), nodes=(2, 0)))

    def test_repeated_arc(self):
        system = PathSystem(4, ((0, 1, 2, 3), (0, 3)))
        assert not validate_bridge(system, BridgeWitness(river=1, arcs=(0, 0), nodes=(0, 1, 3)))

    def test_ordered_needs_late_river(self, two_bridge):
        w = BridgeWitness(river=0, arcs=(1,), nodes=(0, 2))
        assert not validate_bridge(two_bridge, w, ordered=True)
        assert validate_bridge(two_bridge, BridgeWitness(river=1, arcs=(0,), nodes=(0, 2)), ordered=True)

    def test_index_out_of_range(self, two_bridge):
        with pytest.raises(IndexError):
            validate_bridge(two_bridge, BridgeWitness(river=5, arcs=(0,), nodes=(0, 2)))


class TestTwoBridgesAndCycles:
    def test_shared_ordered_pair(self, two_bridge):
        w = find_two_bridges(two_bridge)
        assert w == BridgeWitness(river=1, arcs=(0,), nodes=(0, 2))

    def test_reversal_has_no_two_bridge(self, reversal_pair):
        assert find_two_bridges(reversal_pair) is None
        cyc = find_two_cycles(reversal_pair)
        assert cyc is not None and cyc.first == 0 and cyc.second == 1

    def test_acyclic_has_no_two_cycle(self):
        assert find_two_cycles(PathSystem(4, ((0, 1, 2), (1, 3), (0, 3)))) is None

    @settings(max_examples=300)
    @given(systems(max_n=5, max_p=4))
    def test_two_cycle_oracle(self, system):
        assert (find_two_cycles(system) is not None) == has_two_cycle(system.paths)

    @settings(max_examples=300)
    @given(systems(max_n=5, max_p=4))
    def test_two_bridge_oracle(self, system):
        w = find_two_bridges(system)
        assert (w is not None) == bridge_exists(system.node_count, system.paths, 2)
        if w is not None:
            assert validate_bridge(system, w, ordered=True)


class TestFindBridgeUpto:
    def test_triangle_has_no_bridge(self, s_tri):
        assert find_bridge_upto(s_tri, 3) is None

    def test_three_bridge(self, three_bridge):
        w = find_bridge_upto(three_bridge, 3)
        assert w is not None and w.size == 3
        assert validate_bridge(three_bridge, w)
        assert bridge_girth(three_bridge, 2) is None
        assert bridge_girth(three_bridge, 3) == 3

    def test_ordered_three_bridge_depends_on_order(self, three_bridge):
        assert find_bridge_upto(three_bridge.with_order(), 3) is not None
        flipped = PathSystem(4, ((0, 2, 3), (0, 1), (1, 3)), ordered=True)
        assert find_bridge_upto(flipped, 3) is None
        assert find_bridge_upto(flipped, 3, ordered=False) is not None

    def test_kmax_below_two(self, s_tri):
        with pytest.raises(ValueError):
            find_bridge_upto(s_tri, 1)

    def test_budget(self):
        system = lattice_construction((128, 4))
        with pytest.raises(BudgetExceeded):
            find_bridge_upto(system, 4, budget=10)

    def test_deterministic(self):
        rng = random.Random(3)
        system = PathSystem(6, random_paths(rng, 6, 5))
        assert find_bridge_upto(system, 5) == find_bridge_upto(system, 5)

    @settings(max_examples=300, deadline=None)
    @given(systems(max_n=5, max_p=4), st.booleans())
    def test_girth_oracle(self, system, ordered):
        kmax = 4
        got = bridge_girth(system, kmax, ordered=ordered)
        assert got == girth_upto(system.node_count, system.paths, kmax, ordered)
        w = find_bridge_upto(system, kmax, ordered=ordered)
        if w is not None:
            assert validate_bridge(system, w, ordered=ordered)

    @settings(max_examples=100, deadline=None)
    @given(systems(max_n=5, max_p=4))
    def test_ordered_girth_at_least_plain(self, system):
        plain = bridge_girth(system, 4)
        ordered = bridge_girth(system, 4, ordered=True)
        assert (ordered or 99) >= (plain or 99)


class TestCertificates:
    def test_cyclic_input_rejected(self, reversal_pair):
        with pytest.raises(PreconditionError):
            certify_bridge_free_acyclic(reversal_pair)
        with pytest.raises(PreconditionError):
            certify_ordered_bridge_free_acyclic(reversal_pair)

    def test_two_bridge_reported(self, two_bridge):
        cert = certify_bridge_free_acyclic(two_bridge)
        assert not cert.ok and cert.witness.size == 2

    def test_three_bridge_witness(self, three_bridge):
        cert = certify_bridge_free_acyclic(three_bridge)
        assert not cert.ok
        assert validate_bridge(three_bridge, cert.witness)

    def test_lattice(self):
        system = lattice_construction((128, 4))
        assert certify_ordered_bridge_free_acyclic(system).ok
        reverse = system.with_paths(system.paths[::-1])
        assert certify_ordered_bridge_free_acyclic(reverse).ok

    @settings(max_examples=400, deadline=None)
    @given(systems(max_n=5, max_p=4))
    def test_agrees_with_exhaustive(self, system):
        if not is_acyclic(system):
            return
        kmax = max(2, system.node_count * system.path_count)
        for ordered, certify in ((False, certify_bridge_free_acyclic), (True, certify_ordered_bridge_free_acyclic)):
            cert = certify(system)
            exhaustive = find_bridge_upto(system, kmax, ordered=ordered)
            assert cert.ok == (exhaustive is None)
            if not cert.ok:
                assert validate_bridge(system, cert.witness, ordered=ordered)

    def test_long_witness_is_shortcut(self):
        # the walk 0 -> 1 -> 2 -> 3 uses path 0 twice; the witness must merge it
        system = PathSystem(5, ((0, 1, 4, 2, 3), (1, 2), (0, 3)))
        cert = certify_bridge_free_acyclic(system)
        assert not cert.ok
        assert validate_bridge(system, cert.witness)
