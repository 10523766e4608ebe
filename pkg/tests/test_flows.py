"""Balanced-walk feasibility engine.

Every verdict is compared against brute-force walk enumeration on small
systems: a returned witness must validate structurally, and an
infeasibility verdict must never contradict a walk the brute force can
find.
"""

import random
from collections import Counter

import pytest

from ncmkit.flows import (
    DEFAULT_NODE_BUDGET,
    FlowEdge,
    FlowSystem,
    FlowWitness,
    Infeasible,
    PumpWitness,
    pump_walk,
    solve,
    solve_unbounded,
    validate_witness,
)
from ncmkit.machine import load_machine
from ncmkit.nfa import ResourceBudgetError
from ncmkit.phase import INPUT_CLASS, phase_automaton, to_flow_system

from conftest import fixture_path


def two_node_system() -> FlowSystem:
    return FlowSystem(
        nodes=frozenset({"s", "t"}),
        edges=(
            FlowEdge("a", "s", "t", frozenset({"C1"})),
            FlowEdge("b", "t", "t", frozenset({"D1"})),
        ),
        source="s",
        sinks=frozenset({"t"}),
        balance_pairs=(("C1", "D1"),),
    )


def walk_multisets(fs: FlowSystem, max_edges: int) -> set:
    """Usage multisets of all feasible source-to-sink walks, brute force."""
    by_src: dict = {}
    for e in fs.edges:
        by_src.setdefault(e.src, []).append(e)
    found = set()

    def ok(counts: Counter) -> bool:
        for e in fs.edges:
            if counts[e.eid] < e.lower:
                return False
        for cls_a, cls_b in fs.balance_pairs:
            total_a = sum(counts[e.eid] for e in fs.class_edges(cls_a))
            total_b = sum(counts[e.eid] for e in fs.class_edges(cls_b))
            if total_a != total_b:
                return False
        if fs.positive_class is not None:
            total = sum(counts[e.eid]
                        for e in fs.class_edges(fs.positive_class))
            if total < 1:
                return False
        return True

    def rec(node: str, counts: Counter, depth: int) -> None:
        if node in fs.sinks and ok(counts):
            found.add(frozenset(counts.items()))
        if depth == max_edges:
            return
        for e in by_src.get(node, ()):
            counts[e.eid] += 1
            rec(e.dst, counts, depth + 1)
            counts[e.eid] -= 1
            if counts[e.eid] == 0:
                del counts[e.eid]

    rec(fs.source, Counter(), 0)
    return found


class TestSolve:
    def test_counter_loop_pair(self):
        fs = two_node_system()
        expected = walk_multisets(fs, 4)
        assert expected == {frozenset({("a", 1), ("b", 1)})}
        witness = solve(fs)
        assert isinstance(witness, FlowWitness)
        assert witness.multiplicities == {"a": 1, "b": 1}
        assert validate_witness(fs, witness) == []

    def test_balance_over_empty_classes(self):
        fs = FlowSystem(
            nodes=frozenset({"s", "t"}),
            edges=(FlowEdge("e", "s", "t"),),
            source="s",
            sinks=frozenset({"t"}),
            balance_pairs=(("X", "Y"),),
        )
        witness = solve(fs)
        assert isinstance(witness, FlowWitness)
        assert witness.walk == ("e",)
        assert validate_witness(fs, witness) == []

    def test_unreachable_sink(self):
        fs = FlowSystem(
            nodes=frozenset({"s", "t", "u"}),
            edges=(FlowEdge("e", "t", "u"),),
            source="s",
            sinks=frozenset({"u"}),
        )
        assert isinstance(solve(fs), Infeasible)

    def test_lower_bound_off_every_path(self):
        fs = FlowSystem(
            nodes=frozenset({"s", "t", "u"}),
            edges=(
                FlowEdge("main", "s", "t"),
                FlowEdge("stranded", "u", "u", lower=1),
            ),
            source="s",
            sinks=frozenset({"t"}),
        )
        result = solve(fs)
        assert isinstance(result, Infeasible)
        assert "lower bound" in result.reason

    def test_positive_class_forces_usage(self):
        fs = FlowSystem(
            nodes=frozenset({"s", "t"}),
            edges=(
                FlowEdge("short", "s", "t"),
                FlowEdge("marked", "s", "t", frozenset({"M"})),
            ),
            source="s",
            sinks=frozenset({"t"}),
            positive_class="M",
        )
        witness = solve(fs)
        assert isinstance(witness, FlowWitness)
        assert witness.multiplicities["marked"] >= 1
        assert validate_witness(fs, witness) == []

    def test_infeasible_balance(self):
        # One pass over the C1 edge is forced, nothing provides D1.
        fs = FlowSystem(
            nodes=frozenset({"s", "t"}),
            edges=(FlowEdge("a", "s", "t", frozenset({"C1"})),),
            source="s",
            sinks=frozenset({"t"}),
            balance_pairs=(("C1", "D1"),),
        )
        assert walk_multisets(fs, 4) == set()
        assert isinstance(solve(fs), Infeasible)

    def test_node_budget(self):
        with pytest.raises(ResourceBudgetError):
            solve(two_node_system(), node_budget=0)

    def test_stats_report_node_count(self):
        stats: dict = {}
        solve(two_node_system(), stats=stats)
        assert stats["nodes"] >= 1

    def test_random_systems_agree_with_brute_force(self):
        rng = random.Random(1312)
        nodes = ("n0", "n1", "n2")
        classes = ("C1", "D1")
        for trial in range(120):
            n_edges = rng.randint(2, 6)
            edges = []
            for i in range(n_edges):
                carried = frozenset(
                    c for c in classes if rng.random() < 0.4)
                lower = 1 if rng.random() < 0.15 else 0
                edges.append(FlowEdge(
                    f"e{i}", rng.choice(nodes), rng.choice(nodes),
                    carried, lower))
            fs = FlowSystem(
                nodes=frozenset(nodes),
                edges=tuple(edges),
                source="n0",
                sinks=frozenset({rng.choice(nodes)}),
                balance_pairs=(("C1", "D1"),) if rng.random() < 0.7 else (),
                positive_class="C1" if rng.random() < 0.3 else None,
            )
            result = solve(fs)
            reachable = walk_multisets(fs, 6)
            if isinstance(result, FlowWitness):
                assert validate_witness(fs, result) == [], trial
            else:
                assert reachable == set(), (trial, reachable)


def anbn_flow_system() -> FlowSystem:
    machine = load_machine(fixture_path("anbn.ncm"))
    return to_flow_system(phase_automaton(machine))


class TestSolveUnbounded:
    def test_counter_loop_circulation(self):
        fs = anbn_flow_system()
        pump = solve_unbounded(fs, INPUT_CLASS)
        assert isinstance(pump, PumpWitness)
        by_id = {e.eid: e for e in fs.edges}
        c_total = sum(n for eid, n in pump.circulation.items()
                      if "C1" in by_id[eid].classes)
        d_total = sum(n for eid, n in pump.circulation.items()
                      if "D1" in by_id[eid].classes)
        input_total = sum(n for eid, n in pump.circulation.items()
                          if INPUT_CLASS in by_id[eid].classes)
        assert c_total == d_total >= 1
        assert input_total >= 1
        assert validate_witness(fs, pump.base) == []

    def test_pumped_walks_stay_valid(self):
        fs = anbn_flow_system()
        pump = solve_unbounded(fs, INPUT_CLASS)
        for times in (0, 1, 2):
            witness = pump_walk(fs, pump, times)
            assert validate_witness(fs, witness) == []
            for eid, count in witness.multiplicities.items():
                expected = (pump.base.multiplicities.get(eid, 0)
                            + times * pump.circulation.get(eid, 0))
                assert count == expected

    def test_finite_language_system(self):
        fs = FlowSystem(
            nodes=frozenset({"s", "t"}),
            edges=(FlowEdge("e", "s", "t", frozenset({INPUT_CLASS})),),
            source="s",
            sinks=frozenset({"t"}),
        )
        assert solve_unbounded(fs, INPUT_CLASS) is None

    def test_silent_loop_does_not_grow_input(self):
        fs = FlowSystem(
            nodes=frozenset({"s", "t"}),
            edges=(
                FlowEdge("e", "s", "t", frozenset({INPUT_CLASS})),
                FlowEdge("lam", "t", "t", frozenset()),
            ),
            source="s",
            sinks=frozenset({"t"}),
        )
        assert solve_unbounded(fs, INPUT_CLASS) is None

    def test_unbalanced_loop_cannot_circulate(self):
        # The only cycle bumps C1 with no matching D1, so no balanced
        # circulation exists even though walks do.
        fs = FlowSystem(
            nodes=frozenset({"s", "t"}),
            edges=(
                FlowEdge("e", "s", "t", frozenset({INPUT_CLASS})),
                FlowEdge("loop", "t", "t", frozenset({INPUT_CLASS, "C1"})),
            ),
            source="s",
            sinks=frozenset({"t"}),
            balance_pairs=(("C1", "D1"),),
        )
        assert solve_unbounded(fs, INPUT_CLASS) is None

    def test_pump_walk_rejects_negative_times(self):
        fs = anbn_flow_system()
        pump = solve_unbounded(fs, INPUT_CLASS)
        with pytest.raises(ValueError):
            pump_walk(fs, pump, -1)


class TestValidation:
    def test_system_validation(self):
        with pytest.raises(ValueError):
            FlowSystem(frozenset({"t"}), (), "s", frozenset({"t"}))
        with pytest.raises(ValueError):
            FlowSystem(frozenset({"s"}), (), "s", frozenset({"t"}))
        with pytest.raises(ValueError):
            FlowSystem(
                frozenset({"s"}),
                (FlowEdge("e", "s", "s"), FlowEdge("e", "s", "s")),
                "s", frozenset({"s"}))
        with pytest.raises(ValueError):
            FlowSystem(
                frozenset({"s"}), (FlowEdge("e", "s", "gone"),),
                "s", frozenset({"s"}))
        with pytest.raises(ValueError):
            FlowEdge("e", "s", "t", lower=-1)

    def test_witness_tampering_detected(self):
        fs = two_node_system()
        witness = solve(fs)
        bumped = FlowWitness(
            dict(witness.multiplicities, b=5), witness.walk,
            witness.sink, witness.box_bound, witness.bound_note)
        assert validate_witness(fs, bumped) != []
