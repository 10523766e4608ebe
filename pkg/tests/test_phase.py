"""Phase abstraction: accepting runs as balanced source-to-sink walks.

The load-bearing claim is the correspondence: the flow system of a
machine's phase automaton has a feasible balanced walk exactly when the
machine accepts some word, and every solver witness replays into a
validated accepting run.  Checked on fixtures and a random corpus.
"""

import pytest

from conftest import fixture_path, machine_corpus
from ncmkit.flows import FlowWitness, Infeasible, solve, solve_unbounded
from ncmkit.machine import (
    CounterMachine,
    MachineError,
    Transition,
    load_machine,
    validate_run,
)
from ncmkit.oracle import caps_for, enumerate_language, run_word
from ncmkit.phase import (
    INPUT_CLASS,
    PhaseAutomaton,
    phase_automaton,
    run_from_walk,
    run_to_walk,
    to_flow_system,
    witness_run,
)


def anbn() -> CounterMachine:
    return load_machine(fixture_path("anbn.ncm"))


class TestConstruction:
    def test_nodes_pair_states_with_phases(self):
        pa = phase_automaton(anbn())
        assert pa.initial.split("|")[1] == "Z0"
        assert all("|" in node for node in pa.nodes)
        assert pa.finals <= pa.nodes

    def test_rejects_machines_that_are_not_well_formed(self):
        machine = CounterMachine(
            k=2,
            alphabet=("a",),
            states=("s",),
            initial="s",
            finals=("s",),
            transitions=(
                Transition("t", "s", "a", ("*", "*"), "s", (1, 1)),
            ),
        )
        with pytest.raises(MachineError):
            phase_automaton(machine)

    def test_machine_with_no_acceptance_collapses(self):
        # The final state is only reachable with a loaded counter, so no
        # phase node is both final and all-zero.
        machine = CounterMachine(
            k=1,
            alphabet=("a",),
            states=("s", "t"),
            initial="s",
            finals=("t",),
            transitions=(
                Transition("up", "s", "a", ("*",), "t", (1,)),
            ),
        )
        pa = phase_automaton(machine)
        assert pa.finals == frozenset()
        assert isinstance(solve(to_flow_system(pa)), Infeasible)


class TestCorrespondence:
    def test_anbn_witness_replays_to_accepting_run(self):
        pa = phase_automaton(anbn())
        witness = solve(to_flow_system(pa))
        assert isinstance(witness, FlowWitness)
        run = witness_run(pa, witness)
        n = len(run.word) // 2
        assert run.word == ("a",) * n + ("b",) * n

    def test_emptiness_matches_enumeration_on_corpus(self):
        for idx, machine in enumerate(machine_corpus(421, 60)):
            pa = phase_automaton(machine)
            result = solve(to_flow_system(pa))
            sample = enumerate_language(machine, caps_for(8))
            if isinstance(result, FlowWitness):
                run = witness_run(pa, result)
                search = run_word(machine, run.word, caps_for(
                    len(run.word), max_total_steps=200_000))
                assert search.runs, (idx, run.word)
            else:
                assert sample.words == (), (idx, sample.words[:3])

    def test_nonempty_fixtures_are_feasible(self):
        for name in ("anbn", "ex2", "ex3", "ex4a-m1", "anbncn", "loop"):
            machine = load_machine(fixture_path(f"{name}.ncm"))
            pa = phase_automaton(machine)
            witness = solve(to_flow_system(pa))
            assert isinstance(witness, FlowWitness), name
            validate_run(machine, witness_run(pa, witness))


class TestWalkRunRoundTrip:
    def test_witness_walk_round_trips(self):
        pa = phase_automaton(anbn())
        witness = solve(to_flow_system(pa))
        run = run_from_walk(pa, witness.walk)
        assert run_to_walk(pa, run) == witness.walk

    def test_enumerated_runs_round_trip(self):
        for machine in (anbn(), load_machine(fixture_path("ex2.ncm"))):
            pa = phase_automaton(machine)
            sample = enumerate_language(machine, caps_for(6))
            for word in sample.words:
                for run in run_word(machine, word).runs:
                    walk = run_to_walk(pa, run)
                    back = run_from_walk(pa, walk)
                    assert back.word == run.word
                    assert back.labels == run.labels

    def test_replay_rejects_broken_walks(self):
        pa = phase_automaton(anbn())
        witness = solve(to_flow_system(pa))
        with pytest.raises((MachineError, KeyError)):
            run_from_walk(pa, witness.walk[1:])


class TestGrowth:
    def test_anbn_pumps_through_the_loop_pair(self):
        pa = phase_automaton(anbn())
        fs = to_flow_system(pa)
        pump = solve_unbounded(fs, INPUT_CLASS)
        assert pump is not None
        base_run = witness_run(pa, pump.base)
        validate_run(pa.machine, base_run)

    def test_loop_fixture_language_is_finite(self):
        machine = load_machine(fixture_path("loop.ncm"))
        fs = to_flow_system(phase_automaton(machine))
        assert solve_unbounded(fs, INPUT_CLASS) is None
