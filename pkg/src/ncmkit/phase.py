"""Finite phase abstraction of well-formed counter machines.

Each counter of a well-formed machine lives through four phases: untouched
at zero (Z0), strictly positive while increasing (INC), strictly positive
while decreasing (DEC), and back at zero for good (ZF).  Pairing machine
states with per-counter phase vectors yields a finite automaton whose
edges are the liftable machine transitions; decrements guess whether the
counter just emptied.

The point of the abstraction: walks from the initial node to a node whose
phases are all zero (Z0 or ZF), using each counter's increment edges
exactly as often as its decrement edges, correspond one-to-one with
accepting runs of the machine.  Replaying such a walk never breaks a
guard: a counter in INC or DEC still has its emptying decrement ahead of
it, so its value is positive, while Z0 and ZF pin the value to zero.
That turns emptiness and infiniteness questions into balanced-walk
questions over a flow system.
"""

from __future__ import annotations

from dataclasses import dataclass

from .flows import FlowEdge, FlowSystem, FlowWitness
from .machine import (
    Configuration,
    CounterMachine,
    MachineError,
    Run,
    apply_transition,
    c_sym,
    d_sym,
    initial_configuration,
    phase_consistent,
    phase_successors,
    validate_run,
    validate_well_formed,
)

PH_Z0, PH_INC, PH_DEC, PH_ZF = "Z0", "INC", "DEC", "ZF"

INPUT_CLASS = "input"


def _node_name(state: str, phases: tuple[str, ...]) -> str:
    return f"{state}|{','.join(phases)}"


@dataclass(frozen=True)
class PhaseEdge:
    eid: str
    src: str
    dst: str
    transition: str


@dataclass(frozen=True)
class PhaseAutomaton:
    machine: CounterMachine
    nodes: frozenset
    edges: tuple[PhaseEdge, ...]
    initial: str
    finals: frozenset

    def edge_by_id(self) -> dict:
        return {e.eid: e for e in self.edges}


def phase_automaton(machine: CounterMachine) -> PhaseAutomaton:
    """Lift a well-formed machine to its reachable, co-reachable phase graph.

    Raises MachineError when the machine fails the well-formedness check:
    the walk/run correspondence below is only a theorem for well-formed
    machines (they accept with all counters at zero, which is what the
    balance condition encodes)."""
    report = validate_well_formed(machine)
    if not report.is_well_formed:
        raise MachineError(
            "phase abstraction needs a well-formed machine: "
            + "; ".join(f"{v.kind}: {v.detail}" for v in report.violations))

    adj = machine.outgoing()
    start = (machine.initial, (PH_Z0,) * machine.k)
    seen = {start}
    frontier = [start]
    raw_edges = []
    while frontier:
        state, phases = frontier.pop()
        for t in adj[state]:
            if not phase_consistent(t.guard, phases):
                continue
            for phases2 in phase_successors(phases, t.delta):
                raw_edges.append(((state, phases), t, (t.dst, phases2)))
                node = (t.dst, phases2)
                if node not in seen:
                    seen.add(node)
                    frontier.append(node)

    final_nodes = {
        (q, ph) for (q, ph) in seen
        if q in machine.finals and all(p in (PH_Z0, PH_ZF) for p in ph)
    }
    # co-reachability prune: keep nodes that can still reach a final node
    back: dict = {node: [] for node in seen}
    for src, _, dst in raw_edges:
        back[dst].append(src)
    live = set(final_nodes)
    stack = list(final_nodes)
    while stack:
        node = stack.pop()
        for prev in back[node]:
            if prev not in live:
                live.add(prev)
                stack.append(prev)

    edges = []
    edge_ids = set()
    for src, t, dst in raw_edges:
        if src not in live or dst not in live:
            continue
        src_name = _node_name(*src)
        dst_name = _node_name(*dst)
        eid = f"{t.label}:{src_name}>{dst_name}"
        if eid in edge_ids:
            continue
        edge_ids.add(eid)
        edges.append(PhaseEdge(eid, src_name, dst_name, t.label))
    edges.sort(key=lambda e: e.eid)

    initial = _node_name(*start)
    if start not in live:
        # nothing accepts; keep a one-node automaton with no finals
        return PhaseAutomaton(machine, frozenset({initial}), (), initial,
                              frozenset())
    node_names = frozenset(_node_name(*node) for node in live)
    finals = frozenset(_node_name(*node) for node in final_nodes)
    return PhaseAutomaton(machine, node_names, tuple(edges), initial, finals)


def to_flow_system(pa: PhaseAutomaton) -> FlowSystem:
    """Express accepting runs as balanced source-to-sink walks.

    Per counter i, edges lifting an increment carry class C_i and edges
    lifting a decrement carry class D_i; the balance pairs force equal
    usage, i.e. the counter returns to zero.  Edges that read an input
    symbol carry the input class, so word growth is a class total."""
    machine = pa.machine
    by_label = machine.by_label()
    flow_edges = []
    for e in pa.edges:
        t = by_label[e.transition]
        classes = set()
        for i, d in enumerate(t.delta, 1):
            if d > 0:
                classes.add(c_sym(i))
            elif d < 0:
                classes.add(d_sym(i))
        if t.inp is not None:
            classes.add(INPUT_CLASS)
        flow_edges.append(FlowEdge(e.eid, e.src, e.dst, frozenset(classes)))
    balance = tuple((c_sym(i), d_sym(i)) for i in range(1, machine.k + 1))
    return FlowSystem(
        nodes=pa.nodes,
        edges=tuple(flow_edges),
        source=pa.initial,
        sinks=pa.finals,
        balance_pairs=balance,
    )


def run_from_walk(pa: PhaseAutomaton, walk) -> Run:
    """Replay a phase-graph walk into a validated accepting run."""
    machine = pa.machine
    by_edge = pa.edge_by_id()
    by_label = machine.by_label()
    word: list[str] = []
    for eid in walk:
        t = by_label[by_edge[eid].transition]
        if t.inp is not None:
            word.append(t.inp)
    configs = [initial_configuration(machine)]
    labels = []
    for eid in walk:
        t = by_label[by_edge[eid].transition]
        nxt = apply_transition(t, configs[-1], tuple(word))
        if nxt is None:
            raise MachineError(f"walk replay stuck at edge {eid!r}")
        configs.append(nxt)
        labels.append(t.label)
    return Run(tuple(word), tuple(labels), tuple(configs))


def run_to_walk(pa: PhaseAutomaton, run: Run) -> tuple[str, ...]:
    """Annotate an accepting run with phases, yielding a phase-graph walk.

    The inverse of run_from_walk up to the decrement-to-ZF guess: the
    counter's final decrement is tagged as the zero-entering one."""
    machine = pa.machine
    by_label = machine.by_label()
    last_dec = [None] * machine.k
    for step, label in enumerate(run.labels):
        t = by_label[label]
        for i, d in enumerate(t.delta):
            if d < 0:
                last_dec[i] = step
    phases = [PH_Z0] * machine.k
    walk = []
    known = pa.edge_by_id()
    for step, label in enumerate(run.labels):
        t = by_label[label]
        src_name = _node_name(t.src, tuple(phases))
        for i, d in enumerate(t.delta):
            if d > 0:
                phases[i] = PH_INC
            elif d < 0:
                phases[i] = PH_ZF if step == last_dec[i] else PH_DEC
        dst_name = _node_name(t.dst, tuple(phases))
        eid = f"{label}:{src_name}>{dst_name}"
        if eid not in known:
            raise MachineError(f"run step {step} has no phase edge ({eid!r})")
        walk.append(eid)
    return tuple(walk)


def witness_run(pa: PhaseAutomaton, witness: FlowWitness) -> Run:
    run = run_from_walk(pa, witness.walk)
    validate_run(pa.machine, run)
    return run
