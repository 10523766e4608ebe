"""Workbench for one-way reversal-bounded multicounter machines.

The package decides classic questions about these machines exactly
(membership, emptiness, infiniteness, behavior-pattern satisfaction,
letter/word boundedness), builds the constructions that the theory
rests on (normal forms, semilinear-set compilers, family generators,
full-trio closures), and ships a brute-force oracle for validating any
of it on small instances.
"""

from .build import (
    TrioDecomposition,
    compile_linear_set,
    compile_two_positive,
    concat,
    distinct_normal_form,
    greedy_split,
    homomorphism_image,
    intersect_regular,
    inverse_homomorphism,
    reconstruct,
    reversal,
    sbd_form,
    self_describing,
    trio_decomposition,
    union,
)
from .decide import (
    BehaviorCounterexample,
    Budget,
    PumpEvidence,
    Verdict,
    bd_with_bound,
    contained_in_regular,
    format_witness,
    infer_family,
    is_empty,
    is_infinite,
    is_letter_bounded,
    is_m_bounded,
    membership,
    restrict_to_instructions,
    satisfies,
)
from .flows import (
    FlowEdge,
    FlowSystem,
    FlowWitness,
    Infeasible,
    PumpWitness,
    pump_walk,
    solve,
    solve_unbounded,
)
from .machine import (
    Configuration,
    CounterMachine,
    MachineError,
    MachineFormatError,
    Run,
    Transition,
    WellFormedReport,
    dump_machine,
    load_machine,
    parse_machine,
    save_machine,
    validate_well_formed,
)
from .nfa import Dfa, Nfa, ResourceBudgetError, parse_word_regex
from .oracle import (
    EquivReport,
    SimCaps,
    bounded_equiv,
    caps_for,
    enumerate_behaviors,
    enumerate_language,
    run_word,
)
from .patterns import (
    FAMILY_TAGS,
    InstructionExpr,
    classify_families,
    eq_acceptor,
    expr_to_nfa,
    generator,
    is_distinct,
    parse_pattern,
    render,
)
from .phase import PhaseAutomaton, phase_automaton, to_flow_system
from .semilinear import (
    LinearSet,
    SemilinearSet,
    is_m_positive,
    load_semilinear,
    parse_semilinear,
    semilinear_member,
)

__all__ = [name for name in dir() if not name.startswith("_")]
