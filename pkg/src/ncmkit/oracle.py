"""Bounded simulation of counter machines.

Everything here explores the configuration space directly, with explicit
caps on word length, counter values, silent-move chains, and total work.
Results carry a truncation flag: when a cap pruned anything, answers are
only authoritative for the explored region.
"""

from __future__ import annotations

from dataclasses import dataclass

from .machine import (
    Configuration,
    CounterMachine,
    Run,
    apply_transition,
    guard_matches,
)


@dataclass(frozen=True)
class SimCaps:
    """Exploration limits for bounded simulation.

    max_counter_value defaults to 2 * max_word_len + 8 (enough slack for
    counters that shadow input positions); max_lambda_run defaults to the
    size of the capped configuration space, which silent chains cannot
    exceed without repeating a configuration.
    """

    max_word_len: int
    max_counter_value: int | None = None
    max_lambda_run: int | None = None
    max_total_steps: int = 2_000_000

    def counter_cap(self) -> int:
        if self.max_counter_value is not None:
            return self.max_counter_value
        return 2 * self.max_word_len + 8

    def lambda_cap(self, machine: CounterMachine) -> int:
        if self.max_lambda_run is not None:
            return self.max_lambda_run
        return len(machine.states) * (self.counter_cap() + 1) ** machine.k


def caps_for(length: int, **overrides) -> SimCaps:
    return SimCaps(max_word_len=length, **overrides)


@dataclass(frozen=True)
class LanguageSample:
    """Accepted words up to a length horizon, length-lexicographic."""

    words: tuple[tuple[str, ...], ...]
    truncated: bool
    max_word_len: int

    def as_set(self) -> set:
        return set(self.words)


class _Budget:
    def __init__(self, total: int) -> None:
        self.left = total
        self.truncated = False

    def spend(self, n: int = 1) -> bool:
        if self.left < n:
            self.truncated = True
            return False
        self.left -= n
        return True


def _lambda_closure_configs(
    machine: CounterMachine,
    configs,
    adj,
    cap: int,
    ccap: int,
    budget: _Budget,
) -> tuple[set, bool]:
    """All (state, counters) pairs reachable by silent moves, capped."""
    seen = set(configs)
    stack = list(configs)
    steps = 0
    truncated = False
    while stack:
        state, counters = stack.pop()
        for t in adj[state]:
            if t.inp is not None or not guard_matches(t.guard, counters):
                continue
            nxt = tuple(c + d for c, d in zip(counters, t.delta))
            if any(c > ccap for c in nxt):
                truncated = True
                continue
            node = (t.dst, nxt)
            if node in seen:
                continue
            steps += 1
            if steps > cap or not budget.spend():
                truncated = True
                return seen, truncated
            seen.add(node)
            stack.append(node)
    return seen, truncated


def enumerate_language(
    machine: CounterMachine, caps: SimCaps | int
) -> LanguageSample:
    """All accepted words of length up to the cap, in length-lex order.

    The search walks the configuration space breadth-first per word
    prefix, deduplicating (state, counters) per prefix; counter and
    silent-chain caps prune, and any pruning sets the truncated flag.
    """
    if isinstance(caps, int):
        caps = SimCaps(max_word_len=caps)
    adj = machine.outgoing()
    ccap = caps.counter_cap()
    lcap = caps.lambda_cap(machine)
    budget = _Budget(caps.max_total_steps)
    symbols = sorted(machine.alphabet)
    zero = (0,) * machine.k

    start, truncated = _lambda_closure_configs(
        machine, {(machine.initial, zero)}, adj, lcap, ccap, budget
    )
    words: list[tuple[str, ...]] = []

    def accepted(configs) -> bool:
        return any(state in machine.finals for state, _ in configs)

    frontier: list[tuple[tuple[str, ...], frozenset]] = [((), frozenset(start))]
    if accepted(start):
        words.append(())
    for _ in range(caps.max_word_len):
        stratum: dict[tuple[str, ...], set] = {}
        for word, configs in frontier:
            for state, counters in configs:
                for t in adj[state]:
                    if t.inp is None or not guard_matches(t.guard, counters):
                        continue
                    if not budget.spend():
                        truncated = True
                        break
                    nxt = tuple(c + d for c, d in zip(counters, t.delta))
                    if any(c > ccap for c in nxt):
                        truncated = True
                        continue
                    stratum.setdefault(word + (t.inp,), set()).add((t.dst, nxt))
        frontier = []
        for word in sorted(stratum):
            closed, trunc2 = _lambda_closure_configs(
                machine, stratum[word], adj, lcap, ccap, budget
            )
            truncated = truncated or trunc2
            if accepted(closed):
                words.append(word)
            frontier.append((word, frozenset(closed)))
        if budget.truncated:
            truncated = True
            break
    return LanguageSample(tuple(words), truncated, caps.max_word_len)


def enumerate_behaviors(
    machine: CounterMachine, caps: SimCaps | int, mode: str = "full"
) -> LanguageSample:
    """Accepted instruction words (counter-change sequences) up to a cap."""
    from .build import self_describing

    return enumerate_language(self_describing(machine, mode), caps)


@dataclass(frozen=True)
class RunSearch:
    """Accepting runs found for one word; truncated when caps pruned."""

    runs: tuple[Run, ...]
    truncated: bool


def run_word(
    machine: CounterMachine, word, caps: SimCaps | int | None = None
) -> RunSearch:
    """All accepting runs on the word that repeat no configuration.

    Runs that revisit a (state, position, counters) triple are spliceable
    down to ones that do not, so searching the repeat-free runs decides
    membership exactly (within counter caps).
    """
    word = tuple(word)
    if caps is None:
        caps = SimCaps(max_word_len=len(word))
    elif isinstance(caps, int):
        caps = SimCaps(max_word_len=caps)
    adj = machine.outgoing()
    ccap = caps.counter_cap()
    budget = _Budget(caps.max_total_steps)
    zero = (0,) * machine.k
    found: list[Run] = []
    seen_labels: set[tuple[str, ...]] = set()
    truncated = False

    start = Configuration(machine.initial, 0, zero)
    path_cfg = [start]
    path_lab: list[str] = []
    on_path = {(start.state, start.pos, start.counters)}

    def dfs() -> None:
        nonlocal truncated
        cfg = path_cfg[-1]
        if not budget.spend():
            truncated = True
            return
        if cfg.pos == len(word) and cfg.state in machine.finals:
            labels = tuple(path_lab)
            if labels not in seen_labels:
                seen_labels.add(labels)
                found.append(Run(word, labels, tuple(path_cfg)))
        for t in adj[cfg.state]:
            if not guard_matches(t.guard, cfg.counters):
                continue
            if t.inp is not None:
                if cfg.pos >= len(word) or word[cfg.pos] != t.inp:
                    continue
            counters = tuple(c + d for c, d in zip(cfg.counters, t.delta))
            if any(c > ccap for c in counters):
                truncated = True
                continue
            pos = cfg.pos + (0 if t.inp is None else 1)
            key = (t.dst, pos, counters)
            if key in on_path:
                continue
            on_path.add(key)
            path_cfg.append(Configuration(t.dst, pos, counters))
            path_lab.append(t.label)
            dfs()
            path_lab.pop()
            path_cfg.pop()
            on_path.discard(key)

    dfs()
    if budget.truncated:
        truncated = True
    return RunSearch(tuple(found), truncated)


@dataclass(frozen=True)
class EquivReport:
    """Outcome of comparing two machines' languages up to a horizon.

    status is "equal" (no difference found, nothing pruned), "differs"
    (counterexample set), or "equal-within-explored" (no difference, but
    a cap pruned part of the space so longer words may disagree).
    """

    status: str
    counterexample: tuple[str, ...] | None
    side: str | None
    max_word_len: int

    @property
    def equal(self) -> bool:
        return self.status in ("equal", "equal-within-explored")


def bounded_equiv(
    left: CounterMachine, right: CounterMachine, caps: SimCaps | int
) -> EquivReport:
    """Compare accepted languages up to a length horizon.

    Reports the length-lex least word in the symmetric difference, with
    the side that accepts it ("left-only"/"right-only").
    """
    if isinstance(caps, int):
        caps = SimCaps(max_word_len=caps)
    a = enumerate_language(left, caps)
    b = enumerate_language(right, caps)
    sa, sb = a.as_set(), b.as_set()
    diff = sa ^ sb
    if diff:
        word = min(diff, key=lambda w: (len(w), w))
        side = "left-only" if word in sa else "right-only"
        return EquivReport("differs", word, side, caps.max_word_len)
    if a.truncated or b.truncated:
        return EquivReport("equal-within-explored", None, None, caps.max_word_len)
    return EquivReport("equal", None, None, caps.max_word_len)
