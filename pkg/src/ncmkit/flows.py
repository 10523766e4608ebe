"""Exact feasibility of balanced source-to-sink walks in labeled digraphs.

A FlowSystem asks for a walk from the source to one of the sinks whose
edge-usage vector satisfies per-edge lower bounds and a set of balance
pairs (two edge classes whose totals must agree), optionally with some
class used at least once.  solve() decides feasibility exactly with
integer arithmetic: the system of conservation/balance equations is
checked for rational consistency, intervals are propagated to a fixpoint
with divisibility checks, and a best-first branch-and-bound (splitting
variable intervals, bounded by the standard small-solution box for
integer linear systems) searches for a usable assignment.  Walks must
have connected, source-anchored support; assignments that fail this are
excluded by forbidding their exact support pattern and continuing.

Everything is deterministic; exceeding the node budget raises a resource
error rather than ever returning a wrong answer.
"""

from __future__ import annotations

import heapq
import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .nfa import ResourceBudgetError

DEFAULT_NODE_BUDGET = 200_000


@dataclass(frozen=True)
class FlowEdge:
    eid: str
    src: str
    dst: str
    classes: frozenset = frozenset()
    lower: int = 0

    def __post_init__(self) -> None:
        if self.lower < 0:
            raise ValueError(f"edge {self.eid}: negative lower bound")


@dataclass(frozen=True)
class FlowSystem:
    nodes: frozenset
    edges: tuple[FlowEdge, ...]
    source: str
    sinks: frozenset
    balance_pairs: tuple[tuple[str, str], ...] = ()
    positive_class: str | None = None

    def __post_init__(self) -> None:
        if self.source not in self.nodes:
            raise ValueError("source not among nodes")
        if not self.sinks <= self.nodes:
            raise ValueError("sink not among nodes")
        seen = set()
        for e in self.edges:
            if e.eid in seen:
                raise ValueError(f"duplicate edge id {e.eid!r}")
            seen.add(e.eid)
            if e.src not in self.nodes or e.dst not in self.nodes:
                raise ValueError(f"edge {e.eid}: undeclared endpoint")

    def class_edges(self, name: str) -> list[FlowEdge]:
        return [e for e in self.edges if name in e.classes]


@dataclass(frozen=True)
class FlowWitness:
    """Edge multiplicities plus a walk realizing them exactly."""

    multiplicities: dict
    walk: tuple[str, ...]
    sink: str
    box_bound: int
    bound_note: str


@dataclass(frozen=True)
class Infeasible:
    reason: str
    box_bound: int
    bound_note: str


@dataclass(frozen=True)
class PumpWitness:
    """A base walk plus a repeatable balanced circulation.

    Adding the circulation to the base multiplicities any number of times
    keeps every constraint satisfied, so the underlying language of walks
    is infinite in the growth class."""

    base: FlowWitness
    circulation: dict


# ---------------------------------------------------------------------------
# Linear rows

_EQ = "eq"
_GE = "ge"


@dataclass
class _Row:
    coeffs: dict  # var index -> int
    rhs: int
    kind: str


def _row_from_fraction(coeffs: dict, rhs: Fraction) -> _Row:
    denominators = [c.denominator for c in coeffs.values()] + [rhs.denominator]
    scale = 1
    for d in denominators:
        scale = scale * d // gcd(scale, d)
    out = {v: int(c * scale) for v, c in coeffs.items() if c != 0}
    return _Row(out, int(rhs * scale), _EQ)


def _eliminate(rows: list[_Row], n_vars: int):
    """Gaussian elimination over the rationals on the equality rows.

    Returns (consistent, pivot_vars, triangular_rows); the triangular
    rows are equivalent consequences with integer coefficients, useful
    for propagation because each introduces one pivot variable."""
    matrix = []
    for row in rows:
        if row.kind != _EQ:
            continue
        vec = [Fraction(0)] * (n_vars + 1)
        for v, c in row.coeffs.items():
            vec[v] += c
        vec[n_vars] = Fraction(row.rhs)
        matrix.append(vec)
    pivots = []
    row_at = 0
    for col in range(n_vars):
        pivot = None
        for r in range(row_at, len(matrix)):
            if matrix[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        matrix[row_at], matrix[pivot] = matrix[pivot], matrix[row_at]
        head = matrix[row_at][col]
        matrix[row_at] = [x / head for x in matrix[row_at]]
        for r in range(len(matrix)):
            if r != row_at and matrix[r][col] != 0:
                factor = matrix[r][col]
                matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[row_at])]
        pivots.append(col)
        row_at += 1
    for r in range(row_at, len(matrix)):
        if matrix[r][n_vars] != 0:
            return False, pivots, []
    triangular = []
    for vec in matrix[:row_at]:
        coeffs = {v: vec[v] for v in range(n_vars) if vec[v] != 0}
        triangular.append(_row_from_fraction(coeffs, vec[n_vars]))
    return True, pivots, triangular


# ---------------------------------------------------------------------------
# Interval propagation


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _floor_div(a: int, b: int) -> int:
    return a // b


def _propagate(rows: list[_Row], intervals: list, sweeps: int = 60) -> bool:
    """Tighten [lo, hi] intervals against the rows; False on contradiction."""
    for _ in range(sweeps):
        changed = False
        for row in rows:
            lo_sum = 0
            hi_sum = 0
            for v, c in row.coeffs.items():
                lo, hi = intervals[v]
                if c >= 0:
                    lo_sum += c * lo
                    hi_sum += c * hi
                else:
                    lo_sum += c * hi
                    hi_sum += c * lo
            if row.kind == _EQ:
                if row.rhs < lo_sum or row.rhs > hi_sum:
                    return False
                g = 0
                fixed_part = 0
                any_unfixed = False
                for v, c in row.coeffs.items():
                    if intervals[v][0] == intervals[v][1]:
                        fixed_part += c * intervals[v][0]
                    else:
                        any_unfixed = True
                        g = gcd(g, abs(c))
                if not any_unfixed:
                    if fixed_part != row.rhs:
                        return False
                elif g and (row.rhs - fixed_part) % g != 0:
                    return False
            else:
                if hi_sum < row.rhs:
                    return False
            for v, c in row.coeffs.items():
                lo, hi = intervals[v]
                if c >= 0:
                    rest_lo = lo_sum - c * lo
                    rest_hi = hi_sum - c * hi
                else:
                    rest_lo = lo_sum - c * hi
                    rest_hi = hi_sum - c * lo
                # c*y must land in [rhs - rest_hi, rhs - rest_lo] for
                # equality rows, and at least rhs - rest_hi for >= rows.
                needed_low = row.rhs - rest_hi
                if c > 0:
                    new_lo = max(lo, _ceil_div(needed_low, c))
                    new_hi = hi
                    if row.kind == _EQ:
                        new_hi = min(hi, _floor_div(row.rhs - rest_lo, c))
                else:
                    new_hi = min(hi, _floor_div(needed_low, c))
                    new_lo = lo
                    if row.kind == _EQ:
                        new_lo = max(lo, _ceil_div(row.rhs - rest_lo, c))
                if new_lo > new_hi:
                    return False
                if (new_lo, new_hi) != (lo, hi):
                    intervals[v] = (new_lo, new_hi)
                    changed = True
        if not changed:
            return True
    return True


# ---------------------------------------------------------------------------
# Problem assembly


def _trim(fs: FlowSystem):
    """Keep only edges on some source-to-sink path; None if a required
    edge is cut away (its lower bound can then never be met)."""
    out_adj = defaultdict(list)
    in_adj = defaultdict(list)
    for e in fs.edges:
        out_adj[e.src].append(e.dst)
        in_adj[e.dst].append(e.src)
    reach = {fs.source}
    stack = [fs.source]
    while stack:
        v = stack.pop()
        for w in out_adj[v]:
            if w not in reach:
                reach.add(w)
                stack.append(w)
    coreach = set(fs.sinks)
    stack = list(fs.sinks)
    while stack:
        v = stack.pop()
        for w in in_adj[v]:
            if w not in coreach:
                coreach.add(w)
                stack.append(w)
    kept = [e for e in fs.edges if e.src in reach and e.dst in coreach
            and e.src in coreach and e.dst in reach]
    kept_ids = {e.eid for e in kept}
    for e in fs.edges:
        if e.lower > 0 and e.eid not in kept_ids:
            return None
    kept_sinks = sorted(t for t in fs.sinks if t in reach)
    return kept, kept_sinks


def _box_bound(n_vars: int, rows: list[_Row], lowers: list[int]) -> tuple[int, str]:
    coeff_max = 1
    for row in rows:
        for c in row.coeffs.values():
            coeff_max = max(coeff_max, abs(c))
        coeff_max = max(coeff_max, abs(row.rhs))
    for lo in lowers:
        coeff_max = max(coeff_max, lo)
    m = max(1, len(rows))
    bound = n_vars * (m * coeff_max) ** (2 * m + 1) if n_vars else 0
    digits = str(bound)
    shown = digits if len(digits) <= 40 else f"{digits[0]}.{digits[1:4]}e+{len(digits) - 1}"
    note = (
        f"any feasible system has a solution inside 0 <= y_i <= "
        f"n*(m*a)^(2m+1) = {shown} (n={n_vars} variables, m={m} rows, "
        f"a={coeff_max} largest magnitude); the search is exhaustive "
        f"within that box"
    )
    return bound, note


def _edge_depths(edges: list[FlowEdge], source: str) -> dict:
    """BFS depth of each edge's tail from the source (for branch order)."""
    adj = defaultdict(list)
    for e in edges:
        adj[e.src].append(e.dst)
    depth = {source: 0}
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in depth:
                    depth[w] = d
                    nxt.append(w)
        frontier = nxt
    return {e.eid: depth.get(e.src, 0) for e in edges}


@dataclass
class _Problem:
    var_names: list
    lowers: list
    rows: list
    branch_order: list
    real_vars: list          # indices counted by the search priority
    y_of_edge: dict          # eid -> var index
    sink_of_var: dict        # var index -> sink node
    box: int
    note: str


def _dedup_rows(rows: list[_Row]) -> list[_Row]:
    seen = set()
    out = []
    for row in rows:
        key = (row.kind, row.rhs, tuple(sorted(row.coeffs.items())))
        if key not in seen:
            seen.add(key)
            out.append(row)
    return out


def _assemble(fs: FlowSystem, kept: list[FlowEdge], kept_sinks: list,
              with_circulation: bool, growth_class: str | None):
    var_names: list = []
    lowers: list[int] = []
    y_of_edge: dict = {}
    z_of_edge: dict = {}
    sink_of_var: dict = {}

    depths = _edge_depths(kept, fs.source)
    ordered_edges = sorted(kept, key=lambda e: (depths[e.eid], e.eid))
    for e in ordered_edges:
        y_of_edge[e.eid] = len(var_names)
        var_names.append(f"y:{e.eid}")
        lowers.append(e.lower)
    sink_vars = []
    for t in kept_sinks:
        idx = len(var_names)
        sink_of_var[idx] = t
        sink_vars.append(idx)
        var_names.append(f"sink:{t}")
        lowers.append(0)
    if with_circulation:
        for e in ordered_edges:
            z_of_edge[e.eid] = len(var_names)
            var_names.append(f"z:{e.eid}")
            lowers.append(0)

    rows: list[_Row] = []
    # conservation of the walk flow, with the sink choice as extra outflow
    nodes = sorted({e.src for e in kept} | {e.dst for e in kept}
                   | {fs.source} | set(kept_sinks))
    for v in nodes:
        coeffs: dict = {}
        for e in kept:
            if e.src == v:
                coeffs[y_of_edge[e.eid]] = coeffs.get(y_of_edge[e.eid], 0) + 1
            if e.dst == v:
                coeffs[y_of_edge[e.eid]] = coeffs.get(y_of_edge[e.eid], 0) - 1
        for idx in sink_vars:
            if sink_of_var[idx] == v:
                coeffs[idx] = coeffs.get(idx, 0) + 1
        coeffs = {k: c for k, c in coeffs.items() if c != 0}
        rhs = 1 if v == fs.source else 0
        if coeffs or rhs:
            rows.append(_Row(coeffs, rhs, _EQ))
    rows.append(_Row({idx: 1 for idx in sink_vars}, 1, _EQ))
    for cls_a, cls_b in fs.balance_pairs:
        coeffs = {}
        for e in kept:
            c = (1 if cls_a in e.classes else 0) - (1 if cls_b in e.classes else 0)
            if c:
                coeffs[y_of_edge[e.eid]] = c
        rows.append(_Row(coeffs, 0, _EQ))
    if fs.positive_class is not None:
        coeffs = {y_of_edge[e.eid]: 1 for e in kept if fs.positive_class in e.classes}
        rows.append(_Row(coeffs, 1, _GE))
    if with_circulation:
        for v in nodes:
            coeffs = {}
            for e in kept:
                if e.src == v:
                    coeffs[z_of_edge[e.eid]] = coeffs.get(z_of_edge[e.eid], 0) + 1
                if e.dst == v:
                    coeffs[z_of_edge[e.eid]] = coeffs.get(z_of_edge[e.eid], 0) - 1
            coeffs = {k: c for k, c in coeffs.items() if c != 0}
            if coeffs:
                rows.append(_Row(coeffs, 0, _EQ))
        for cls_a, cls_b in fs.balance_pairs:
            coeffs = {}
            for e in kept:
                c = (1 if cls_a in e.classes else 0) - (1 if cls_b in e.classes else 0)
                if c:
                    coeffs[z_of_edge[e.eid]] = c
            rows.append(_Row(coeffs, 0, _EQ))
        coeffs = {z_of_edge[e.eid]: 1 for e in kept if growth_class in e.classes}
        rows.append(_Row(coeffs, 1, _GE))

    rows = _dedup_rows(rows)
    box, note = _box_bound(len(var_names), rows, lowers)
    real_vars = [y_of_edge[e.eid] for e in kept]
    if with_circulation:
        real_vars += [z_of_edge[e.eid] for e in kept]

    # branch order: sink choices first, then variables whose edge tail is
    # farthest from the source, edge ids breaking ties
    edge_rank = {}
    for e in kept:
        edge_rank[y_of_edge[e.eid]] = (1, -depths[e.eid], e.eid)
        if with_circulation:
            edge_rank[z_of_edge[e.eid]] = (2, -depths[e.eid], e.eid)
    for idx in sink_vars:
        edge_rank[idx] = (0, 0, sink_of_var[idx])
    branch_order = sorted(range(len(var_names)), key=lambda i: edge_rank[i])

    problem = _Problem(var_names, lowers, rows, branch_order, real_vars,
                       y_of_edge, sink_of_var, box, note)
    return problem, z_of_edge


# ---------------------------------------------------------------------------
# Search


class _Search:
    def __init__(self, problem: _Problem, node_budget: int, poll=None):
        self.p = problem
        self.budget = node_budget
        self.poll = poll
        self.used = 0
        consistent, pivots, triangular = _eliminate(problem.rows, len(problem.var_names))
        self.consistent = consistent
        self.pivot_rows = triangular
        pivot_set = set(pivots)
        self.branch_vars = [v for v in problem.branch_order if v not in pivot_set]
        self.rows = _dedup_rows(problem.rows + triangular)
        self.forbidden: set = set()

    def _priority(self, intervals) -> int:
        return sum(intervals[v][0] for v in self.p.real_vars)

    def _leaf_values(self, intervals):
        """Pin pivot variables by back-substitution; None if impossible."""
        values = [None] * len(self.p.var_names)
        for v in self.branch_vars:
            lo, hi = intervals[v]
            if lo != hi:
                return None
            values[v] = lo
        for row in self.pivot_rows:
            pivot = None
            acc = row.rhs
            coeff = 0
            for v, c in row.coeffs.items():
                if values[v] is None:
                    if pivot is not None:
                        return None
                    pivot, coeff = v, c
                else:
                    acc -= c * values[v]
            if pivot is None:
                if acc != 0:
                    return None
                continue
            if acc % coeff != 0:
                return None
            val = acc // coeff
            lo, hi = intervals[pivot]
            if not lo <= val <= hi:
                return None
            values[pivot] = val
        if any(v is None for v in values):
            return None
        for row in self.rows:
            total = sum(c * values[v] for v, c in row.coeffs.items())
            if row.kind == _EQ and total != row.rhs:
                return None
            if row.kind == _GE and total < row.rhs:
                return None
        return values

    def run(self, accept):
        """Best-first search; accept(values) returns a result or None."""
        if not self.consistent:
            return None
        base = [(self.p.lowers[i], self.p.box) for i in range(len(self.p.var_names))]
        counter = itertools.count()
        start = [tuple(iv) for iv in base]
        heap = [(self._priority(start), next(counter), start)]
        while heap:
            _, _, frozen = heapq.heappop(heap)
            self.used += 1
            if self.used > self.budget:
                raise ResourceBudgetError(
                    f"flow search exceeded its node budget of {self.budget}")
            if self.poll is not None:
                self.poll()
            intervals = list(frozen)
            if not _propagate(self.rows, intervals):
                continue
            branch_var = None
            for v in self.branch_vars:
                if intervals[v][0] < intervals[v][1]:
                    branch_var = v
                    break
            if branch_var is None:
                values = self._leaf_values(intervals)
                if values is None:
                    continue
                result = accept(values)
                if result is not None:
                    return result
                continue
            lo, hi = intervals[branch_var]
            fixed = list(intervals)
            fixed[branch_var] = (lo, lo)
            heapq.heappush(heap, (self._priority(fixed), next(counter),
                                  [tuple(iv) for iv in fixed]))
            if lo + 1 <= hi:
                raised = list(intervals)
                raised[branch_var] = (lo + 1, hi)
                heapq.heappush(heap, (self._priority(raised), next(counter),
                                      [tuple(iv) for iv in raised]))
        return None


# ---------------------------------------------------------------------------
# Support connectivity and walk reconstruction


def _support_connected(edges: list[FlowEdge], used: dict, source: str) -> bool:
    """True when every used edge lies in the undirected closure of the
    source over used edges (so one walk can cover them all)."""
    live = [e for e in edges if used.get(e.eid, 0) > 0]
    if not live:
        return True
    adj = defaultdict(set)
    for e in live:
        adj[e.src].add(e.dst)
        adj[e.dst].add(e.src)
    seen = {source}
    stack = [source]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return all(e.src in seen and e.dst in seen for e in live)


def _euler_walk(edges: list[FlowEdge], used: dict, source: str, sink: str):
    """Deterministic Eulerian trail over the used multiset, source to sink."""
    final = object()
    adj: dict = defaultdict(list)
    for e in sorted(edges, key=lambda e: e.eid, reverse=True):
        adj[e.src].extend([(e.eid, e.dst)] * used.get(e.eid, 0))
    adj[sink].insert(0, (None, final))
    trail = []
    stack: list = [(source, None)]
    while stack:
        v, via = stack[-1]
        if adj[v]:
            eid, w = adj[v].pop()
            stack.append((w, eid))
        else:
            stack.pop()
            if via is not None:
                trail.append(via)
    trail.reverse()
    return tuple(eid for eid in trail if eid is not None)


def validate_witness(fs: FlowSystem, witness: FlowWitness) -> list:
    """All the ways a witness fails to certify its system; empty if valid."""
    problems = []
    by_id = {e.eid: e for e in fs.edges}
    for eid, count in witness.multiplicities.items():
        if eid not in by_id:
            problems.append(f"unknown edge {eid!r}")
        elif count < 0:
            problems.append(f"negative multiplicity on {eid!r}")
    for e in fs.edges:
        if witness.multiplicities.get(e.eid, 0) < e.lower:
            problems.append(f"edge {e.eid!r} used below its lower bound")
    if witness.sink not in fs.sinks:
        problems.append(f"walk ends at {witness.sink!r}, not a sink")
    at = fs.source
    walk_counts: dict = defaultdict(int)
    for eid in witness.walk:
        e = by_id.get(eid)
        if e is None:
            problems.append(f"walk uses unknown edge {eid!r}")
            break
        if e.src != at:
            problems.append(f"walk breaks at {eid!r}: at {at!r}, edge leaves {e.src!r}")
            break
        walk_counts[eid] += 1
        at = e.dst
    else:
        if at != witness.sink:
            problems.append(f"walk stops at {at!r} instead of {witness.sink!r}")
        for eid in set(walk_counts) | set(witness.multiplicities):
            if walk_counts.get(eid, 0) != witness.multiplicities.get(eid, 0):
                problems.append(f"walk uses {eid!r} {walk_counts.get(eid, 0)} times, "
                                f"multiplicity says {witness.multiplicities.get(eid, 0)}")
    for cls_a, cls_b in fs.balance_pairs:
        total_a = sum(witness.multiplicities.get(e.eid, 0) for e in fs.class_edges(cls_a))
        total_b = sum(witness.multiplicities.get(e.eid, 0) for e in fs.class_edges(cls_b))
        if total_a != total_b:
            problems.append(f"balance ({cls_a!r}, {cls_b!r}) broken: {total_a} vs {total_b}")
    if fs.positive_class is not None:
        total = sum(witness.multiplicities.get(e.eid, 0)
                    for e in fs.class_edges(fs.positive_class))
        if total < 1:
            problems.append(f"class {fs.positive_class!r} never used")
    return problems


# ---------------------------------------------------------------------------
# Rational feasibility (phase-1 simplex)


def _lp_feasible(rows: list[tuple[dict, int]], n_vars: int) -> bool:
    """Is {A x = rhs, x >= 0} feasible over the rationals?

    Exact phase-1 simplex with Bland's rule (so it terminates), on
    sparse rows.  Used to refute systems outright before the integer
    search, which on its own can only refute by exhausting the box.
    """
    m = len(rows)
    if m == 0:
        return True
    width = n_vars + m
    tab: list[dict] = []
    rhs: list[Fraction] = []
    for r, (coeffs, b) in enumerate(rows):
        sign = -1 if b < 0 else 1
        row = {v: Fraction(sign * c) for v, c in coeffs.items() if c}
        row[n_vars + r] = Fraction(1)
        tab.append(row)
        rhs.append(Fraction(sign * b))
    basis = list(range(n_vars, width))
    while True:
        art_rows = [r for r in range(m) if basis[r] >= n_vars]
        entering = -1
        for j in sorted({j for r in art_rows for j in tab[r]}):
            cost = 1 if j >= n_vars else 0
            zj = sum(tab[r].get(j, 0) for r in art_rows)
            if cost - zj < 0:
                entering = j
                break
        if entering < 0:
            break
        leave = -1
        best = None
        for r in range(m):
            a = tab[r].get(entering, 0)
            if a > 0:
                ratio = rhs[r] / a
                if (best is None or ratio < best
                        or (ratio == best and basis[r] < basis[leave])):
                    best = ratio
                    leave = r
        if leave < 0:
            return True
        pivot = tab[leave][entering]
        new_row = {j: v / pivot for j, v in tab[leave].items()}
        new_rhs = rhs[leave] / pivot
        for r in range(m):
            if r == leave:
                continue
            factor = tab[r].get(entering)
            if not factor:
                continue
            row = tab[r]
            for j, v in new_row.items():
                value = row.get(j, 0) - factor * v
                if value:
                    row[j] = value
                else:
                    row.pop(j, None)
            rhs[r] -= factor * new_rhs
        tab[leave] = new_row
        rhs[leave] = new_rhs
        basis[leave] = entering
    residue = sum(rhs[r] for r in range(m) if basis[r] >= n_vars)
    return residue == 0


def _problem_lp_feasible(problem: "_Problem") -> bool:
    """Rational relaxation of an assembled system, lower bounds included.

    A negative answer proves the integer system infeasible without any
    search; a positive one hands over to the branch-and-bound."""
    rows: list[tuple[dict, int]] = []
    n = len(problem.var_names)
    slacks = 0
    for row in problem.rows:
        rhs = row.rhs - sum(c * problem.lowers[v] for v, c in row.coeffs.items())
        coeffs = dict(row.coeffs)
        if row.kind == _GE:
            coeffs[n + slacks] = -1
            slacks += 1
        rows.append((coeffs, rhs))
    return _lp_feasible(rows, n + slacks)


def _growth_circulation_possible(kept, balance_pairs, growth_class) -> bool:
    """Can any nonnegative balanced circulation use the growth class?

    Checks rational feasibility of {conservation, balance, growth = 1}
    over the kept edges; scaling makes this equivalent to growth >= 1.
    A negative answer rules out every pump witness.
    """
    index = {e.eid: i for i, e in enumerate(kept)}
    rows: list[tuple[dict, int]] = []
    nodes = sorted({e.src for e in kept} | {e.dst for e in kept})
    for v in nodes:
        coeffs: dict = {}
        for e in kept:
            if e.src == v:
                coeffs[index[e.eid]] = coeffs.get(index[e.eid], 0) + 1
            if e.dst == v:
                coeffs[index[e.eid]] = coeffs.get(index[e.eid], 0) - 1
        coeffs = {k: c for k, c in coeffs.items() if c != 0}
        if coeffs:
            rows.append((coeffs, 0))
    for cls_a, cls_b in balance_pairs:
        coeffs = {}
        for e in kept:
            c = (1 if cls_a in e.classes else 0) - (1 if cls_b in e.classes else 0)
            if c:
                coeffs[index[e.eid]] = c
        if coeffs:
            rows.append((coeffs, 0))
    growth = {index[e.eid]: 1 for e in kept if growth_class in e.classes}
    if not growth:
        return False
    rows.append((growth, 1))
    return _lp_feasible(rows, len(kept))


# ---------------------------------------------------------------------------
# Entry points


def solve(fs: FlowSystem, node_budget: int = DEFAULT_NODE_BUDGET,
          stats: dict | None = None, poll=None):
    """Find a balanced source-to-sink walk, or prove none exists.

    Returns a FlowWitness (with the realizing walk) or an Infeasible
    carrying the reason and the search-box note that makes the negative
    answer auditable.  Raises ResourceBudgetError when the budget runs
    out before either conclusion.  When stats is a dict, the number of
    search nodes expanded is written to stats['nodes']; poll, when
    given, is called once per expanded node and may raise to cancel."""
    trimmed = _trim(fs)
    if trimmed is None:
        box, note = _box_bound(0, [], [])
        return Infeasible("an edge with a positive lower bound lies on no "
                          "source-to-sink path", box, note)
    kept, kept_sinks = trimmed
    if not kept_sinks:
        box, note = _box_bound(0, [], [])
        return Infeasible("no sink is reachable from the source", box, note)
    if fs.positive_class is not None:
        if not any(fs.positive_class in e.classes for e in kept):
            box, note = _box_bound(0, [], [])
            return Infeasible(
                f"no usable edge carries class {fs.positive_class!r}", box, note)

    problem, _ = _assemble(fs, kept, kept_sinks, False, None)
    if not _problem_lp_feasible(problem):
        return Infeasible("the balance and conservation constraints admit no "
                          "fractional solution", problem.box, problem.note)
    search = _Search(problem, node_budget, poll)

    def accept(values):
        used = {e.eid: values[problem.y_of_edge[e.eid]] for e in kept}
        support = frozenset(eid for eid, c in used.items() if c > 0)
        if support in search.forbidden:
            return None
        if not _support_connected(kept, used, fs.source):
            search.forbidden.add(support)
            return None
        sink = next(problem.sink_of_var[v] for v in problem.sink_of_var
                    if values[v] == 1)
        walk = _euler_walk(kept, used, fs.source, sink)
        multiplicities = {e.eid: used.get(e.eid, 0) for e in fs.edges}
        return FlowWitness(multiplicities, walk, sink, problem.box, problem.note)

    try:
        witness = search.run(accept)
    finally:
        if stats is not None:
            stats["nodes"] = search.used
    if witness is None:
        return Infeasible("the balance and conservation constraints admit no "
                          "usable assignment", problem.box, problem.note)
    problems = validate_witness(fs, witness)
    if problems:
        raise AssertionError("internal witness check failed: " + "; ".join(problems))
    return witness


def solve_unbounded(fs: FlowSystem, growth_class: str,
                    node_budget: int = DEFAULT_NODE_BUDGET,
                    stats: dict | None = None, poll=None):
    """Find a walk plus a repeatable balanced circulation that grows the
    given class, or None when no such pair exists.

    The circulation conserves flow at every node, keeps every balance
    pair level, and uses the growth class at least once, so adding it to
    the base walk any number of times yields ever-larger valid walks.
    When stats is a dict, the number of search nodes expanded is written
    to stats['nodes']; poll, when given, is called once per expanded
    node and may raise to cancel."""
    trimmed = _trim(fs)
    if trimmed is None:
        return None
    kept, kept_sinks = trimmed
    if not kept_sinks:
        return None
    if fs.positive_class is not None:
        if not any(fs.positive_class in e.classes for e in kept):
            return None
    if not any(growth_class in e.classes for e in kept):
        return None
    if not _growth_circulation_possible(kept, fs.balance_pairs, growth_class):
        return None
    walk_problem, _ = _assemble(fs, kept, kept_sinks, False, None)
    if not _problem_lp_feasible(walk_problem):
        return None

    problem, z_of_edge = _assemble(fs, kept, kept_sinks, True, growth_class)
    search = _Search(problem, node_budget, poll)

    def accept(values):
        used = {e.eid: values[problem.y_of_edge[e.eid]] for e in kept}
        circ = {e.eid: values[z_of_edge[e.eid]] for e in kept}
        y_support = frozenset(eid for eid, c in used.items() if c > 0)
        z_support = frozenset(eid for eid, c in circ.items() if c > 0)
        if (y_support, z_support) in search.forbidden:
            return None
        joint = {eid: used.get(eid, 0) + circ.get(eid, 0) for eid in used}
        if not (_support_connected(kept, used, fs.source)
                and _support_connected(kept, joint, fs.source)):
            search.forbidden.add((y_support, z_support))
            return None
        sink = next(problem.sink_of_var[v] for v in problem.sink_of_var
                    if values[v] == 1)
        walk = _euler_walk(kept, used, fs.source, sink)
        multiplicities = {e.eid: used.get(e.eid, 0) for e in fs.edges}
        base = FlowWitness(multiplicities, walk, sink, problem.box, problem.note)
        circulation = {e.eid: circ.get(e.eid, 0) for e in fs.edges}
        return PumpWitness(base, circulation)

    try:
        result = search.run(accept)
    finally:
        if stats is not None:
            stats["nodes"] = search.used
    if result is None:
        return None
    problems = validate_witness(fs, result.base)
    for times in (1, 2):
        pumped = {eid: result.base.multiplicities[eid] + times * result.circulation[eid]
                  for eid in result.base.multiplicities}
        live = [e for e in kept if pumped.get(e.eid, 0) > 0]
        if not _support_connected(kept, pumped, fs.source) and live:
            problems.append(f"pumped support disconnected at t={times}")
    if problems:
        raise AssertionError("internal pump check failed: " + "; ".join(problems))
    return result


def pump_walk(fs: FlowSystem, pump: PumpWitness, times: int = 1) -> FlowWitness:
    """The pump's base witness with the circulation applied `times` rounds.

    Each round adds the circulation multiplicities on top of the base and
    re-extracts a concrete walk, so callers can materialize arbitrarily
    many distinct witnesses from one PumpWitness.
    """
    if times < 0:
        raise ValueError("times must be nonnegative")
    eids = set(pump.base.multiplicities) | set(pump.circulation)
    mults = {
        eid: pump.base.multiplicities.get(eid, 0)
        + times * pump.circulation.get(eid, 0)
        for eid in eids
    }
    walk = _euler_walk(list(fs.edges), mults, fs.source, pump.base.sink)
    witness = FlowWitness(
        mults, walk, pump.base.sink, pump.base.box_bound, pump.base.bound_note
    )
    problems = validate_witness(fs, witness)
    if problems:
        raise ValueError("pumped walk failed validation: " + "; ".join(problems))
    return witness
