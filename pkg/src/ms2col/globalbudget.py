"""Global-budget solving: direct search, the 2-CNF clause-deletion reduction,
and a desk-scale branching solver for the deletion problem.

Variables x[v,t] say "vertex v has color 1 in layer t".  Edges become hard
clauses replicated budget+1 times so deletions can never silence them;
color persistence between consecutive layers becomes soft clauses, one
deletion per color change.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field

from .core import (
    CapExceededError,
    ColoringSequence,
    SolveOutcome,
    TemporalGraph,
    verify_solution,
    Budget,
)
from .exact import DEFAULT_CAPS, SolverCaps, _micros, _proper_masks, _masks_to_witness


@dataclass(frozen=True)
class Clause:
    """A 2-clause (a or b); literals are signed 1-based variable indices."""

    a: int
    b: int
    hard: bool
    mult: int = 1


@dataclass
class TwoCnf:
    num_vars: int
    clauses: list[Clause] = field(default_factory=list)

    def add(self, a: int, b: int, hard: bool, mult: int = 1) -> None:
        for lit in (a, b):
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"literal {lit} out of range")
        self.clauses.append(Clause(a, b, hard, mult))

    @property
    def hard_count(self) -> int:
        return sum(c.mult for c in self.clauses if c.hard)

    @property
    def soft_count(self) -> int:
        return sum(c.mult for c in self.clauses if not c.hard)


def variable_index(v: int, t: int, n: int) -> int:
    return (t - 1) * n + v


def reduce_to_almost_2sat(g: TemporalGraph, big_d: int) -> tuple[TwoCnf, int]:
    """Clause-deletion instance equivalent to the global-budget question.

    Source is a yes-instance iff at most k = D clauses can be removed to make
    the formula satisfiable; only the soft persistence clauses ever need
    removing.  Hard clauses are stored once with a multiplicity counter.
    """
    n, tau = g.n, g.tau
    cnf = TwoCnf(n * tau)
    for t in range(1, tau + 1):
        for u, v in sorted(g.layers[t - 1]):
            xu = variable_index(u, t, n)
            xv = variable_index(v, t, n)
            cnf.add(xu, xv, hard=True, mult=big_d + 1)
            cnf.add(-xu, -xv, hard=True, mult=big_d + 1)
    for t in range(1, tau):
        for v in range(1, n + 1):
            xt = variable_index(v, t, n)
            xt1 = variable_index(v, t + 1, n)
            cnf.add(-xt, xt1, hard=False)
            cnf.add(xt, -xt1, hard=False)
    return cnf, big_d


def reduce_ms2sat_to_almost_2sat(num_vars: int, stages, big_d: int) -> tuple[TwoCnf, int]:
    """Same encoding for a generic multistage 2-CNF: one variable copy per
    stage, stage clauses hard with D+1 copies, persistence clauses soft."""
    tau = len(stages)
    cnf = TwoCnf(num_vars * tau)

    def var(x: int, t: int) -> int:
        return (t - 1) * num_vars + abs(x)

    for t, clauses in enumerate(stages, start=1):
        for a, b in clauses:
            la = var(a, t) if a > 0 else -var(a, t)
            lb = var(b, t) if b > 0 else -var(b, t)
            cnf.add(la, lb, hard=True, mult=big_d + 1)
    for t in range(1, tau):
        for x in range(1, num_vars + 1):
            cnf.add(-var(x, t), var(x, t + 1), hard=False)
            cnf.add(var(x, t), -var(x, t + 1), hard=False)
    return cnf, big_d


# ---------------------------------------------------------------------------
# 2-SAT with implication-graph SCCs


def _lit_node(lit: int, num_vars: int) -> int:
    return lit - 1 if lit > 0 else num_vars + (-lit) - 1


def _node_lit(node: int, num_vars: int) -> int:
    return node + 1 if node < num_vars else -(node - num_vars + 1)


def _implication_graph(cnf: TwoCnf, deleted: frozenset[int]):
    """Adjacency with (target, clause index) pairs, edges sorted by clause index."""
    size = 2 * cnf.num_vars
    adj: list[list[tuple[int, int]]] = [[] for _ in range(size)]
    for idx, cl in enumerate(cnf.clauses):
        if idx in deleted:
            continue
        for x, y in ((cl.a, cl.b), (cl.b, cl.a)):
            adj[_lit_node(-x, cnf.num_vars)].append((_lit_node(y, cnf.num_vars), idx))
    return adj


def _tarjan_scc(adj) -> list[int]:
    """Iterative Tarjan; returns component index per node (reverse topological)."""
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while pi < len(adj[v]):
                w = adj[v][pi][0]
                pi += 1
                if index[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp


def solve_2sat(cnf: TwoCnf, deleted: frozenset[int] = frozenset()):
    """(assignment tuple, None) when satisfiable, else (None, contradicted var)."""
    adj = _implication_graph(cnf, deleted)
    comp = _tarjan_scc(adj)
    bad = None
    for x in range(1, cnf.num_vars + 1):
        if comp[_lit_node(x, cnf.num_vars)] == comp[_lit_node(-x, cnf.num_vars)]:
            bad = x
            break
    if bad is not None:
        return None, bad
    # Tarjan numbers components in reverse topological order, so the greater
    # component index comes earlier topologically reversed; x true iff
    # comp(x) < comp(-x) under that ordering convention's complement
    assignment = tuple(
        comp[_lit_node(x, cnf.num_vars)] < comp[_lit_node(-x, cnf.num_vars)]
        for x in range(1, cnf.num_vars + 1)
    )
    return assignment, None


def _shortest_clause_path(cnf: TwoCnf, deleted: frozenset[int], src_lit: int, dst_lit: int):
    """Clause indices along a shortest implication path src => ... => dst."""
    adj = _implication_graph(cnf, deleted)
    src = _lit_node(src_lit, cnf.num_vars)
    dst = _lit_node(dst_lit, cnf.num_vars)
    prev: dict[int, tuple[int, int]] = {}
    seen = {src}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            break
        for w, idx in adj[v]:
            if w not in seen:
                seen.add(w)
                prev[w] = (v, idx)
                queue.append(w)
    if dst not in seen:
        raise AssertionError("contradiction path vanished")
    clauses = []
    node = dst
    while node != src:
        node, idx = prev[node]
        clauses.append(idx)
    return clauses[::-1]


@dataclass
class A2SatResult:
    sat: bool
    deleted: frozenset[int] = frozenset()
    assignment: tuple[bool, ...] | None = None
    nodes_explored: int = 0


def solve_almost_2sat(cnf: TwoCnf, k: int, all_soft: bool = False) -> A2SatResult:
    """Branching search: delete at most k deletable clauses on contradiction paths.

    Hard clauses are never deleted; with ``all_soft`` every clause becomes a
    branching candidate (general-input mode).  Complete whenever a feasible
    deletion set can be restricted to deletable clauses, which holds for all
    instances produced by the reductions in this module.
    """
    nodes = 0

    def deletable(idx: int) -> bool:
        # a replicated clause survives single-copy deletion, so deleting it
        # never helps; reductions replicate exactly the never-deleted clauses
        if cnf.clauses[idx].mult != 1:
            return False
        return all_soft or not cnf.clauses[idx].hard

    def search(deleted: frozenset[int], budget: int):
        nonlocal nodes
        nodes += 1
        assignment, bad = solve_2sat(cnf, deleted)
        if assignment is not None:
            return deleted, assignment
        if budget == 0:
            return None
        half1 = _shortest_clause_path(cnf, deleted, bad, -bad)
        half2 = _shortest_clause_path(cnf, deleted, -bad, bad)
        candidates = sorted({idx for idx in half1 + half2 if deletable(idx)})
        for idx in candidates:
            found = search(deleted | {idx}, budget - 1)
            if found is not None:
                return found
        return None

    found = search(frozenset(), k)
    if found is None:
        return A2SatResult(False, nodes_explored=nodes)
    deleted, assignment = found
    return A2SatResult(True, deleted, assignment, nodes)


def decode_assignment(assignment, g: TemporalGraph) -> ColoringSequence:
    """Colorings from a satisfying assignment: color 1 where the variable is true."""
    rows = []
    for t in range(1, g.tau + 1):
        rows.append(
            tuple(1 if assignment[variable_index(v, t, g.n) - 1] else 2 for v in range(1, g.n + 1))
        )
    return ColoringSequence(tuple(rows))


# ---------------------------------------------------------------------------
# solvers


def solve_bruteforce_global(g: TemporalGraph, big_d: int, caps: SolverCaps = DEFAULT_CAPS) -> SolveOutcome:
    """Exhaustive minimum-total-changes search; the oracle for this module."""
    start = time.perf_counter()
    if g.n * g.tau > caps.bruteforce_state_bits:
        raise CapExceededError(
            f"instance too large for oracle: n*tau = {g.n * g.tau} exceeds "
            f"{caps.bruteforce_state_bits} state bits",
            {"state_bits": g.n * g.tau},
        )
    states = 0
    layers_proper = []
    for layer in g.layers:
        masks = _proper_masks(g.n, layer)
        states += 1 << g.n
        if not masks:
            return SolveOutcome(False, None, {"states": states, "micros": _micros(start)}, "bruteforce-global")
        layers_proper.append(masks)
    best: dict[int, tuple[int, int | None]] = {m: (0, None) for m in layers_proper[0]}
    history = [best]
    for t in range(1, g.tau):
        nxt: dict[int, tuple[int, int | None]] = {}
        for m in layers_proper[t]:
            cand = None
            for prev, (cost, _) in history[-1].items():
                total = cost + bin(prev ^ m).count("1")
                if cand is None or total < cand[0]:
                    cand = (total, prev)
            nxt[m] = cand
        history.append(nxt)
    final_mask, (final_cost, _) = min(history[-1].items(), key=lambda kv: (kv[1][0], kv[0]))
    stats = {"states": states, "micros": _micros(start), "min_changes": final_cost}
    if final_cost > big_d:
        return SolveOutcome(False, None, stats, "bruteforce-global")
    masks = [final_mask]
    for t in range(g.tau - 1, 0, -1):
        masks.append(history[t][masks[-1]][1])
    return SolveOutcome(True, _masks_to_witness(masks[::-1], g.n), stats, "bruteforce-global")


def solve_global(
    g: TemporalGraph, big_d: int, caps: SolverCaps = DEFAULT_CAPS, a2sat_budget_cap: int = 16
) -> SolveOutcome:
    """Pipeline: clause-deletion reduction, branching solver, witness decoding.

    Falls back to the global brute force when the deletion budget exceeds the
    branching cap and the instance fits the oracle's caps.
    """
    start = time.perf_counter()
    if big_d > a2sat_budget_cap:
        return solve_bruteforce_global(g, big_d, caps)
    cnf, k = reduce_to_almost_2sat(g, big_d)
    result = solve_almost_2sat(cnf, k)
    stats = {"a2sat_nodes": result.nodes_explored, "micros": _micros(start)}
    if not result.sat:
        return SolveOutcome(False, None, stats, "a2sat")
    witness = decode_assignment(result.assignment, g)
    check = verify_solution(g, witness, Budget("global", big_d))
    if not check:
        raise AssertionError(f"pipeline produced an invalid witness: {check.reason}")
    return SolveOutcome(True, witness, stats, "a2sat")


# ---------------------------------------------------------------------------
# WCNF export


def wcnf_text(cnf: TwoCnf, k: int) -> str:
    """Weighted-CNF text: hard clauses carry weight top = k+1, soft weight 1."""
    top = k + 1
    lines = []
    total = sum(c.mult for c in cnf.clauses)
    lines.append(f"p wcnf {cnf.num_vars} {total} {top}")
    lines.append(f"c k = {k}")
    for cl in cnf.clauses:
        weight = top if cl.hard else 1
        for _ in range(cl.mult):
            lines.append(f"{weight} {cl.a} {cl.b} 0")
    return "\n".join(lines) + "\n"
