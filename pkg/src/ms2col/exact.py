"""Baseline exact solvers for the local-budget problem.

``solve_bruteforce_local`` is the ground-truth oracle: it scans every
2-coloring of every layer directly against the edge lists and searches
the full sequence space.  The other solvers here trade generality for
speed and are cross-validated against the oracle.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, replace
from itertools import combinations

from .core import (
    CapExceededError,
    ColoringSequence,
    PreconditionError,
    SolveOutcome,
    StaticGraph,
    TemporalGraph,
    colors_to_mask,
    layer_bipartite_check,
    layer_components,
    mask_to_colors,
    static_bipartite_coloring,
    underlying_graph,
)

CAP_ENV_VAR = "MS2COL_CAP_STATES"

# the auto dispatcher hands instances to the orientation search only below
# this many orientation bits; larger spaces are legal to request directly
ORIENTATION_ROUTE_BITS = 30


@dataclass(frozen=True)
class SolverCaps:
    """Resource caps for the exact solvers; exceeding one raises, never lies."""

    bruteforce_state_bits: int = 24
    dag_nodes: int = 1 << 22
    dag_arc_estimate: int = 1 << 21
    orientation_bits: int = 64
    orientation_nodes: int = 1 << 20
    treewidth_table: int = 1 << 20
    dcc_sum: int = 24

    @classmethod
    def from_env(cls) -> "SolverCaps":
        """Default caps, with MS2COL_CAP_STATES overriding the state counts."""
        caps = cls()
        raw = os.environ.get(CAP_ENV_VAR)
        if raw:
            states = int(raw)
            caps = replace(
                caps,
                bruteforce_state_bits=max(states.bit_length() - 1, 1),
                dag_nodes=states,
                dag_arc_estimate=states,
                orientation_nodes=states,
                treewidth_table=states,
            )
        return caps


DEFAULT_CAPS = SolverCaps()


def _micros(start: float) -> int:
    return int((time.perf_counter() - start) * 1_000_000)


def _proper_masks(n: int, edges) -> list[int]:
    """All 2-colorings of one layer that leave no edge monochromatic."""
    bits = [(u - 1, v - 1) for u, v in edges]
    out = []
    for mask in range(1 << n):
        for bu, bv in bits:
            if not ((mask >> bu ^ mask >> bv) & 1):
                break
        else:
            out.append(mask)
    return out


def _masks_to_witness(masks, n: int) -> ColoringSequence:
    return ColoringSequence(tuple(mask_to_colors(m, n) for m in masks))


def solve_bruteforce_local(g: TemporalGraph, d: int, caps: SolverCaps = DEFAULT_CAPS) -> SolveOutcome:
    """Exhaustive search over per-layer colorings; the oracle for this package.

    Every one of the 2**n colorings of every layer is tested against the
    edge list, and the sequence space is searched with memoization on
    (layer, coloring), which visits each verdict-relevant state once.
    """
    start = time.perf_counter()
    if g.n * g.tau > caps.bruteforce_state_bits:
        raise CapExceededError(
            f"instance too large for oracle: n*tau = {g.n * g.tau} exceeds "
            f"{caps.bruteforce_state_bits} state bits",
            {"state_bits": g.n * g.tau},
        )
    states = 0
    layers_proper: list[list[int]] = []
    for layer in g.layers:
        masks = _proper_masks(g.n, layer)
        states += 1 << g.n
        if not masks:
            return SolveOutcome(False, None, {"states": states, "micros": _micros(start)}, "bruteforce")
        layers_proper.append(masks)

    reached: dict[int, int | None] = {m: None for m in layers_proper[0]}
    history = [reached]
    for t in range(1, g.tau):
        nxt: dict[int, int | None] = {}
        for m in layers_proper[t]:
            for prev in history[-1]:
                if bin(prev ^ m).count("1") <= d:
                    nxt[m] = prev
                    break
        history.append(nxt)
        if not nxt:
            return SolveOutcome(False, None, {"states": states, "micros": _micros(start)}, "bruteforce")
    last = min(history[-1])
    masks = [last]
    for t in range(g.tau - 1, 0, -1):
        masks.append(history[t][masks[-1]])
    witness = _masks_to_witness(masks[::-1], g.n)
    return SolveOutcome(True, witness, {"states": states, "micros": _micros(start)}, "bruteforce")


def _flip_masks_up_to(n: int, d: int) -> list[int]:
    """All bitmasks over n positions with at most d bits set (including 0)."""
    out = [0]
    for k in range(1, min(d, n) + 1):
        for pos in combinations(range(n), k):
            m = 0
            for p in pos:
                m |= 1 << p
            out.append(m)
    return out


def _count_flip_masks(n: int, d: int) -> int:
    total = 1
    c = 1
    for k in range(1, min(d, n) + 1):
        c = c * (n - k + 1) // k
        total += c
    return total


def solve_layered_dag(g: TemporalGraph, d: int, caps: SolverCaps = DEFAULT_CAPS) -> SolveOutcome:
    """Forward reachability over per-layer proper colorings.

    Each layer contributes one node per proper coloring (2**ncc of them,
    isolated vertices included); arcs connect colorings of consecutive
    layers at Hamming distance at most d and are tested on demand, so only
    two layers of nodes are materialized at a time.
    """
    start = time.perf_counter()
    checks = layer_bipartite_check(g)
    if not all(c.bipartite for c in checks):
        return SolveOutcome(False, None, {"states": 0, "micros": _micros(start)}, "layered-dag")

    layer_comps = [layer_components(g.n, layer) for layer in g.layers]
    node_counts = [1 << len(comps) for comps in layer_comps]
    if sum(node_counts) > caps.dag_nodes:
        raise CapExceededError(
            f"layered DAG needs {sum(node_counts)} nodes, cap is {caps.dag_nodes}; "
            "try the orientation or treewidth solver",
            {"dag_nodes": sum(node_counts)},
        )
    gen_candidates = _count_flip_masks(g.n, d)
    arc_estimate = sum(
        node_counts[t] * min(gen_candidates, node_counts[t + 1]) for t in range(g.tau - 1)
    )

    def layer_nodes(t: int) -> dict[int, int]:
        comps = layer_comps[t]
        base = 0
        for comp in comps:
            base |= comp.base_mask
        ncomp = len(comps)
        nodes = {}
        for counter in range(1 << ncomp):
            mask = base
            for i, comp in enumerate(comps):
                if counter >> (ncomp - 1 - i) & 1:
                    mask ^= comp.mask
            nodes[mask] = counter
        return nodes

    states = 0
    arcs = 0
    flip_masks = _flip_masks_up_to(g.n, d) if gen_candidates <= max(node_counts) else None
    nodes = layer_nodes(0)
    states += len(nodes)
    reachable: list[list[int]] = [sorted(nodes)]
    frontier = set(nodes)
    for t in range(1, g.tau):
        nxt_nodes = layer_nodes(t)
        states += len(nxt_nodes)
        nxt: set[int] = set()
        if flip_masks is not None and gen_candidates <= len(nxt_nodes):
            for m in frontier:
                for fm in flip_masks:
                    cand = m ^ fm
                    arcs += 1
                    if cand in nxt_nodes:
                        nxt.add(cand)
        else:
            for cand in nxt_nodes:
                for m in frontier:
                    arcs += 1
                    if bin(cand ^ m).count("1") <= d:
                        nxt.add(cand)
                        break
        if not nxt:
            return SolveOutcome(
                False, None, {"states": states, "arcs_tested": arcs, "micros": _micros(start)}, "layered-dag"
            )
        reachable.append(sorted(nxt))
        frontier = nxt

    masks = [min(frontier)]
    for t in range(g.tau - 2, -1, -1):
        for m in reachable[t]:
            if bin(m ^ masks[-1]).count("1") <= d:
                masks.append(m)
                break
    witness = _masks_to_witness(masks[::-1], g.n)
    return SolveOutcome(
        True, witness, {"states": states, "arcs_tested": arcs, "micros": _micros(start)}, "layered-dag"
    )


def solve_greedy_large_d(g: TemporalGraph, d: int) -> SolveOutcome:
    """Flip-greedy for 2d >= n: color each layer canonically, flip when cheaper.

    Colors every layer with its lexicographically-least proper coloring and,
    whenever the distance to the previous layer exceeds n/2, reverses all
    assignments of the current layer, which brings the distance below n/2 <= d.
    """
    start = time.perf_counter()
    if 2 * d < g.n:
        raise PreconditionError(f"greedy requires 2d >= n, got d={d}, n={g.n}")
    full = (1 << g.n) - 1
    masks: list[int] = []
    for layer in g.layers:
        base = static_bipartite_coloring(StaticGraph(g.n, layer))
        if base is None:
            return SolveOutcome(False, None, {"micros": _micros(start)}, "greedy")
        mask = colors_to_mask(base)
        if masks and 2 * bin(masks[-1] ^ mask).count("1") > g.n:
            mask ^= full
        masks.append(mask)
    return SolveOutcome(True, _masks_to_witness(masks, g.n), {"micros": _micros(start)}, "greedy")


def solve_d_zero(g: TemporalGraph) -> SolveOutcome:
    """d = 0: yes iff the underlying graph is bipartite; repeat one coloring."""
    start = time.perf_counter()
    colors = static_bipartite_coloring(underlying_graph(g))
    if colors is None:
        return SolveOutcome(False, None, {"micros": _micros(start)}, "d-zero")
    witness = ColoringSequence(tuple(colors for _ in range(g.tau)))
    return SolveOutcome(True, witness, {"micros": _micros(start)}, "d-zero")


def solve_auto(g: TemporalGraph, d: int, caps: SolverCaps = DEFAULT_CAPS, paper_due_dates: bool = False) -> SolveOutcome:
    """Portfolio dispatcher over the exact solvers, deterministic given caps.

    Order: non-bipartite shortcut, d = 0 shortcut, 2d >= n greedy, layered
    DAG, component orientation, treewidth DP, brute force.  Raises with the
    per-algorithm estimates when nothing fits the caps.
    """
    from . import extension, treewidth

    checks = layer_bipartite_check(g)
    if not all(c.bipartite for c in checks):
        out = SolveOutcome(False, None, {}, "nonbipartite-shortcut")
        return out
    if d == 0:
        return solve_d_zero(g)
    if 2 * d >= g.n:
        return solve_greedy_large_d(g, d)

    estimates: dict[str, int] = {}

    node_counts = [1 << len(layer_components(g.n, layer)) for layer in g.layers]
    dag_nodes = sum(node_counts)
    gen_candidates = _count_flip_masks(g.n, d)
    dag_arcs = sum(
        node_counts[t] * min(gen_candidates, node_counts[t + 1]) for t in range(g.tau - 1)
    )
    estimates["dag_nodes"] = dag_nodes
    estimates["dag_arcs"] = dag_arcs
    if dag_nodes <= caps.dag_nodes and dag_arcs <= caps.dag_arc_estimate:
        return solve_layered_dag(g, d, caps)

    orient_bits = sum(
        sum(1 for c in layer_components(g.n, layer) if c.has_edge) for layer in g.layers
    )
    estimates["orientation_bits"] = orient_bits
    if orient_bits <= min(caps.orientation_bits, ORIENTATION_ROUTE_BITS):
        try:
            return extension.solve_component_orientation(g, d, caps, paper_due_dates=paper_due_dates)
        except CapExceededError as exc:
            estimates.update(exc.estimates)

    try:
        decomposition = treewidth.build_nice_tree_decomposition(underlying_graph(g))
        tw_cost = (1 << (g.tau * (decomposition.width + 1))) * (d + 1) ** max(g.tau - 1, 1)
        estimates["treewidth_table"] = tw_cost
        if tw_cost <= caps.treewidth_table:
            return treewidth.solve_treewidth_dp(g, d, caps)
    except CapExceededError as exc:
        estimates.update(exc.estimates)

    estimates["bruteforce_state_bits"] = g.n * g.tau
    if g.n * g.tau <= caps.bruteforce_state_bits:
        return solve_bruteforce_local(g, d, caps)

    raise CapExceededError(
        "no applicable exact algorithm at configured caps; estimated costs: "
        + ", ".join(f"{k}={v}" for k, v in sorted(estimates.items())),
        estimates,
    )
