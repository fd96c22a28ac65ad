"""Distance-to-co-cluster machinery and the modulator-branching exact solver.

A co-cluster (complete multipartite graph) is exactly a graph with no
induced edge-plus-nonadjacent-vertex triple, so minimum modulators can be
found by depth-bounded branching on such witness triples.
"""

from __future__ import annotations

import time
from itertools import combinations

from .core import (
    CapExceededError,
    PartialColoringSequence,
    SolveOutcome,
    StaticGraph,
    TemporalGraph,
    layer_bipartite_check,
)
from .exact import DEFAULT_CAPS, SolverCaps, _micros
from .extension import apply_reduction_rule_colored_edge, solve_ms2ce_edgeless


def is_cocluster(g: StaticGraph):
    """(True, None) iff no induced K_2 + K_1; else (False, least witness triple)."""
    adj = g.adjacency()
    for triple in combinations(range(1, g.n + 1), 3):
        a, b, c = triple
        edges = (b in adj[a]) + (c in adj[a]) + (c in adj[b])
        if edges == 1:
            return False, triple
    return True, None


def _witness_in(adj: dict[int, set[int]], alive: list[int]):
    """Least induced K_2+K_1 triple among the alive vertices, or None."""
    for triple in combinations(alive, 3):
        a, b, c = triple
        edges = (b in adj[a]) + (c in adj[a]) + (c in adj[b])
        if edges == 1:
            return triple
    return None


def dcc_modulator(g: StaticGraph, k_max: int):
    """A minimum vertex set whose deletion leaves a co-cluster, or None.

    Iterative deepening over the deletion budget; at the first feasible
    depth all solutions reachable through deterministic witness branching
    are collected and the lexicographically least one returned.  Returns
    None when every modulator has size > k_max.
    """
    if k_max < 0:
        raise ValueError("bound must be nonnegative")
    adj = g.adjacency()

    for k in range(k_max + 1):
        found: list[tuple[int, ...]] = []

        def search(deleted: set[int], budget: int):
            alive = [v for v in range(1, g.n + 1) if v not in deleted]
            witness = _witness_in(adj, alive)
            if witness is None:
                found.append(tuple(sorted(deleted)))
                return
            if budget == 0:
                return
            for v in witness:
                deleted.add(v)
                search(deleted, budget - 1)
                deleted.remove(v)

        search(set(), k)
        if found:
            return min(found)
    return None


def _induced_edges(edges, removed: set[int]):
    return [(u, v) for u, v in edges if u not in removed and v not in removed]


def solve_dcc_sum(
    g: TemporalGraph,
    d: int,
    caps: SolverCaps = DEFAULT_CAPS,
    paper_due_dates: bool = False,
) -> SolveOutcome:
    """Exact solver branching over colorings of per-layer co-cluster modulators.

    For each layer a minimum modulator X_t is computed and the layer tagged
    T+ (remainder has an edge, hence is connected) or T- (remainder is
    edgeless).  All 2**sum|X_t| modulator colorings are enumerated; in T+
    layers colors propagate along edges (with both global flips of the
    remainder tried when no propagation seed exists), in T- layers every
    remainder vertex incident to an edge takes the color forced by its
    colored neighbors.  Improper branches are rejected; the rest reduce to
    an edgeless extension instance decided by scheduling.
    """
    start = time.perf_counter()
    checks = layer_bipartite_check(g)
    if not all(c.bipartite for c in checks):
        return SolveOutcome(False, None, {"micros": _micros(start)}, "dcc-sum")

    modulators: list[tuple[int, ...]] = []
    part_has_edge: list[bool] = []
    for t in range(1, g.tau + 1):
        layer = g.layer(t)
        mod = dcc_modulator(layer, min(caps.dcc_sum, g.n))
        if mod is None:
            raise CapExceededError(
                f"layer {t}: co-cluster modulator exceeds bound {caps.dcc_sum}",
                {"dcc_layer_bound": caps.dcc_sum},
            )
        modulators.append(mod)
        removed = set(mod)
        part_has_edge.append(bool(_induced_edges(layer.edges, removed)))
    lifted = sum(max(1, len(mod)) for mod in modulators)
    if lifted > caps.dcc_sum:
        raise CapExceededError(
            f"sum of modulator sizes {lifted} exceeds cap {caps.dcc_sum}",
            {"dcc_sum": lifted},
        )

    # modulator vertices in (layer, vertex) order drive the branch counter
    mod_slots = [(t, v) for t in range(1, g.tau + 1) for v in modulators[t - 1]]
    adjacency = []
    for t in range(1, g.tau + 1):
        adj: dict[int, list[int]] = {v: [] for v in range(1, g.n + 1)}
        for u, v in sorted(g.layers[t - 1]):
            adj[u].append(v)
            adj[v].append(u)
        adjacency.append(adj)

    stats = {"branches": 0, "micros": 0}

    def propagate_tplus(t: int, colors: list[int]):
        """BFS color propagation along layer-t edges; None on conflict."""
        adj = adjacency[t - 1]
        queue = [v for v in range(1, g.n + 1) if colors[v - 1]]
        while queue:
            u = queue.pop()
            for w in adj[u]:
                want = 3 - colors[u - 1]
                if colors[w - 1] == 0:
                    colors[w - 1] = want
                    queue.append(w)
                elif colors[w - 1] != want:
                    return None
        return colors

    def tminus_forced(t: int, colors: list[int]):
        """Color remainder vertices incident to an edge from their neighbors."""
        adj = adjacency[t - 1]
        in_mod = set(modulators[t - 1])
        for v in range(1, g.n + 1):
            if v in in_mod or not adj[v]:
                continue
            want = 0
            for w in adj[v]:
                if colors[w - 1] == 0:
                    continue
                forced = 3 - colors[w - 1]
                if want and forced != want:
                    return None
                want = forced
            # neighbors of a remainder vertex all lie in the modulator, which
            # is totally colored before this runs
            if want == 0:
                raise AssertionError(f"layer {t}: vertex {v} has no colored neighbor")
            if colors[v - 1] and colors[v - 1] != want:
                return None
            colors[v - 1] = want
        return colors

    def branch_layers(assignment: dict[tuple[int, int], int]):
        """Yield candidate pin rows per layer for one modulator coloring."""
        fixed_rows: list[list[int] | None] = []
        free_layers: list[int] = []  # T+ layers needing a global-flip choice
        for t in range(1, g.tau + 1):
            colors = [0] * g.n
            for v in modulators[t - 1]:
                colors[v - 1] = assignment[(t, v)]
            if part_has_edge[t - 1]:
                res = propagate_tplus(t, colors)
                if res is None:
                    return None
                in_mod = set(modulators[t - 1])
                part_colored = any(
                    res[v - 1] for v in range(1, g.n + 1) if v not in in_mod and adjacency[t - 1][v]
                )
                if not part_colored:
                    free_layers.append(t)
                    fixed_rows.append(None)
                    continue
                fixed_rows.append(res)
            else:
                res = tminus_forced(t, colors)
                if res is None:
                    return None
                fixed_rows.append(res)
        return fixed_rows, free_layers

    def part_colorings(t: int) -> tuple[list[int], list[int]]:
        """Both proper colorings of the unseeded connected remainder of a T+ layer."""
        in_mod = set(modulators[t - 1])
        part_edges = _induced_edges(g.layers[t - 1], in_mod)
        part_vertices = sorted({v for e in part_edges for v in e})
        seed = [0] * g.n
        seed[part_vertices[0] - 1] = 1
        base = propagate_tplus(t, seed)
        flipped = [3 - c if c else 0 for c in base]
        return base, flipped

    for counter in range(1 << len(mod_slots)):
        assignment = {
            slot: 2 if counter >> (len(mod_slots) - 1 - i) & 1 else 1
            for i, slot in enumerate(mod_slots)
        }
        prepared = branch_layers(assignment)
        if prepared is None:
            stats["branches"] += 1
            continue
        fixed_rows, free_layers = prepared
        for flip_counter in range(1 << len(free_layers)):
            stats["branches"] += 1
            rows = []
            ok = True
            free_idx = 0
            for t in range(1, g.tau + 1):
                if fixed_rows[t - 1] is not None:
                    row = list(fixed_rows[t - 1])
                else:
                    base, flipped = part_colorings(t)
                    choice = flip_counter >> (len(free_layers) - 1 - free_idx) & 1
                    free_idx += 1
                    row = list(flipped if choice else base)
                    for v in modulators[t - 1]:
                        row[v - 1] = assignment[(t, v)]
                # propagation must have colored both endpoints of every edge
                for u, v in g.layers[t - 1]:
                    if row[u - 1] == 0 or row[v - 1] == 0:
                        raise AssertionError(f"layer {t}: edge {{{u},{v}}} not fully colored")
                    if row[u - 1] == row[v - 1]:
                        ok = False
                        break
                if not ok:
                    break
                rows.append(row)
            if not ok:
                continue
            p = PartialColoringSequence(tuple(tuple(r) for r in rows))
            residual = apply_reduction_rule_colored_edge(g, p)
            sub = solve_ms2ce_edgeless(residual, p, d, paper_due_dates)
            if sub.verdict:
                stats["micros"] = _micros(start)
                stats["modulator_sum"] = lifted
                return SolveOutcome(True, sub.witness, stats, "dcc-sum")
    stats["micros"] = _micros(start)
    stats["modulator_sum"] = lifted
    return SolveOutcome(False, None, stats, "dcc-sum")
