"""Tree-decomposition construction and the per-layer-coloring dynamic program.

The decomposition is built by min-fill greedy elimination and normalized to
nice form (leaf/introduce/forget/join), then checked by an independent
validator on every construction.  The DP assigns each bag vertex one color
per layer and tracks Pareto-minimal per-transition change vectors.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product

from .core import (
    CapExceededError,
    ColoringSequence,
    SolveOutcome,
    StaticGraph,
    TemporalGraph,
    underlying_graph,
)
from .exact import DEFAULT_CAPS, SolverCaps, _micros


@dataclass
class TdNode:
    kind: str  # leaf | introduce | forget | join
    bag: tuple[int, ...]
    children: list["TdNode"] = field(default_factory=list)
    vertex: int | None = None  # the vertex introduced or forgotten


@dataclass
class NiceTreeDecomposition:
    root: TdNode | None
    width: int

    def postorder(self):
        if self.root is None:
            return
        stack = [(self.root, False)]
        while stack:
            node, seen = stack.pop()
            if seen:
                yield node
            else:
                stack.append((node, True))
                for child in node.children:
                    stack.append((child, False))

    @property
    def bag_count(self) -> int:
        return sum(1 for _ in self.postorder())


class InvalidDecompositionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# construction


def _min_fill_bags(g: StaticGraph):
    """Greedy min-fill elimination; returns (order, bag per vertex)."""
    adj = {v: set(ns) for v, ns in g.adjacency().items()}
    order = []
    bags = {}
    remaining = set(range(1, g.n + 1))
    while remaining:
        best = None
        best_fill = None
        for v in sorted(remaining):
            ns = adj[v]
            fill = 0
            ns_list = sorted(ns)
            for i, a in enumerate(ns_list):
                for b in ns_list[i + 1 :]:
                    if b not in adj[a]:
                        fill += 1
            if best_fill is None or fill < best_fill:
                best, best_fill = v, fill
        ns = sorted(adj[best])
        bags[best] = tuple(sorted([best] + ns))
        for i, a in enumerate(ns):
            for b in ns[i + 1 :]:
                adj[a].add(b)
                adj[b].add(a)
        for a in ns:
            adj[a].discard(best)
        del adj[best]
        remaining.remove(best)
        order.append(best)
    return order, bags


def _raw_tree(order, bags):
    """Children lists over elimination bags; returns (children, roots)."""
    pos = {v: i for i, v in enumerate(order)}
    children: dict[int, list[int]] = {v: [] for v in order}
    roots = []
    for v in order:
        later = [u for u in bags[v] if u != v]
        if not later:
            roots.append(v)
            continue
        parent = min(later, key=lambda u: pos[u])
        children[parent].append(v)
    return children, roots


def _chain_to_bag(node: TdNode, target: tuple[int, ...]) -> TdNode:
    """Forget/introduce chain transforming node's bag into the target bag."""
    current = node
    for v in sorted(set(current.bag) - set(target)):
        bag = tuple(x for x in current.bag if x != v)
        current = TdNode("forget", bag, [current], v)
    for v in sorted(set(target) - set(current.bag)):
        bag = tuple(sorted(current.bag + (v,)))
        current = TdNode("introduce", bag, [current], v)
    return current


def _leaf_chain(bag: tuple[int, ...]) -> TdNode:
    node = TdNode("leaf", (bag[0],))
    for v in bag[1:]:
        node = TdNode("introduce", tuple(sorted(node.bag + (v,))), [node], v)
    return node


def _nice_subtree(v: int, bags, children) -> TdNode:
    bag = bags[v]
    kids = [_chain_to_bag(_nice_subtree(c, bags, children), bag) for c in children[v]]
    if not kids:
        return _leaf_chain(bag)
    node = kids[0]
    for other in kids[1:]:
        node = TdNode("join", bag, [node, other])
    return node


def build_nice_tree_decomposition(g: StaticGraph) -> NiceTreeDecomposition:
    """Min-fill heuristic decomposition in nice form; width is an upper bound."""
    if g.n == 0:
        return NiceTreeDecomposition(None, -1)
    order, bags = _min_fill_bags(g)
    children, roots = _raw_tree(order, bags)
    subtrees = [_nice_subtree(r, bags, children) for r in roots]
    if len(subtrees) == 1:
        root = subtrees[0]
    else:
        # components meet in an empty bag: forget each root bag down to
        # nothing, then combine with empty-bag joins
        empties = [_chain_to_bag(s, ()) for s in subtrees]
        root = empties[0]
        for other in empties[1:]:
            root = TdNode("join", (), [root, other])
    ntd = NiceTreeDecomposition(root, max(len(b) for b in bags.values()) - 1)
    validate_tree_decomposition(ntd, g)
    return ntd


def validate_tree_decomposition(ntd: NiceTreeDecomposition, g: StaticGraph) -> None:
    """Independent check of the three decomposition axioms and nice form."""
    if ntd.root is None:
        if g.n != 0:
            raise InvalidDecompositionError("empty decomposition for nonempty graph")
        return
    nodes = list(ntd.postorder())
    ids = {id(n): i for i, n in enumerate(nodes)}
    parent = [None] * len(nodes)
    for n in nodes:
        for c in n.children:
            parent[ids[id(c)]] = ids[id(n)]

    covered = set()
    for n in nodes:
        if sorted(set(n.bag)) != list(n.bag):
            raise InvalidDecompositionError(f"bag {n.bag} is not a sorted vertex set")
        covered |= set(n.bag)
    if covered != set(range(1, g.n + 1)):
        raise InvalidDecompositionError("bags do not cover the vertex set")

    for u, v in g.edges:
        if not any(u in n.bag and v in n.bag for n in nodes):
            raise InvalidDecompositionError(f"edge {{{u},{v}}} is in no bag")

    for v in range(1, g.n + 1):
        holding = [i for i, n in enumerate(nodes) if v in n.bag]
        member = set(holding)
        seen = {holding[0]}
        queue = [holding[0]]
        while queue:
            i = queue.pop()
            neighbors = [parent[i]] + [ids[id(c)] for c in nodes[i].children]
            for j in neighbors:
                if j is not None and j in member and j not in seen:
                    seen.add(j)
                    queue.append(j)
        if seen != member:
            raise InvalidDecompositionError(f"bags containing vertex {v} are not connected")

    for n in nodes:
        if n.kind == "leaf":
            if n.children or len(n.bag) != 1:
                raise InvalidDecompositionError("leaf must be childless with a 1-vertex bag")
        elif n.kind == "introduce":
            (c,) = n.children
            if set(n.bag) != set(c.bag) | {n.vertex} or n.vertex in c.bag:
                raise InvalidDecompositionError("introduce node must add exactly one vertex")
        elif n.kind == "forget":
            (c,) = n.children
            if set(c.bag) != set(n.bag) | {n.vertex} or n.vertex in n.bag:
                raise InvalidDecompositionError("forget node must drop exactly one vertex")
        elif n.kind == "join":
            if len(n.children) != 2 or any(c.bag != n.bag for c in n.children):
                raise InvalidDecompositionError("join children must repeat the parent bag")
        else:
            raise InvalidDecompositionError(f"unknown node kind {n.kind!r}")


def parse_pace_td(text: str, g: StaticGraph) -> NiceTreeDecomposition:
    """Import a PACE .td decomposition, normalize to nice form, and validate."""
    bags: dict[int, tuple[int, ...]] = {}
    tree_edges = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if len(parts) != 5 or parts[1] != "td":
                raise InvalidDecompositionError(f"line {lineno}: bad header")
            declared = (int(parts[2]), int(parts[3]), int(parts[4]))
        elif parts[0] == "b":
            bags[int(parts[1])] = tuple(sorted(int(x) for x in parts[2:]))
        else:
            tree_edges.append((int(parts[0]), int(parts[1])))
    if declared is None:
        raise InvalidDecompositionError("missing 's td' header")
    if declared[0] != len(bags):
        raise InvalidDecompositionError("bag count differs from header")
    if declared[2] != g.n:
        raise InvalidDecompositionError("vertex count differs from graph")

    children: dict[int, list[int]] = {b: [] for b in bags}
    adj: dict[int, list[int]] = {b: [] for b in bags}
    for a, b in tree_edges:
        adj[a].append(b)
        adj[b].append(a)
    root_id = min(bags)
    seen = {root_id}
    queue = [root_id]
    while queue:
        x = queue.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                children[x].append(y)
                queue.append(y)
    if seen != set(bags):
        raise InvalidDecompositionError("decomposition tree is not connected")

    def build(b: int) -> TdNode:
        bag = bags[b]
        kids = [_chain_to_bag(build(c), bag) for c in children[b]]
        if not bag and not kids:
            raise InvalidDecompositionError("empty leaf bag")
        if not kids:
            return _leaf_chain(bag)
        node = kids[0]
        for other in kids[1:]:
            node = TdNode("join", bag, [node, other])
        return node

    root = build(root_id)
    missing = set(range(1, g.n + 1)) - {v for b in bags.values() for v in b}
    if missing:
        # isolated vertices may be absent from external files; hang leaf
        # chains off an empty root
        root = _chain_to_bag(root, ())
        for v in sorted(missing):
            root = TdNode("join", (), [root, _chain_to_bag(_leaf_chain((v,)), ())])
    ntd = NiceTreeDecomposition(root, max(len(b) for b in bags.values()) - 1)
    validate_tree_decomposition(ntd, g)
    return ntd


# ---------------------------------------------------------------------------
# dynamic programming


def _cost_vector(mask: int, tau: int) -> tuple[int, ...]:
    return tuple((mask >> t ^ mask >> (t + 1)) & 1 for t in range(tau - 1))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _pareto(vectors):
    """Minimal antichain under component-wise <=."""
    out: list[tuple[int, ...]] = []
    for v in sorted(set(vectors)):
        if not any(all(o[i] <= v[i] for i in range(len(v))) for o in out):
            out = [o for o in out if not all(v[i] <= o[i] for i in range(len(v)))]
            out.append(v)
    return out


def _proper_vertex(mask: int, pmt, bag, neighbors_by_layer) -> bool:
    for t, nbr_positions in neighbors_by_layer:
        for pos in nbr_positions:
            if not ((mask >> t ^ pmt[pos] >> t) & 1):
                return False
    return True


def solve_treewidth_dp(
    g: TemporalGraph,
    d: int,
    caps: SolverCaps = DEFAULT_CAPS,
    decomposition: NiceTreeDecomposition | None = None,
    constant_forget: bool = False,
) -> SolveOutcome:
    """Exact verdict via dynamic programming over a nice tree decomposition.

    Table semantics: an entry for (bag, per-layer bag coloring, budget
    vector) says some proper per-layer coloring of the subtree's vertices
    extends the bag coloring with at most that many changes per transition.
    Budget vectors are kept as Pareto frontiers of achieved costs; the
    dense-table variant below recomputes them explicitly for cross-checks.
    ``constant_forget`` restricts forgotten vertices to layer-constant
    colors, an intentionally weaker reading kept for comparison tests.
    """
    start = time.perf_counter()
    tau = g.tau
    if g.n == 0:
        return SolveOutcome(True, ColoringSequence(tuple(() for _ in range(tau))), {"micros": _micros(start)}, "treewidth")
    if decomposition is None:
        decomposition = build_nice_tree_decomposition(underlying_graph(g))
    width = decomposition.width
    est = (1 << (tau * (width + 1))) * (d + 1) ** max(tau - 1, 1)
    if est > caps.treewidth_table:
        raise CapExceededError(
            f"treewidth DP table estimate {est} exceeds cap {caps.treewidth_table}",
            {"treewidth_table": est},
        )

    full_mask = (1 << tau) - 1
    all_masks = list(range(1 << tau))
    forget_masks = [0, full_mask] if constant_forget else all_masks
    zero = (0,) * (tau - 1)
    budget = (d,) * (tau - 1)

    def ok_vec(vec) -> bool:
        return all(x <= d for x in vec)

    layer_adj = []
    for t in range(tau):
        adj: dict[int, set[int]] = {}
        for u, v in g.layers[t]:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        layer_adj.append(adj)

    tables: dict[int, dict] = {}
    entries = 0
    nodes = list(decomposition.postorder())
    node_id = {id(n): i for i, n in enumerate(nodes)}

    for n in nodes:
        if n.kind == "leaf":
            table = {}
            for m in all_masks:
                vec = _cost_vector(m, tau)
                if ok_vec(vec):
                    table[(m,)] = [vec]
        elif n.kind == "introduce":
            child = tables[node_id[id(n.children[0])]]
            v = n.vertex
            pos = n.bag.index(v)
            others = [u for u in n.bag if u != v]
            neighbors_by_layer = []
            for t in range(tau):
                nbrs = layer_adj[t].get(v, ())
                positions = [i for i, u in enumerate(others) if u in nbrs]
                if positions:
                    neighbors_by_layer.append((t, positions))
            table = {}
            for pmt, costs in child.items():
                for m in all_masks:
                    if not _proper_vertex(m, pmt, n.bag, neighbors_by_layer):
                        continue
                    dv = _cost_vector(m, tau)
                    new = [_add(c, dv) for c in costs]
                    new = [c for c in new if ok_vec(c)]
                    if not new:
                        continue
                    key = pmt[:pos] + (m,) + pmt[pos:]
                    if key in table:
                        table[key] = _pareto(table[key] + new)
                    else:
                        table[key] = _pareto(new)
        elif n.kind == "forget":
            child = tables[node_id[id(n.children[0])]]
            v = n.vertex
            child_bag = n.children[0].bag
            pos = child_bag.index(v)
            table = {}
            for pmt, costs in child.items():
                if pmt[pos] not in forget_masks:
                    continue
                key = pmt[:pos] + pmt[pos + 1 :]
                if key in table:
                    table[key] = _pareto(table[key] + costs)
                else:
                    table[key] = list(costs)
        else:  # join
            left = tables[node_id[id(n.children[0])]]
            right = tables[node_id[id(n.children[1])]]
            table = {}
            for pmt, lcosts in left.items():
                rcosts = right.get(pmt)
                if rcosts is None:
                    continue
                flips = zero
                for m in pmt:
                    flips = _add(flips, _cost_vector(m, tau))
                merged = []
                for a in lcosts:
                    for b in rcosts:
                        # shared bag flips are counted in both children once
                        vec = tuple(x + y - f for x, y, f in zip(a, b, flips))
                        if ok_vec(vec):
                            merged.append(vec)
                if merged:
                    table[pmt] = _pareto(merged)
        tables[node_id[id(n)]] = table
        entries += sum(len(c) for c in table.values())
        if entries > caps.treewidth_table:
            raise CapExceededError(
                f"treewidth DP exceeded {caps.treewidth_table} table entries",
                {"treewidth_table_entries": entries},
            )

    root = nodes[-1]
    root_table = tables[node_id[id(root)]]
    stats = {"table_entries": entries, "states": entries}
    if not root_table:
        stats["micros"] = _micros(start)
        return SolveOutcome(False, None, stats, "treewidth")

    def extract(node: TdNode, pmt, target) -> dict[int, int]:
        if node.kind == "leaf":
            return {node.bag[0]: pmt[0]}
        if node.kind == "introduce":
            v = node.vertex
            pos = node.bag.index(v)
            m = pmt[pos]
            dv = _cost_vector(m, tau)
            child_target = tuple(x - y for x, y in zip(target, dv))
            child_pmt = pmt[:pos] + pmt[pos + 1 :]
            out = extract(node.children[0], child_pmt, child_target)
            out[v] = m
            return out
        if node.kind == "forget":
            v = node.vertex
            child_bag = node.children[0].bag
            pos = child_bag.index(v)
            child = tables[node_id[id(node.children[0])]]
            for m in forget_masks:
                key = pmt[:pos] + (m,) + pmt[pos:]
                costs = child.get(key)
                if costs and any(all(c[i] <= target[i] for i in range(len(target))) for c in costs):
                    return extract(node.children[0], key, target)
            raise AssertionError("forget backtrack failed")
        # join
        left = tables[node_id[id(node.children[0])]]
        right = tables[node_id[id(node.children[1])]]
        flips = zero
        for m in pmt:
            flips = _add(flips, _cost_vector(m, tau))
        for a in left[pmt]:
            for b in right[pmt]:
                vec = tuple(x + y - f for x, y, f in zip(a, b, flips))
                if all(v_ <= t_ for v_, t_ in zip(vec, target)):
                    out = extract(node.children[0], pmt, a)
                    out.update(extract(node.children[1], pmt, b))
                    return out
        raise AssertionError("join backtrack failed")

    pmt0 = min(root_table)
    assignment = extract(root, pmt0, budget)
    if set(assignment) != set(range(1, g.n + 1)):
        raise AssertionError("witness reconstruction missed vertices")
    rows = []
    for t in range(tau):
        rows.append(tuple(2 if assignment[v] >> t & 1 else 1 for v in range(1, g.n + 1)))
    stats["micros"] = _micros(start)
    return SolveOutcome(True, ColoringSequence(tuple(rows)), stats, "treewidth")


def solve_treewidth_dp_dense(g: TemporalGraph, d: int, caps: SolverCaps = DEFAULT_CAPS) -> SolveOutcome:
    """Dense-table variant used by tests to cross-check the frontier tables.

    Computes full boolean tables over all budget vectors, asserting
    down-closure (budget monotonicity) at every node.
    """
    start = time.perf_counter()
    tau = g.tau
    if g.n == 0:
        return SolveOutcome(True, ColoringSequence(tuple(() for _ in range(tau))), {"micros": _micros(start)}, "treewidth-dense")
    decomposition = build_nice_tree_decomposition(underlying_graph(g))
    all_masks = list(range(1 << tau))
    vectors = list(product(range(d + 1), repeat=tau - 1))

    layer_adj = []
    for t in range(tau):
        adj: dict[int, set[int]] = {}
        for u, v in g.layers[t]:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        layer_adj.append(adj)

    tables: dict[int, set] = {}
    nodes = list(decomposition.postorder())
    node_id = {id(n): i for i, n in enumerate(nodes)}
    budget_cap = caps.treewidth_table
    for n in nodes:
        table: set = set()
        if n.kind == "leaf":
            for m in all_masks:
                cv = _cost_vector(m, tau)
                for vec in vectors:
                    if all(c <= x for c, x in zip(cv, vec)):
                        table.add(((m,), vec))
        elif n.kind == "introduce":
            child = tables[node_id[id(n.children[0])]]
            v = n.vertex
            pos = n.bag.index(v)
            others = [u for u in n.bag if u != v]
            nbl = []
            for t in range(tau):
                nbrs = layer_adj[t].get(v, ())
                positions = [i for i, u in enumerate(others) if u in nbrs]
                if positions:
                    nbl.append((t, positions))
            for (pmt, vec) in child:
                for m in all_masks:
                    if not _proper_vertex(m, pmt, n.bag, nbl):
                        continue
                    dv = _cost_vector(m, tau)
                    new_vec = _add(vec, dv)
                    if all(x <= d for x in new_vec):
                        for target in vectors:
                            if all(a <= b for a, b in zip(new_vec, target)):
                                table.add((pmt[:pos] + (m,) + pmt[pos:], target))
        elif n.kind == "forget":
            child = tables[node_id[id(n.children[0])]]
            pos = n.children[0].bag.index(n.vertex)
            for (pmt, vec) in child:
                table.add((pmt[:pos] + pmt[pos + 1 :], vec))
        else:
            left = tables[node_id[id(n.children[0])]]
            right = tables[node_id[id(n.children[1])]]
            for (pmt, a) in left:
                flips = (0,) * (tau - 1)
                for m in pmt:
                    flips = _add(flips, _cost_vector(m, tau))
                for (pmt2, b) in right:
                    if pmt2 != pmt:
                        continue
                    vec = tuple(x + y - f for x, y, f in zip(a, b, flips))
                    if all(x <= d for x in vec):
                        for target in vectors:
                            if all(v_ <= t_ for v_, t_ in zip(vec, target)):
                                table.add((pmt, target))
        # budget-vector monotonicity must hold everywhere
        for (pmt, vec) in table:
            for i in range(len(vec)):
                if vec[i] < d:
                    bigger = vec[:i] + (vec[i] + 1,) + vec[i + 1 :]
                    assert (pmt, bigger) in table, "dense table not monotone"
        tables[node_id[id(n)]] = table
        if len(table) > budget_cap:
            raise CapExceededError("dense treewidth DP exceeded table cap", {})
    root_table = tables[node_id[id(nodes[-1])]]
    full = (d,) * (tau - 1)
    verdict = any(vec == full for (_, vec) in root_table) if vectors else bool(root_table)
    return SolveOutcome(verdict, None, {"micros": _micros(start)}, "treewidth-dense")
