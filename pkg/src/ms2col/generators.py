"""Instance generators: hardness-gadget constructions and random instances.

Each generator assigns gadget vertices deterministic integer ids in the
order the gadget pieces are introduced and records a human-readable label
per id so instances can be audited.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .core import Edge, StaticGraph, TemporalGraph, normalize_edge


@dataclass
class GeneratedInstance:
    graph: TemporalGraph
    d: int
    labels: dict[int, str] = field(default_factory=dict)
    meta: dict[str, int] = field(default_factory=dict)


class _Builder:
    def __init__(self, tau: int):
        self.tau = tau
        self.n = 0
        self.layers: list[set[Edge]] = [set() for _ in range(tau)]
        self.labels: dict[int, str] = {}

    def vertex(self, label: str) -> int:
        self.n += 1
        self.labels[self.n] = label
        return self.n

    def edge(self, t: int, u: int, v: int) -> None:
        self.layers[t - 1].add(normalize_edge(u, v))

    def edge_layers(self, layers, u: int, v: int) -> None:
        for t in layers:
            self.edge(t, u, v)

    def build(self, d: int, meta: dict[str, int] | None = None) -> GeneratedInstance:
        g = TemporalGraph(self.n, tuple(frozenset(layer) for layer in self.layers))
        return GeneratedInstance(g, d, dict(self.labels), dict(meta or {}))


# ---------------------------------------------------------------------------
# exact-one-true 3-SAT


def gen_x13sat(clauses, num_vars: int | None = None) -> GeneratedInstance:
    """Temporal instance with d = 1 that is colorable iff some assignment
    makes exactly one literal occurrence true in every clause.

    Six layers per clause over {u1, u2, v1, v2, v3} plus a literal-pair
    {w_i, wbar_i} per variable, so tau = 6m and |V| = 5 + 2n.
    """
    clauses = [tuple(cl) for cl in clauses]
    for cl in clauses:
        if len(cl) != 3 or any(lit == 0 for lit in cl):
            raise ValueError(f"clause {cl} is not three nonzero literals")
    max_var = max((abs(lit) for cl in clauses for lit in cl), default=0)
    n = max_var if num_vars is None else num_vars
    if n < max_var:
        raise ValueError("variable count below largest literal")
    m = len(clauses)
    if m == 0:
        raise ValueError("formula needs at least one clause")

    b = _Builder(6 * m)
    u1 = b.vertex("u1")
    u2 = b.vertex("u2")
    v = [b.vertex(f"v{r}") for r in range(1, 4)]
    w = {}
    wbar = {}
    for i in range(1, n + 1):
        w[i] = b.vertex(f"w{i}")
        wbar[i] = b.vertex(f"wbar{i}")

    def literal_vertex(lit: int) -> int:
        return w[lit] if lit > 0 else wbar[-lit]

    for j, cl in enumerate(clauses, start=1):
        base = 6 * (j - 1)
        lits = [literal_vertex(lit) for lit in cl]
        for t in range(base + 1, base + 7):
            b.edge(t, u1, u2)
            for i in range(1, n + 1):
                b.edge(t, w[i], wbar[i])
        for r in range(3):
            b.edge(base + 1, u1, v[r])
            b.edge(base + 2, v[r], lits[r])
            b.edge(base + 4, u2, v[r])
    return b.build(1, {"clause_count": m, "variable_count": n})


# ---------------------------------------------------------------------------
# edge bipartization


def gen_edge_bipartization(g: StaticGraph, k: int) -> GeneratedInstance:
    """Two layers obtained by subdividing every source edge twice; d = k.

    Layer 1 carries the star edges from each original vertex to its incident
    subdivision vertices, layer 2 the middle edges of the subdivisions.
    """
    b = _Builder(2)
    vid = {v: b.vertex(f"v{v}") for v in range(1, g.n + 1)}
    for u, v in sorted(g.edges):
        mu = b.vertex(f"u[{u},{v}]@{u}")
        mv = b.vertex(f"u[{u},{v}]@{v}")
        b.edge(1, vid[u], mu)
        b.edge(1, vid[v], mv)
        b.edge(2, mu, mv)
    return b.build(k, {"source_n": g.n, "source_m": g.m})


# ---------------------------------------------------------------------------
# clique


def _trivial_no_instance() -> GeneratedInstance:
    g = TemporalGraph.from_edge_lists(3, [[(1, 2), (1, 3), (2, 3)]])
    return GeneratedInstance(g, 0, {1: "t1", 2: "t2", 3: "t3"}, {"trivial_no": 1})


def gen_clique(g: StaticGraph, k: int) -> GeneratedInstance:
    """Three layers with d = m - C(k,2); colorable iff the source has a k-clique.

    Pads the source with a star so that m - C(k,2) is a positive multiple of
    k (a star never changes k-clique existence for k >= 3), then builds the
    per-vertex selection paths, the per-edge triples, and the d+1 guard path.
    """
    if k < 3:
        raise ValueError("clique construction needs k >= 3")
    choose2 = k * (k - 1) // 2
    if g.m < choose2:
        return _trivial_no_instance()

    edges = set(g.edges)
    n_src = g.n
    surplus = len(edges) - choose2
    leaves = 0
    if surplus % k != 0:
        leaves = k - (surplus % k)
    elif surplus == 0:
        # the selection paths vanish at zero surplus; one full star keeps the
        # construction meaningful without creating or destroying a k-clique
        leaves = k
    if leaves:
        center = n_src + 1
        n_src += 1
        for i in range(leaves):
            n_src += 1
            edges.add((center, n_src))

    m = len(edges)
    d = m - choose2
    ell = d // k
    src_vertices = list(range(1, n_src + 1))
    src_edges = sorted(edges)

    b = _Builder(3)
    u = {vv: [b.vertex(f"path[{vv}]#{i}") for i in range(1, ell + 1)] for vv in src_vertices}
    we = {e: [b.vertex(f"w[{e[0]},{e[1]}]#{i}") for i in range(1, 4)] for e in src_edges}
    r = [b.vertex(f"r{i}") for i in range(1, d + 2)]

    persistent: list[Edge] = []
    for vv in src_vertices:
        for i in range(ell - 1):
            persistent.append((u[vv][i], u[vv][i + 1]))
    for i in range(d):
        persistent.append((r[i], r[i + 1]))
    for t in (1, 2, 3):
        for a, bb in persistent:
            b.edge(t, a, bb)

    for e in src_edges:
        b.edge(1, r[0], we[e][1])
        b.edge(2, r[0], we[e][1])
    for vv in src_vertices:
        b.edge(1, r[1], u[vv][0])
    for e in src_edges:
        i, j = e
        b.edge(2, u[i][0], we[e][0])
        b.edge(2, u[j][0], we[e][2])
        b.edge(3, we[e][0], we[e][1])
        b.edge(3, we[e][1], we[e][2])
    return b.build(
        d,
        {
            "padded_n": n_src,
            "padded_m": m,
            "ell": ell,
            "d": d,
            "star_leaves": leaves,
        },
    )


# ---------------------------------------------------------------------------
# few edges per layer


def normalize_equal_layer_sizes(g: TemporalGraph) -> TemporalGraph:
    """Pad with a star so every layer has the same edge count m, m >= 4 and
    m = 1 mod 3; equivalent to the input at d = 1 since the star is fresh
    and bipartite in every layer."""
    target = max(4, max(len(layer) for layer in g.layers))
    while target % 3 != 1:
        target += 1
    q = max(g.n * (g.n - 1) // 2, target)
    center = g.n + 1
    leaves = list(range(g.n + 2, g.n + 2 + q))
    layers = []
    for layer in g.layers:
        extra = target - len(layer)
        star_edges = [(center, leaves[i]) for i in range(extra)]
        layers.append(sorted(layer) + star_edges)
    return TemporalGraph.from_edge_lists(g.n + 1 + q, layers)


def gen_few_edges(inner: TemporalGraph) -> GeneratedInstance:
    """Spread each layer's edges one per layer; every output layer has three
    edges and maximum degree one, and the instance stays equivalent at d = 1.

    The six fresh gadget vertices form two triangles over time whose forced
    recolorings use up the whole budget inside each original layer's window.
    """
    norm = normalize_equal_layer_sizes(inner)
    m = len(norm.layers[0])
    tau_out = norm.tau * m
    b = _Builder(tau_out)
    for v in range(1, norm.n + 1):
        b.vertex(f"v{v}" if v <= inner.n else ("star-center" if v == inner.n + 1 else f"star-leaf{v - inner.n - 1}"))
    gadget = [b.vertex(name) for name in ("g1", "g2", "g3", "g1'", "g2'", "g3'")]
    g1, g2, g3, h1, h2, h3 = gadget
    plus = {
        1: [(g1, g2), (h1, h2)],
        2: [(g1, g3), (h1, h3)],
        3: [(g2, g3), (h2, h3)],
    }
    for p in range(1, norm.tau + 1):
        ordered = sorted(norm.layers[p - 1])
        for kk in range(1, m + 1):
            t = (p - 1) * m + kk
            e = ordered[kk - 1]
            b.edge(t, *e)
            for a, bb in plus[(kk - 1) % 3 + 1]:
                b.edge(t, a, bb)
    return b.build(1, {"normalized_m": m, "inner_tau": norm.tau, "lifetime": tau_out})


# ---------------------------------------------------------------------------
# multicolored clique


def gen_multicolored_clique(g: StaticGraph, classes) -> GeneratedInstance:
    """Lifetime 2k(k-1)+3 instance with d = |E| encoding multicolored clique.

    Budget-exact bookkeeping: each transition in a class phase spends the
    whole budget on waste paths, selection-gadget flips, and one edge
    gadget's path, which only balances when the selected vertices are
    pairwise adjacent.  Blocked vertices get d fresh neighbors active in the
    two layers around the blocked transition, exactly as stated.
    """
    classes = [sorted(c) for c in classes]
    k = len(classes)
    if k < 2:
        raise ValueError("need at least two color classes")
    flat = [v for c in classes for v in c]
    if sorted(flat) != list(range(1, g.n + 1)):
        raise ValueError("classes must partition the vertex set")
    cls_of = {}
    for ci, c in enumerate(classes, start=1):
        for v in c:
            cls_of[v] = ci
    # intra-class edges can never join a multicolored clique
    edges = sorted(e for e in g.edges if cls_of[e[0]] != cls_of[e[1]])
    m = len(edges)
    if m < k * (k - 1) // 2:
        return _trivial_no_instance()

    ncls = max(len(c) for c in classes)  # classes padded with isolated vertices
    d = m
    tau = 2 * k * (k - 1) + 3

    def pos(c: int, c2: int) -> int:
        return c2 - 1 if c2 > c else c2

    def t_arrow(c: int, c2: int) -> int:
        return 2 * (c - 1) * (k - 1) + pos(c, c2)

    def t_double(c: int, c2: int) -> int:
        return t_arrow(c, c2) + (k - 1)

    def step_of(c: int, p: int) -> int:
        return 2 * (c - 1) * (k - 1) + p

    index_in_class = {}
    for c in classes:
        for i, v in enumerate(c):
            index_in_class[v] = i  # 0-based selection index

    b = _Builder(tau)
    blocked_pairs: list[tuple[int, int]] = []

    def block(v: int, s: int) -> None:
        blocked_pairs.append((v, s))

    x1 = b.vertex("x1")
    x2 = b.vertex("x2")
    x3 = b.vertex("x3")
    b.edge_layers(range(1, tau + 1), x1, x2)
    b.edge(1, x2, x3)
    b.edge_layers(range(2, tau + 1), x1, x3)
    for s in range(1, tau):
        block(x1, s)
        block(x2, s)

    w = {}
    for c in range(1, k + 1):
        for i in range(1, ncls):
            for j in range(1, k):
                w[(c, i, j)] = b.vertex(f"w[c{c},i{i},j{j}]")
                free = {step_of(c, j), step_of(c, j) + (k - 1)}
                for s in range(1, tau):
                    if s not in free:
                        block(w[(c, i, j)], s)
    for c in range(1, k + 1):
        for i in range(1, ncls):
            for j in range(1, k - 1):
                skip = {step_of(c, j + 1), step_of(c, j + 1) + (k - 1)}
                for t in range(1, tau + 1):
                    if t not in skip:
                        b.edge(t, w[(c, i, j)], w[(c, i, j + 1)])
            last_step = step_of(c, k - 1) + (k - 1)
            b.edge(1, x3, w[(c, i, 1)])
            for t in range(last_step + 1, tau + 1):
                b.edge(t, x3, w[(c, i, 1)])

    def build_path(size: int, name: str, free_step: int, anchor: int, anchor_layers) -> list[int]:
        verts = [b.vertex(f"{name}#{i}") for i in range(1, size + 1)]
        for a, bb in zip(verts, verts[1:]):
            b.edge_layers(range(1, tau + 1), a, bb)
        if verts:
            for t in anchor_layers:
                b.edge(t, anchor, verts[0])
            for vtx in verts:
                for s in range(1, tau):
                    if s != free_step:
                        block(vtx, s)
        return verts

    roots = {}
    for e in edges:
        a, bb = e
        c, c2 = cls_of[a], cls_of[bb]
        j, j2 = index_in_class[a], index_in_class[bb]
        root = b.vertex(f"u[{a},{bb}]")
        roots[e] = root
        for s in range(1, tau - 2):
            block(root, s)
        b.edge(1, root, x3)
        b.edge(tau - 1, root, x3)
        spec = [
            (ncls - 1 - j, t_arrow(c, c2)),
            (j, t_double(c, c2)),
            (ncls - 1 - j2, t_arrow(c2, c)),
            (j2, t_double(c2, c)),
        ]
        for pi, (size, free_step) in enumerate(spec, start=1):
            build_path(size, f"u[{a},{bb}]p{pi}", free_step, root, (1, tau))

    waste_sizes = {}
    for i in range(2, tau + 1):
        if i == tau - 1:
            continue
        if i == 2:
            size = max(0, d - ncls)
        elif i == tau:
            size = k * (k - 1) // 2
        else:
            size = max(0, d - (ncls - 1))
        waste_sizes[i] = size
        verts = [b.vertex(f"P{i}#{q}") for q in range(1, size + 1)]
        for a, bb in zip(verts, verts[1:]):
            b.edge_layers(range(1, tau + 1), a, bb)
        if verts:
            b.edge(1, x3, verts[0])
            b.edge(i, x3, verts[0])
            for vtx in verts:
                for s in range(1, tau):
                    if s != i - 1:
                        block(vtx, s)

    for v, s in blocked_pairs:
        for q in range(1, d + 1):
            blk = b.vertex(f"blk[{b.labels[v]},s{s}]#{q}")
            b.edge(s, v, blk)
            b.edge(s + 1, v, blk)

    return b.build(
        d,
        {
            "k": k,
            "class_size": ncls,
            "edge_count": m,
            "lifetime": tau,
            "blocked_pairs": len(blocked_pairs),
        },
    )


def mcclique_witness(result: GeneratedInstance, g: StaticGraph, classes, chosen) -> tuple:
    """The intended coloring sequence for a multicolored clique, as colors rows.

    ``chosen`` maps class number (1-based) to the selected vertex; used by
    tests to validate yes-instances without solving them.
    """
    classes = [sorted(c) for c in classes]
    k = len(classes)
    cls_of = {}
    for ci, c in enumerate(classes, start=1):
        for v in c:
            cls_of[v] = ci
    index_in_class = {}
    for c in classes:
        for i, v in enumerate(c):
            index_in_class[v] = i
    edges = sorted(e for e in g.edges if cls_of[e[0]] != cls_of[e[1]])
    ncls = max(len(c) for c in classes)
    tau = result.graph.tau
    d = result.d
    label_of = {lab: vid for vid, lab in result.labels.items()}

    def pos(c, c2):
        return c2 - 1 if c2 > c else c2

    def t_arrow(c, c2):
        return 2 * (c - 1) * (k - 1) + pos(c, c2)

    def t_double(c, c2):
        return t_arrow(c, c2) + (k - 1)

    def step_of(c, p):
        return 2 * (c - 1) * (k - 1) + p

    i_sel = {c: index_in_class[chosen[c]] for c in range(1, k + 1)}
    colors = [[0] * result.graph.n for _ in range(tau)]

    def set_all(vid, fn):
        for t in range(1, tau + 1):
            colors[t - 1][vid - 1] = fn(t)

    set_all(label_of["x1"], lambda t: 1)
    set_all(label_of["x2"], lambda t: 2)
    set_all(label_of["x3"], lambda t: 1 if t == 1 else 2)

    for c in range(1, k + 1):
        for i in range(1, ncls):
            for j in range(1, k):
                vid = label_of[f"w[c{c},i{i},j{j}]"]
                flip_step = step_of(c, j) if i <= i_sel[c] else step_of(c, j) + (k - 1)
                base = 1 + (j % 2)
                set_all(vid, lambda t, fs=flip_step, bs=base: bs if t <= fs else 3 - bs)

    in_clique = set(chosen.values())
    for e in edges:
        a, bb = e
        c, c2 = cls_of[a], cls_of[bb]
        j, j2 = index_in_class[a], index_in_class[bb]
        picked = a in in_clique and bb in in_clique
        root = label_of[f"u[{a},{bb}]"]
        if picked:
            set_all(root, lambda t: 2 if t <= tau - 2 else 1)
        else:
            set_all(root, lambda t: 1 if t == tau - 1 else 2)
        spec = [
            (ncls - 1 - j, t_arrow(c, c2)),
            (j, t_double(c, c2)),
            (ncls - 1 - j2, t_arrow(c2, c)),
            (j2, t_double(c2, c)),
        ]
        for pi, (size, free_step) in enumerate(spec, start=1):
            for q in range(1, size + 1):
                vid = label_of[f"u[{a},{bb}]p{pi}#{q}"]
                start_color = 1 + ((q + 1) % 2)
                if picked:
                    set_all(vid, lambda t, fs=free_step, sc=start_color: sc if t <= fs else 3 - sc)
                else:
                    set_all(vid, lambda t, sc=start_color: sc)

    for i in range(2, tau + 1):
        if i == tau - 1:
            continue
        q = 1
        while f"P{i}#{q}" in label_of:
            vid = label_of[f"P{i}#{q}"]
            start_color = 2 if q % 2 == 1 else 1  # first vertex faces x3 = 1 in layer 1
            set_all(vid, lambda t, ii=i, sc=start_color: sc if t < ii else 3 - sc)
            q += 1

    for vid, lab in result.labels.items():
        if not lab.startswith("blk["):
            continue
        target_lab, s_part = lab[4:].split(",s", 1)
        s = int(s_part.split("]", 1)[0])
        target = label_of[target_lab]
        set_all(vid, lambda t, tv=target, ss=s: 3 - colors[ss - 1][tv - 1])
    return tuple(tuple(row) for row in colors)


# ---------------------------------------------------------------------------
# composition and random instances


def and_compose(instances) -> TemporalGraph:
    """Concatenate instances with n empty separator layers between them.

    At d = 1 the result is colorable iff every input is: the n empty layers
    give enough single-change steps to morph any coloring into any other.
    """
    instances = list(instances)
    if not instances:
        raise ValueError("need at least one instance")
    n = instances[0].n
    for inst in instances:
        if inst.n != n:
            raise ValueError("instances must share the vertex count")
    layers: list[frozenset[Edge]] = []
    for qi, inst in enumerate(instances):
        if qi > 0:
            layers.extend(frozenset() for _ in range(n))
        layers.extend(inst.layers)
    return TemporalGraph(n, tuple(layers))


def gen_random(n: int, tau: int, edge_prob: float, persistence: float, seed: int) -> TemporalGraph:
    """Seeded random temporal graph with per-edge persistence between layers."""
    if not (0 <= edge_prob <= 1 and 0 <= persistence <= 1):
        raise ValueError("probabilities must lie in [0, 1]")
    rng = random.Random(seed)
    pairs = list(combinations(range(1, n + 1), 2))
    layers = []
    current: set[Edge] = set()
    for e in pairs:
        if rng.random() < edge_prob:
            current.add(e)
    layers.append(frozenset(current))
    for _ in range(tau - 1):
        nxt: set[Edge] = set()
        for e in pairs:
            if e in current:
                if rng.random() < persistence:
                    nxt.add(e)
            else:
                if rng.random() < edge_prob * (1 - persistence):
                    nxt.add(e)
        layers.append(frozenset(nxt))
        current = nxt
    return TemporalGraph(n, tuple(layers))
