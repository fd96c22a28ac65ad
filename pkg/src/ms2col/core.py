"""Temporal-graph data model, coloring representations, and verification primitives.

Vertices are dense 1-based integers.  Edges are stored as sorted pairs
``(u, v)`` with ``u < v`` so that equality and hashing are canonical.
A single-layer 2-coloring is a tuple of length ``n`` over ``{1, 2}``
(index ``v - 1`` holds the color of vertex ``v``).  Solvers internally
use bitmask colorings: bit ``v - 1`` set means vertex ``v`` has color 2.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


Edge = tuple[int, int]


class PreconditionError(ValueError):
    """An operation was called outside its documented precondition."""


class CapExceededError(RuntimeError):
    """An exact solver refused to run because a resource cap would be exceeded.

    Never raised after partial work has produced an answer; callers can
    always trust a returned verdict.
    """

    def __init__(self, message: str, estimates: dict[str, int] | None = None):
        super().__init__(message)
        self.estimates = dict(estimates or {})


def normalize_edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"self-loop on vertex {u}")
    return (u, v) if u < v else (v, u)


def _check_edges(n: int, edges, where: str) -> frozenset[Edge]:
    seen = set()
    for e in edges:
        u, v = e
        e = normalize_edge(u, v)
        if not (1 <= e[0] and e[1] <= n):
            raise ValueError(f"{where}: edge {e} has endpoint outside 1..{n}")
        if e in seen:
            raise ValueError(f"{where}: duplicate edge {e}")
        seen.add(e)
    return frozenset(seen)


@dataclass(frozen=True)
class StaticGraph:
    """A static graph on vertices 1..n with a canonical edge set."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        object.__setattr__(self, "edges", _check_edges(self.n, self.edges, "graph"))

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(1, self.n + 1)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass(frozen=True)
class TemporalGraph:
    """A temporal graph: fixed vertex set 1..n plus one edge set per layer."""

    n: int
    layers: tuple[frozenset[Edge], ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        if len(self.layers) < 1:
            raise ValueError("lifetime must be at least 1")
        object.__setattr__(
            self,
            "layers",
            tuple(
                _check_edges(self.n, layer, f"layer {t + 1}")
                for t, layer in enumerate(self.layers)
            ),
        )

    @classmethod
    def from_edge_lists(cls, n: int, layers) -> "TemporalGraph":
        return cls(n, tuple(frozenset(normalize_edge(*e) for e in layer) for layer in layers))

    @property
    def tau(self) -> int:
        return len(self.layers)

    @property
    def time_edges(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def layer(self, t: int) -> StaticGraph:
        """The t-th layer (1-based) as a static graph."""
        return StaticGraph(self.n, self.layers[t - 1])


@dataclass(frozen=True)
class ColoringSequence:
    """One total 2-coloring per layer; the witness object produced by solvers."""

    colors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for t, layer in enumerate(self.colors):
            for c in layer:
                if c not in (1, 2):
                    raise ValueError(f"layer {t + 1}: color {c} outside {{1,2}}")

    @property
    def tau(self) -> int:
        return len(self.colors)

    @property
    def n(self) -> int:
        return len(self.colors[0]) if self.colors else 0

    def color(self, v: int, t: int) -> int:
        return self.colors[t - 1][v - 1]


@dataclass(frozen=True)
class PartialColoringSequence:
    """Per-layer partial colorings; 0 marks an uncolored (vertex, layer) slot."""

    colors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for t, layer in enumerate(self.colors):
            for c in layer:
                if c not in (0, 1, 2):
                    raise ValueError(f"layer {t + 1}: entry {c} outside {{0,1,2}}")

    @classmethod
    def empty(cls, n: int, tau: int) -> "PartialColoringSequence":
        return cls(tuple((0,) * n for _ in range(tau)))

    @property
    def tau(self) -> int:
        return len(self.colors)

    @property
    def n(self) -> int:
        return len(self.colors[0]) if self.colors else 0

    def defined(self, v: int, t: int) -> bool:
        return self.colors[t - 1][v - 1] != 0

    def color(self, v: int, t: int) -> int:
        c = self.colors[t - 1][v - 1]
        if c == 0:
            raise KeyError(f"vertex {v} is uncolored in layer {t}")
        return c

    def with_pins(self, pins) -> "PartialColoringSequence":
        """A copy with extra pins from an iterable of (v, t, color)."""
        rows = [list(row) for row in self.colors]
        for v, t, c in pins:
            rows[t - 1][v - 1] = c
        return PartialColoringSequence(tuple(tuple(row) for row in rows))


@dataclass(frozen=True)
class Budget:
    """A recoloring budget: per-transition ("local") or whole-lifetime ("global")."""

    kind: str
    value: int

    def __post_init__(self):
        if self.kind not in ("local", "global"):
            raise ValueError(f"unknown budget kind {self.kind!r}")
        if self.value < 0:
            raise ValueError("budget value must be nonnegative")


@dataclass
class SolveOutcome:
    """Verdict plus optional witness plus solver statistics."""

    verdict: bool
    witness: ColoringSequence | None = None
    stats: dict[str, int] = field(default_factory=dict)
    algo: str = ""


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# basic operations


def underlying_graph(g: TemporalGraph) -> StaticGraph:
    """The static graph whose edge set is the union of all layers."""
    edges: set[Edge] = set()
    for layer in g.layers:
        edges |= layer
    return StaticGraph(g.n, frozenset(edges))


def is_proper_coloring(layer_edges, coloring) -> bool:
    """True iff no edge of the layer is monochromatic under the total coloring."""
    return all(coloring[u - 1] != coloring[v - 1] for u, v in layer_edges)


def delta(f, g) -> int:
    """Hamming distance between two colorings of the same vertex set."""
    if len(f) != len(g):
        raise ValueError("colorings have different vertex sets")
    return sum(1 for a, b in zip(f, g) if a != b)


def verify_solution(g: TemporalGraph, s: ColoringSequence, b: Budget) -> VerificationResult:
    """Check a coloring sequence: proper per layer and within the budget.

    Rejects with a description of the first violation instead of raising,
    so that callers can surface diagnostics verbatim.
    """
    if s.tau != g.tau:
        return VerificationResult(False, f"dimension mismatch: {s.tau} layers of colors for lifetime {g.tau}")
    for t in range(1, g.tau + 1):
        if len(s.colors[t - 1]) != g.n:
            return VerificationResult(
                False, f"dimension mismatch: layer {t} colors {len(s.colors[t - 1])} vertices, graph has {g.n}"
            )
    for t in range(1, g.tau + 1):
        for u, v in sorted(g.layers[t - 1]):
            if s.color(u, t) == s.color(v, t):
                return VerificationResult(False, f"layer {t}: edge {{{u},{v}}} monochromatic")
    deltas = [delta(s.colors[t], s.colors[t + 1]) for t in range(g.tau - 1)]
    if b.kind == "local":
        for t, dl in enumerate(deltas, start=1):
            if dl > b.value:
                return VerificationResult(
                    False, f"transition {t}: {dl} color changes exceed local budget {b.value}"
                )
    else:
        total = sum(deltas)
        if total > b.value:
            return VerificationResult(False, f"{total} total color changes exceed global budget {b.value}")
    return VerificationResult(True)


# ---------------------------------------------------------------------------
# components, bipartiteness, coloring enumeration


@dataclass(frozen=True)
class Component:
    """A connected component with its lexicographically-least proper coloring.

    ``base_mask`` has bit v-1 set for vertices colored 2 when the root
    (smallest vertex of the component) is colored 1.
    """

    vertices: tuple[int, ...]
    mask: int
    base_mask: int
    has_edge: bool


@dataclass(frozen=True)
class LayerBipartiteness:
    bipartite: bool
    odd_walk: tuple[int, ...] | None = None


def _bfs_components(n: int, edges):
    """BFS 2-coloring per component; yields components or an odd closed walk.

    Returns (components, odd_walk); components is None when an odd walk exists.
    """
    adj: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for u, v in sorted(edges):
        adj[u].append(v)
        adj[v].append(u)
    color = [0] * (n + 1)
    parent = [0] * (n + 1)
    comps: list[Component] = []
    for root in range(1, n + 1):
        if color[root]:
            continue
        color[root] = 1
        parent[root] = 0
        queue = deque([root])
        verts = []
        base = 0
        has_edge = False
        while queue:
            u = queue.popleft()
            verts.append(u)
            if color[u] == 2:
                base |= 1 << (u - 1)
            for w in adj[u]:
                has_edge = True
                if not color[w]:
                    color[w] = 3 - color[u]
                    parent[w] = u
                    queue.append(w)
                elif color[w] == color[u]:
                    walk = _odd_closed_walk(u, w, parent)
                    return None, walk
        comps.append(Component(tuple(sorted(verts)), _vertex_mask(verts), base, has_edge))
    return comps, None


def _vertex_mask(vertices) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << (v - 1)
    return mask


def _odd_closed_walk(u: int, w: int, parent) -> tuple[int, ...]:
    """A closed odd walk through the monochromatic edge {u, w} and the BFS tree."""
    path_u = [u]
    while parent[path_u[-1]]:
        path_u.append(parent[path_u[-1]])
    path_w = [w]
    while parent[path_w[-1]]:
        path_w.append(parent[path_w[-1]])
    # u..root + root..w + closing edge w-u; same-parity depths make it odd
    return tuple(path_u + path_w[::-1][1:] + [u])


def layer_components(n: int, edges) -> list[Component]:
    """Connected components of one layer, sorted by smallest vertex.

    Raises PreconditionError when the layer is not bipartite.
    """
    comps, walk = _bfs_components(n, edges)
    if comps is None:
        raise PreconditionError(f"layer is not bipartite (odd closed walk {walk})")
    return comps


def layer_bipartite_check(g: TemporalGraph) -> list[LayerBipartiteness]:
    """Per-layer bipartiteness verdicts with an odd closed walk on failure."""
    out = []
    for layer in g.layers:
        comps, walk = _bfs_components(g.n, layer)
        out.append(LayerBipartiteness(comps is not None, walk))
    return out


def static_bipartite_coloring(g: StaticGraph) -> tuple[int, ...] | None:
    """The lexicographically-least proper 2-coloring, or None if non-bipartite."""
    comps, _ = _bfs_components(g.n, g.edges)
    if comps is None:
        return None
    mask = 0
    for comp in comps:
        mask |= comp.base_mask
    return mask_to_colors(mask, g.n)


def colors_to_mask(colors) -> int:
    mask = 0
    for i, c in enumerate(colors):
        if c == 2:
            mask |= 1 << i
    return mask


def mask_to_colors(mask: int, n: int) -> tuple[int, ...]:
    return tuple(2 if mask >> i & 1 else 1 for i in range(n))


def enumerate_proper_colorings(layer_edges, n: int):
    """Yield every proper 2-coloring of the layer exactly once.

    Components are indexed by smallest vertex; colorings are emitted in
    binary-counter order over the component orientation bits, the last
    component being the least-significant bit.  The total count equals
    2**(number of connected components, isolated vertices included).
    """
    comps = layer_components(n, layer_edges)
    base = 0
    for comp in comps:
        base |= comp.base_mask
    ncomp = len(comps)
    for counter in range(1 << ncomp):
        mask = base
        for i, comp in enumerate(comps):
            if counter >> (ncomp - 1 - i) & 1:
                mask ^= comp.mask
        yield mask_to_colors(mask, n)
