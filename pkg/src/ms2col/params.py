"""Structural graph parameters and their three temporal lifts.

Lifts: the maximum over layers, the sum over layers of max(1, value), and
the underlying-graph value plus the lifetime.  Heuristic values (treewidth)
are always tagged as upper bounds, never presented as exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import StaticGraph, TemporalGraph, underlying_graph
from .cocluster import dcc_modulator
from .treewidth import build_nice_tree_decomposition


def param_ncc(g: StaticGraph) -> int:
    """Number of connected components, isolated vertices included."""
    parent = list(range(g.n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        parent[find(u)] = find(v)
    return len({find(v) for v in range(1, g.n + 1)})


def param_max_degree(g: StaticGraph) -> int:
    deg = [0] * (g.n + 1)
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
    return max(deg[1:], default=0)


def param_fes(g: StaticGraph) -> int:
    """Feedback edge number: m - n + number of components (exact)."""
    return g.m - g.n + param_ncc(g)


def param_vc(g: StaticGraph, bound: int = 64) -> int | None:
    """Exact vertex cover number via degree branching, or None above the bound."""

    def cover(edges: list, k: int) -> bool:
        if not edges:
            return True
        if k == 0:
            return False
        deg: dict[int, int] = {}
        for u, v in edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        pivot = min(sorted(deg), key=lambda x: -deg[x])
        # either the pivot is in the cover, or all of its neighbors are
        if cover([e for e in edges if pivot not in e], k - 1):
            return True
        nbrs = {x for e in edges if pivot in e for x in e} - {pivot}
        if len(nbrs) > k:
            return False
        rest = [e for e in edges if e[0] not in nbrs and e[1] not in nbrs]
        return cover(rest, k - len(nbrs))

    edges = sorted(g.edges)
    for k in range(min(bound, g.n) + 1):
        if cover(edges, k):
            return k
    return None


def param_dcc(g: StaticGraph, bound: int = 64) -> int | None:
    mod = dcc_modulator(g, min(bound, g.n))
    return None if mod is None else len(mod)


def param_tw_upper(g: StaticGraph) -> int:
    """Min-fill heuristic width; an upper bound on the true treewidth."""
    return max(build_nice_tree_decomposition(g).width, 0)


PARAMETERS = {
    "ncc": (param_ncc, True),
    "maxdeg": (param_max_degree, True),
    "fes": (param_fes, True),
    "vc": (param_vc, True),
    "dcc": (param_dcc, True),
    "tw-upper": (param_tw_upper, False),
}


@dataclass(frozen=True)
class ParamReport:
    parameter: str
    per_layer: tuple[int, ...]
    underlying: int
    p_max: int
    p_sum: int
    p_under_tau: int
    exact: bool

    def as_kv_lines(self) -> list[str]:
        kind = "exact" if self.exact else "upper-bound"
        lines = [f"parameter={self.parameter}", f"exactness={kind}"]
        for t, val in enumerate(self.per_layer, start=1):
            lines.append(f"layer.{t}={val}")
        lines.append(f"underlying={self.underlying}")
        lines.append(f"lift.max={self.p_max}")
        lines.append(f"lift.sum={self.p_sum}")
        lines.append(f"lift.underlying+tau={self.p_under_tau}")
        return lines


def lift(parameter: str, g: TemporalGraph) -> ParamReport:
    """Per-layer values plus the three lifted values for one parameter."""
    if parameter not in PARAMETERS:
        raise ValueError(f"unknown parameter {parameter!r}; choose from {sorted(PARAMETERS)}")
    fn, exact = PARAMETERS[parameter]
    per_layer = []
    for t in range(1, g.tau + 1):
        val = fn(g.layer(t))
        if val is None:
            raise ValueError(f"{parameter} exceeds its bound on layer {t}")
        per_layer.append(val)
    under = fn(underlying_graph(g))
    if under is None:
        raise ValueError(f"{parameter} exceeds its bound on the underlying graph")
    return ParamReport(
        parameter,
        tuple(per_layer),
        under,
        max(per_layer),
        sum(max(1, v) for v in per_layer),
        under + g.tau,
        exact,
    )


def format_report_table(reports) -> str:
    """Aligned text table over one or more parameter reports."""
    headers = ["parameter", "layers", "underlying", "max", "sum", "underlying+tau", "exactness"]
    rows = []
    for r in reports:
        rows.append(
            [
                r.parameter,
                ",".join(str(v) for v in r.per_layer),
                str(r.underlying),
                str(r.p_max),
                str(r.p_sum),
                str(r.p_under_tau),
                "exact" if r.exact else "upper-bound",
            ]
        )
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h) for i, h in enumerate(headers)]
    out = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    for row in rows:
        out.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(out)
