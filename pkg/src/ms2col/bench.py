"""Benchmark harness: run solver portfolios over named suites, emit CSV,
and render runtime figures next to the delimited output."""

from __future__ import annotations

import io
import time
from dataclasses import dataclass
from pathlib import Path

from . import cocluster, exact, extension, generators, globalbudget, treewidth
from .core import CapExceededError, TemporalGraph
from .exact import SolverCaps

CSV_HEADER = "instance,algo,verdict,micros,states"

LOCAL_ALGOS = {
    "bruteforce": exact.solve_bruteforce_local,
    "layered": exact.solve_layered_dag,
    "orientation": extension.solve_component_orientation,
    "dcc": cocluster.solve_dcc_sum,
    "treewidth": treewidth.solve_treewidth_dp,
    "auto": exact.solve_auto,
}


@dataclass
class BenchRow:
    instance: str
    algo: str
    verdict: str
    micros: int
    states: int

    def csv(self) -> str:
        return f"{self.instance},{self.algo},{self.verdict},{self.micros},{self.states}"


def _suite_instances(name: str):
    """Named instance suites: (label, graph, d) triples."""
    out = []
    if name in ("quick", "random-local"):
        count = 12 if name == "quick" else 40
        for i in range(count):
            n = 4 + i % 4
            tau = 2 + i % 3
            g = generators.gen_random(n, tau, 0.35, 0.5, seed=1000 + i)
            out.append((f"random-n{n}-t{tau}-s{1000 + i}", g, 1 + i % 3))
    if name in ("quick", "gadgets"):
        formula = [(1, 2, 3)]
        gen = generators.gen_x13sat(formula, 3)
        out.append(("x13sat-1clause", gen.graph, gen.d))
        from .core import StaticGraph

        tri = StaticGraph(3, frozenset({(1, 2), (1, 3), (2, 3)}))
        gen = generators.gen_edge_bipartization(tri, 1)
        out.append(("edgebip-triangle-k1", gen.graph, gen.d))
        k4 = StaticGraph(4, frozenset({(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)}))
        gen = generators.gen_clique(k4, 3)
        out.append(("clique-k4", gen.graph, gen.d))
    if not out:
        raise ValueError(f"unknown suite {name!r}; choose quick, random-local, or gadgets")
    return out


def run_suite(
    name: str,
    algos: list[str] | None = None,
    timeout_ms: int | None = None,
    caps: SolverCaps | None = None,
) -> list[BenchRow]:
    caps = caps or SolverCaps.from_env()
    algos = algos or ["auto", "bruteforce", "layered", "orientation", "dcc"]
    rows = []
    for label, g, d in _suite_instances(name):
        for algo in algos:
            fn = LOCAL_ALGOS[algo]
            start = time.perf_counter()
            try:
                outcome = fn(g, d) if algo == "greedy" else fn(g, d, caps)
                verdict = "yes" if outcome.verdict else "no"
                states = outcome.stats.get("states", 0)
            except CapExceededError:
                verdict = "capped"
                states = 0
            except Exception:
                verdict = "error"
                states = 0
            micros = int((time.perf_counter() - start) * 1_000_000)
            if timeout_ms is not None and micros > timeout_ms * 1000:
                verdict = "timeout"
            rows.append(BenchRow(label, algo, verdict, micros, states))
    return rows


def rows_to_csv(rows) -> str:
    return "\n".join([CSV_HEADER] + [r.csv() for r in rows]) + "\n"


def render_figures(rows, directory: Path) -> list[Path]:
    """Write runtime figures for a bench run; returns the created paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    directory.mkdir(parents=True, exist_ok=True)
    by_algo: dict[str, list[int]] = {}
    for r in rows:
        if r.verdict in ("yes", "no"):
            by_algo.setdefault(r.algo, []).append(r.micros)
    created = []

    fig, ax = plt.subplots(figsize=(7, 4))
    algos = sorted(by_algo)
    means = [sum(by_algo[a]) / len(by_algo[a]) for a in algos]
    ax.bar(algos, means, color="#4878a8")
    ax.set_ylabel("mean wall time (us)")
    ax.set_title("solver runtime by algorithm")
    ax.set_yscale("log")
    fig.tight_layout()
    path = directory / "bench_runtime.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    created.append(path)

    fig, ax = plt.subplots(figsize=(7, 4))
    for a in algos:
        ax.scatter(range(len(by_algo[a])), sorted(by_algo[a]), label=a, s=14)
    ax.set_xlabel("instance rank")
    ax.set_ylabel("wall time (us)")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = directory / "bench_profile.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    created.append(path)
    return created
