"""Coloring-extension machinery: pinned colorings, scheduling, and the
component-orientation exact solver.

An extension instance pins some (vertex, layer) colors; once every edge has
both endpoints pinned the edges can be deleted and feasibility reduces to a
single-machine unit-job scheduling problem with release and due dates,
decided by the earliest-due-date greedy.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .core import (
    CapExceededError,
    ColoringSequence,
    PreconditionError,
    SolveOutcome,
    TemporalGraph,
    PartialColoringSequence,
    layer_components,
)
from .exact import DEFAULT_CAPS, SolverCaps, _micros


@dataclass(frozen=True, order=True)
class ForcedRecoloring:
    """Vertex pinned to different colors at two pin-consecutive layers.

    ``t1`` is the last layer where the old color is pinned, ``t2`` the first
    later pinned layer; no layer strictly between pins the vertex, and the
    change to ``target_color`` must happen somewhere in between.
    """

    vertex: int
    t1: int
    t2: int
    target_color: int

    def __post_init__(self):
        if not self.t1 < self.t2:
            raise ValueError("forced recoloring needs t1 < t2")
        if self.target_color not in (1, 2):
            raise ValueError("target color must be 1 or 2")


@dataclass(frozen=True)
class Job:
    release: int
    due: int
    vertex: int
    t1: int


@dataclass(frozen=True)
class JobSet:
    """Unit jobs in transition slots: slot d(t-1)+1 .. dt belongs to transition t."""

    jobs: tuple[Job, ...]
    slots_per_transition: int
    transition_count: int

    def __post_init__(self):
        for job in self.jobs:
            if job.release > job.due:
                raise ValueError(f"job {job} has release after due date")


def apply_reduction_rule_colored_edge(g: TemporalGraph, p: PartialColoringSequence) -> TemporalGraph:
    """Delete every edge whose endpoints are both colored in that edge's layer."""
    new_layers = []
    for t in range(1, g.tau + 1):
        keep = set()
        for u, v in g.layers[t - 1]:
            if p.defined(u, t) and p.defined(v, t):
                if p.color(u, t) == p.color(v, t):
                    raise ValueError(
                        f"layer {t}: edge {{{u},{v}}} has both endpoints colored {p.color(u, t)}; "
                        "partial coloring is not proper"
                    )
                continue
            keep.add((u, v))
        new_layers.append(frozenset(keep))
    return TemporalGraph(g.n, tuple(new_layers))


def extract_forced_recolorings(p: PartialColoringSequence) -> frozenset[ForcedRecoloring]:
    """All (v, t1, t2, color) with pin-consecutive layers of differing colors."""
    out = set()
    for v in range(1, p.n + 1):
        prev_t = None
        prev_c = None
        for t in range(1, p.tau + 1):
            if not p.defined(v, t):
                continue
            c = p.color(v, t)
            if prev_t is not None and c != prev_c:
                out.add(ForcedRecoloring(v, prev_t, t, c))
            prev_t, prev_c = t, c
    return frozenset(out)


def edd_feasible(jobs: JobSet):
    """Earliest-due-date greedy; returns (feasible, schedule or None).

    Scans slots in increasing order and runs the released, unscheduled job
    with the smallest due date, ties broken by (vertex id, t1).  Feasible
    means every job fits in [release, due], i.e. maximum lateness 0.
    """
    pending = sorted(jobs.jobs, key=lambda j: (j.release, j.due, j.vertex, j.t1))
    if not pending:
        return True, {}
    schedule: dict[Job, int] = {}
    available: list[Job] = []
    idx = 0
    horizon = max(j.due for j in pending)
    for slot in range(1, horizon + 1):
        while idx < len(pending) and pending[idx].release <= slot:
            available.append(pending[idx])
            idx += 1
        if not available:
            continue
        available.sort(key=lambda j: (j.due, j.vertex, j.t1))
        job = available.pop(0)
        if job.due < slot:
            return False, None
        schedule[job] = slot
        if len(schedule) == len(pending):
            return True, schedule
    return False, None


def _jobs_from_forced(
    forced, d: int, transition_count: int, paper_due_dates: bool = False
) -> JobSet:
    """Jobs for the forced recolorings: release d(t1-1)+1, due d(t2-1).

    The change must be visible by layer t2, so the last usable slot is the
    final slot of transition t2-1.  ``paper_due_dates`` switches to the looser
    due date d*t2 for comparison runs.
    """
    jobs = []
    for fr in sorted(forced):
        due = d * fr.t2 if paper_due_dates else d * (fr.t2 - 1)
        jobs.append(Job(d * (fr.t1 - 1) + 1, due, fr.vertex, fr.t1))
    return JobSet(tuple(jobs), d, transition_count)


def solve_ms2ce_edgeless(
    g: TemporalGraph,
    p: PartialColoringSequence,
    d: int,
    paper_due_dates: bool = False,
) -> SolveOutcome:
    """Decide an edgeless extension instance via scheduling; witness on yes.

    Never-pinned vertices are colored 1 throughout; every other vertex starts
    at its first pinned color and flips exactly where the schedule places the
    corresponding forced recoloring.
    """
    start = time.perf_counter()
    for t, layer in enumerate(g.layers, start=1):
        if layer:
            raise PreconditionError(f"layer {t} still contains edges")
    if p.tau != g.tau or p.n != g.n:
        raise PreconditionError("partial coloring does not match the graph dimensions")

    forced = extract_forced_recolorings(p)
    stats = {"forced_recolorings": len(forced)}
    if d == 0:
        if forced:
            stats["micros"] = _micros(start)
            return SolveOutcome(False, None, stats, "ms2ce-edgeless")
        schedule: dict[Job, int] = {}
    else:
        jobset = _jobs_from_forced(forced, d, g.tau - 1, paper_due_dates)
        ok, schedule = edd_feasible(jobset)
        if not ok:
            stats["micros"] = _micros(start)
            return SolveOutcome(False, None, stats, "ms2ce-edgeless")

    first = [1] * (g.n + 1)
    for v in range(1, g.n + 1):
        for t in range(1, g.tau + 1):
            if p.defined(v, t):
                first[v] = p.color(v, t)
                break
    flips: dict[int, set[int]] = {}
    for job, slot in schedule.items():
        transition = (slot - 1) // d + 1
        flips.setdefault(transition, set()).add(job.vertex)

    rows = []
    current = first[1:]
    rows.append(tuple(current))
    for t in range(1, g.tau):
        current = [3 - c if v + 1 in flips.get(t, ()) else c for v, c in enumerate(current)]
        rows.append(tuple(current))
    witness = ColoringSequence(tuple(rows))
    stats["micros"] = _micros(start)
    return SolveOutcome(True, witness, stats, "ms2ce-edgeless")


def solve_component_orientation(
    g: TemporalGraph,
    d: int,
    caps: SolverCaps = DEFAULT_CAPS,
    deterministic: bool = True,
    paper_due_dates: bool = False,
) -> SolveOutcome:
    """Exact solver enumerating per-layer orientations of edged components.

    Every component of a layer that contains an edge has exactly two proper
    colorings; the search walks orientation bit vectors (binary counter,
    layers ascending, components by smallest vertex), pins all non-isolated
    vertices accordingly, and decides the residual edgeless extension
    instance by scheduling.  Prefixes whose already-forced recolorings are
    unschedulable are cut, which never skips a feasible completion.
    """
    start = time.perf_counter()
    per_layer = []
    for t, layer in enumerate(g.layers, start=1):
        try:
            comps = layer_components(g.n, layer)
        except PreconditionError:
            return SolveOutcome(False, None, {"micros": _micros(start)}, "orientation")
        per_layer.append([c for c in comps if c.has_edge])
    total_bits = sum(len(comps) for comps in per_layer)
    if total_bits > caps.orientation_bits:
        raise CapExceededError(
            f"orientation space needs {total_bits} bits, cap is {caps.orientation_bits}",
            {"orientation_bits": total_bits},
        )

    stats = {"leaves": 0, "pruned": 0, "nodes": 0}
    pins: list[list[int]] = []  # per layer: color per vertex, 0 = unpinned

    def layer_pins(t: int, counter: int) -> list[int]:
        comps = per_layer[t - 1]
        row = [0] * g.n
        ncomp = len(comps)
        for i, comp in enumerate(comps):
            flip = counter >> (ncomp - 1 - i) & 1
            mask = comp.base_mask ^ (comp.mask if flip else 0)
            for v in comp.vertices:
                row[v - 1] = 2 if mask >> (v - 1) & 1 else 1
        return row

    # incremental forced-recoloring bookkeeping along the DFS path
    last_pin: list[tuple[int, int] | None] = [None] * (g.n + 1)
    jobs: list[Job] = []

    def known_jobs_feasible() -> bool:
        if not jobs:
            return True
        ok, _ = edd_feasible(JobSet(tuple(jobs), d, g.tau - 1))
        return ok

    def descend(t: int) -> SolveOutcome | None:
        stats["nodes"] += 1
        if stats["nodes"] > caps.orientation_nodes:
            raise CapExceededError(
                f"orientation search exceeded {caps.orientation_nodes} nodes",
                {"orientation_nodes": stats["nodes"]},
            )
        if t > g.tau:
            stats["leaves"] += 1
            p = PartialColoringSequence(tuple(tuple(row) for row in pins))
            residual = apply_reduction_rule_colored_edge(g, p)
            sub = solve_ms2ce_edgeless(residual, p, d, paper_due_dates)
            if sub.verdict:
                return sub
            return None
        comps = per_layer[t - 1]
        for counter in range(1 << len(comps)):
            row = layer_pins(t, counter)
            pins.append(row)
            added: list[tuple[int, tuple[int, int] | None]] = []
            appended = 0
            infeasible = False
            for comp in comps:
                for v in comp.vertices:
                    prev = last_pin[v]
                    added.append((v, prev))
                    color = row[v - 1]
                    if prev is not None and prev[1] != color:
                        if d == 0:
                            infeasible = True
                        else:
                            due = d * t if paper_due_dates else d * (t - 1)
                            jobs.append(Job(d * (prev[0] - 1) + 1, due, v, prev[0]))
                            appended += 1
                    last_pin[v] = (t, color)
            result = None
            if infeasible or (appended and not known_jobs_feasible()):
                stats["pruned"] += 1
            else:
                result = descend(t + 1)
            for _ in range(appended):
                jobs.pop()
            for v, prev in reversed(added):
                last_pin[v] = prev
            pins.pop()
            if result is not None:
                return result
        return None

    found = descend(1)
    stats["micros"] = _micros(start)
    stats["states"] = stats["leaves"]
    if found is None:
        return SolveOutcome(False, None, stats, "orientation")
    stats.update({k: v for k, v in found.stats.items() if k == "forced_recolorings"})
    return SolveOutcome(True, found.witness, stats, "orientation")
