"""Text formats: instances, solutions, multistage 2-CNF, and generator inputs.

Instance grammar: '#' comment lines; header "p ms2c <n> <tau>"; an optional
budget line "b local <d>" or "b global <D>"; then for each t in 1..tau, in
order, "l <t> <m_t>" followed by m_t lines "e <u> <v>" with 1 <= u < v <= n.
All parse errors carry the offending line number.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Budget, ColoringSequence, TemporalGraph, StaticGraph


class InstanceParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass
class InstanceFile:
    graph: TemporalGraph
    budget: Budget | None = None
    comments: tuple[str, ...] = ()


def _content_lines(text: str):
    comments = []
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            comments.append(stripped[1:].strip())
            continue
        lines.append((lineno, stripped))
    return lines, comments


def parse_instance(text: str) -> InstanceFile:
    lines, comments = _content_lines(text)
    if not lines:
        raise InstanceParseError(1, "empty instance")
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(lines):
            raise InstanceParseError(lines[-1][0], "unexpected end of file")
        item = lines[pos]
        pos += 1
        return item

    lineno, header = take()
    parts = header.split()
    if len(parts) != 4 or parts[0] != "p" or parts[1] != "ms2c":
        raise InstanceParseError(lineno, f'expected header "p ms2c <n> <tau>", got {header!r}')
    try:
        n, tau = int(parts[2]), int(parts[3])
    except ValueError:
        raise InstanceParseError(lineno, "header counts must be integers") from None
    if n < 0 or tau < 1:
        raise InstanceParseError(lineno, f"invalid sizes n={n}, tau={tau}")

    budget = None
    if pos < len(lines) and lines[pos][1].startswith("b "):
        lineno, bline = take()
        parts = bline.split()
        if len(parts) != 3 or parts[1] not in ("local", "global"):
            raise InstanceParseError(lineno, f'expected "b local <d>" or "b global <D>", got {bline!r}')
        try:
            budget = Budget(parts[1], int(parts[2]))
        except ValueError as exc:
            raise InstanceParseError(lineno, str(exc)) from None

    layers = []
    for t in range(1, tau + 1):
        if pos >= len(lines):
            raise InstanceParseError(lines[-1][0], f"expected layer {t} of {tau}")
        lineno, lline = take()
        parts = lline.split()
        if len(parts) != 3 or parts[0] != "l":
            raise InstanceParseError(lineno, f'expected "l {t} <edge count>", got {lline!r}')
        if int(parts[1]) != t:
            raise InstanceParseError(lineno, f"expected layer {t}, got layer {parts[1]}")
        count = int(parts[2])
        edges = []
        seen = set()
        for _ in range(count):
            if pos >= len(lines):
                raise InstanceParseError(lines[-1][0], f"layer {t}: expected {count} edges")
            lineno, eline = take()
            parts = eline.split()
            if len(parts) != 3 or parts[0] != "e":
                raise InstanceParseError(lineno, f'expected "e <u> <v>", got {eline!r}')
            u, v = int(parts[1]), int(parts[2])
            if not (1 <= u < v <= n):
                raise InstanceParseError(lineno, f"edge ({u},{v}) violates 1 <= u < v <= {n}")
            if (u, v) in seen:
                raise InstanceParseError(lineno, f"duplicate edge ({u},{v}) in layer {t}")
            seen.add((u, v))
            edges.append((u, v))
        layers.append(edges)
    if pos < len(lines):
        raise InstanceParseError(lines[pos][0], f"unexpected trailing content {lines[pos][1]!r}")
    return InstanceFile(TemporalGraph.from_edge_lists(n, layers), budget, tuple(comments))


def serialize_instance(inst: InstanceFile) -> str:
    g = inst.graph
    out = [f"# {c}" for c in inst.comments]
    out.append(f"p ms2c {g.n} {g.tau}")
    if inst.budget is not None:
        out.append(f"b {inst.budget.kind} {inst.budget.value}")
    for t in range(1, g.tau + 1):
        edges = sorted(g.layers[t - 1])
        out.append(f"l {t} {len(edges)}")
        for u, v in edges:
            out.append(f"e {u} {v}")
    return "\n".join(out) + "\n"


def serialize_solution(verdict: bool, s: ColoringSequence | None = None) -> str:
    if not verdict:
        return "s no\n"
    assert s is not None
    out = ["s yes"]
    for t in range(1, s.tau + 1):
        out.append(f"c {t} {''.join(str(c) for c in s.colors[t - 1])}")
    return "\n".join(out) + "\n"


def parse_solution(text: str):
    """Returns (verdict, ColoringSequence or None)."""
    lines, _ = _content_lines(text)
    if not lines:
        raise InstanceParseError(1, "empty solution")
    lineno, sline = lines[0]
    if sline == "s no":
        return False, None
    if sline != "s yes":
        raise InstanceParseError(lineno, f'expected "s yes" or "s no", got {sline!r}')
    rows = []
    for t, (lineno, cline) in enumerate(lines[1:], start=1):
        parts = cline.split()
        if len(parts) != 3 or parts[0] != "c" or int(parts[1]) != t:
            raise InstanceParseError(lineno, f'expected "c {t} <colors>", got {cline!r}')
        try:
            rows.append(tuple(int(ch) for ch in parts[2]))
        except ValueError:
            raise InstanceParseError(lineno, "colors must be digits 1/2") from None
    return True, ColoringSequence(tuple(rows))


def emit_ms2sat(g: TemporalGraph, d: int) -> str:
    """Multistage 2-CNF: one variable per vertex, two clauses per time-edge."""
    out = [f"p ms2sat {g.n} {g.tau} {d}"]
    for t in range(1, g.tau + 1):
        edges = sorted(g.layers[t - 1])
        out.append(f"l {t} {2 * len(edges)}")
        for u, v in edges:
            out.append(f"{u} {v} 0")
            out.append(f"-{u} -{v} 0")
    return "\n".join(out) + "\n"


def parse_ms2sat(text: str):
    """Returns (num_vars, stages, d); stages are lists of literal pairs."""
    lines, _ = _content_lines(text)
    if not lines:
        raise InstanceParseError(1, "empty formula")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 5 or parts[0] != "p" or parts[1] != "ms2sat":
        raise InstanceParseError(lineno, f'expected "p ms2sat <n> <tau> <d>", got {header!r}')
    raise_line = lineno
    try:
        num_vars, tau, d = int(parts[2]), int(parts[3]), int(parts[4])
    except (ValueError, IndexError):
        raise InstanceParseError(raise_line, "header counts must be integers") from None
    stages: list[list[tuple[int, int]]] = []
    pos = 1
    for t in range(1, tau + 1):
        if pos >= len(lines):
            raise InstanceParseError(lines[-1][0], f"expected stage {t} of {tau}")
        lineno, lline = lines[pos]
        pos += 1
        parts = lline.split()
        if len(parts) != 3 or parts[0] != "l" or int(parts[1]) != t:
            raise InstanceParseError(lineno, f'expected "l {t} <clause count>", got {lline!r}')
        count = int(parts[2])
        clauses = []
        for _ in range(count):
            lineno, cline = lines[pos]
            pos += 1
            lits = [int(x) for x in cline.split()]
            if len(lits) != 3 or lits[-1] != 0:
                raise InstanceParseError(lineno, "clause lines must be two literals and a 0")
            clauses.append((lits[0], lits[1]))
        stages.append(clauses)
    return num_vars, stages, d


def parse_static_graph(text: str):
    """Static graph input for generators: "p sg <n> <m>", "e u v" lines, and
    optional "class <i> <v...>" lines for color classes."""
    lines, _ = _content_lines(text)
    if not lines:
        raise InstanceParseError(1, "empty graph")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 4 or parts[0] != "p" or parts[1] != "sg":
        raise InstanceParseError(lineno, f'expected "p sg <n> <m>", got {header!r}')
    n, m = int(parts[2]), int(parts[3])
    edges = []
    classes: dict[int, list[int]] = {}
    for lineno, line in lines[1:]:
        parts = line.split()
        if parts[0] == "e":
            u, v = int(parts[1]), int(parts[2])
            if not (1 <= u < v <= n):
                raise InstanceParseError(lineno, f"edge ({u},{v}) violates 1 <= u < v <= {n}")
            edges.append((u, v))
        elif parts[0] == "class":
            classes[int(parts[1])] = [int(x) for x in parts[2:]]
        else:
            raise InstanceParseError(lineno, f"unexpected line {line!r}")
    if len(edges) != m:
        raise InstanceParseError(lines[0][0], f"header declares {m} edges, found {len(edges)}")
    graph = StaticGraph(n, frozenset(edges))
    class_list = [classes[i] for i in sorted(classes)] if classes else None
    return graph, class_list


def parse_cnf3(text: str):
    """3-CNF input: "p cnf <n> <m>" then m lines of three literals and a 0."""
    lines, _ = _content_lines(text)
    if not lines:
        raise InstanceParseError(1, "empty formula")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
        raise InstanceParseError(lineno, f'expected "p cnf <n> <m>", got {header!r}')
    n, m = int(parts[2]), int(parts[3])
    clauses = []
    for lineno, line in lines[1:]:
        lits = [int(x) for x in line.split()]
        if len(lits) != 4 or lits[-1] != 0:
            raise InstanceParseError(lineno, "clauses must be three literals and a 0")
        if any(abs(l) > n or l == 0 for l in lits[:3]):
            raise InstanceParseError(lineno, "literal out of range")
        clauses.append(tuple(lits[:3]))
    if len(clauses) != m:
        raise InstanceParseError(lines[0][0], f"header declares {m} clauses, found {len(clauses)}")
    return clauses, n
