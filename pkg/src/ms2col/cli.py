"""Command-line interface.

Exit codes: 0 for yes/ok, 1 for no (or failed verification), 2 for usage or
parse errors, 3 when a resource cap is exceeded.  Diagnostics go to stderr;
machine-readable output (solutions, reductions, CSV) goes to stdout or the
requested file.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import bench as bench_mod
from . import cocluster, exact, extension, generators, globalbudget, params as params_mod, treewidth
from .core import Budget, CapExceededError, PreconditionError, verify_solution
from .exact import SolverCaps
from .formats import (
    InstanceFile,
    InstanceParseError,
    emit_ms2sat,
    parse_cnf3,
    parse_instance,
    parse_ms2sat,
    parse_solution,
    parse_static_graph,
    serialize_instance,
    serialize_solution,
)

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_CAPS = 3


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write_out(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _caps(args) -> SolverCaps:
    caps = SolverCaps.from_env()
    if getattr(args, "cap_states", None):
        states = args.cap_states
        caps = replace(
            caps,
            bruteforce_state_bits=max(states.bit_length() - 1, 1),
            dag_nodes=states,
            dag_arc_estimate=states,
            orientation_nodes=states,
            treewidth_table=states,
        )
    return caps


def _local_budget(args, inst: InstanceFile) -> int | None:
    if args.d is not None:
        return args.d
    if inst.budget is not None and inst.budget.kind == "local":
        return inst.budget.value
    return None


def _global_budget(args, inst: InstanceFile) -> int | None:
    if args.big_d is not None:
        return args.big_d
    if inst.budget is not None and inst.budget.kind == "global":
        return inst.budget.value
    return None


def _cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance))
    d = _local_budget(args, inst)
    if d is None:
        print("error: no local budget given (use --d or a 'b local' line)", file=sys.stderr)
        return EXIT_USAGE
    caps = _caps(args)
    g = inst.graph
    solvers = {
        "auto": lambda: exact.solve_auto(g, d, caps, paper_due_dates=args.paper_due_dates),
        "bruteforce": lambda: exact.solve_bruteforce_local(g, d, caps),
        "layered": lambda: exact.solve_layered_dag(g, d, caps),
        "orientation": lambda: extension.solve_component_orientation(
            g, d, caps, paper_due_dates=args.paper_due_dates
        ),
        "dcc": lambda: cocluster.solve_dcc_sum(g, d, caps, paper_due_dates=args.paper_due_dates),
        "treewidth": lambda: treewidth.solve_treewidth_dp(g, d, caps),
        "greedy": lambda: exact.solve_greedy_large_d(g, d),
        "dzero": lambda: exact.solve_d_zero(g),
    }
    outcome = solvers[args.algo]()
    if args.stats:
        pairs = ", ".join(f"{k}={v}" for k, v in sorted(outcome.stats.items()))
        print(f"algo={outcome.algo} {pairs}", file=sys.stderr)
    text = serialize_solution(outcome.verdict, outcome.witness)
    sys.stdout.write(text)
    if args.witness and outcome.witness is not None:
        Path(args.witness).write_text(text)
    if outcome.verdict and outcome.witness is not None:
        check = verify_solution(g, outcome.witness, Budget("local", d))
        if not check:
            print(f"internal error: witness rejected: {check.reason}", file=sys.stderr)
            return EXIT_USAGE
    return EXIT_YES if outcome.verdict else EXIT_NO


def _cmd_solve_global(args) -> int:
    inst = parse_instance(_read(args.instance))
    big_d = _global_budget(args, inst)
    if big_d is None:
        print("error: no global budget given (use --D or a 'b global' line)", file=sys.stderr)
        return EXIT_USAGE
    caps = _caps(args)
    g = inst.graph
    if args.algo == "bruteforce":
        outcome = globalbudget.solve_bruteforce_global(g, big_d, caps)
    else:
        outcome = globalbudget.solve_global(g, big_d, caps)
    if args.stats:
        pairs = ", ".join(f"{k}={v}" for k, v in sorted(outcome.stats.items()))
        print(f"algo={outcome.algo} {pairs}", file=sys.stderr)
    sys.stdout.write(serialize_solution(outcome.verdict, outcome.witness))
    if args.witness and outcome.witness is not None:
        Path(args.witness).write_text(serialize_solution(True, outcome.witness))
    return EXIT_YES if outcome.verdict else EXIT_NO


def _cmd_verify(args) -> int:
    inst = parse_instance(_read(args.instance))
    verdict, coloring = parse_solution(_read(args.solution))
    if not verdict or coloring is None:
        print("error: solution file carries no witness to verify", file=sys.stderr)
        return EXIT_USAGE
    if args.d is not None:
        budget = Budget("local", args.d)
    elif args.big_d is not None:
        budget = Budget("global", args.big_d)
    elif inst.budget is not None:
        budget = inst.budget
    else:
        print("error: no budget given", file=sys.stderr)
        return EXIT_USAGE
    result = verify_solution(inst.graph, coloring, budget)
    if result.ok:
        print("valid", file=sys.stderr)
        return EXIT_YES
    print(f"invalid: {result.reason}", file=sys.stderr)
    return EXIT_NO


def _cmd_reduce(args) -> int:
    text = _read(args.instance)
    head = text.lstrip().splitlines()[0].split() if text.strip() else []
    if args.to == "ms2sat":
        inst = parse_instance(text)
        d = _local_budget(args, inst)
        if d is None:
            print("error: ms2sat emission needs a local budget", file=sys.stderr)
            return EXIT_USAGE
        _write_out(emit_ms2sat(inst.graph, d), args.out)
        return EXIT_YES
    # a2sat: accept either an instance or a generic multistage 2-CNF
    if len(head) >= 2 and head[1] == "ms2sat":
        num_vars, stages, d_embedded = parse_ms2sat(text)
        big_d = args.big_d if args.big_d is not None else d_embedded
        cnf, k = globalbudget.reduce_ms2sat_to_almost_2sat(num_vars, stages, big_d)
    else:
        inst = parse_instance(text)
        big_d = _global_budget(args, inst)
        if big_d is None:
            print("error: a2sat reduction needs a global budget", file=sys.stderr)
            return EXIT_USAGE
        cnf, k = globalbudget.reduce_to_almost_2sat(inst.graph, big_d)
    _write_out(globalbudget.wcnf_text(cnf, k), args.out)
    return EXIT_YES


def _cmd_gen(args) -> int:
    if args.generator == "x13sat":
        clauses, n = parse_cnf3(_read(args.formula))
        gen = generators.gen_x13sat(clauses, n)
    elif args.generator == "edgebip":
        graph, _ = parse_static_graph(_read(args.graph))
        gen = generators.gen_edge_bipartization(graph, args.k)
    elif args.generator == "clique":
        graph, _ = parse_static_graph(_read(args.graph))
        gen = generators.gen_clique(graph, args.k)
    elif args.generator == "mcclique":
        graph, classes = parse_static_graph(_read(args.graph))
        if classes is None:
            print("error: mcclique input needs 'class' lines", file=sys.stderr)
            return EXIT_USAGE
        gen = generators.gen_multicolored_clique(graph, classes)
    elif args.generator == "fewedges":
        inst = parse_instance(_read(args.instance))
        gen = generators.gen_few_edges(inst.graph)
    elif args.generator == "random":
        g = generators.gen_random(args.n, args.tau, args.edge_prob, args.persistence, args.seed)
        gen = generators.GeneratedInstance(g, args.d if args.d is not None else 1)
    elif args.generator == "andcompose":
        graphs = [parse_instance(_read(p)).graph for p in args.instances]
        g = generators.and_compose(graphs)
        gen = generators.GeneratedInstance(g, 1)
    else:  # pragma: no cover
        raise AssertionError(args.generator)
    inst = InstanceFile(gen.graph, Budget("local", gen.d))
    _write_out(serialize_instance(inst), args.out)
    if args.labels:
        Path(args.labels).write_text(json.dumps({str(k): v for k, v in sorted(gen.labels.items())}, indent=0) + "\n")
    return EXIT_YES


def _cmd_params(args) -> int:
    inst = parse_instance(_read(args.instance))
    names = sorted(params_mod.PARAMETERS) if args.param == "all" else [args.param]
    reports = [params_mod.lift(name, inst.graph) for name in names]
    sys.stdout.write(params_mod.format_report_table(reports) + "\n")
    for r in reports:
        for line in r.as_kv_lines():
            sys.stdout.write(line + "\n")
    return EXIT_YES


def _cmd_bench(args) -> int:
    caps = _caps(args)
    algos = args.algos.split(",") if args.algos else None
    rows = bench_mod.run_suite(args.suite, algos, args.timeout_ms, caps)
    csv_text = bench_mod.rows_to_csv(rows)
    _write_out(csv_text, args.out)
    plot_dir = None
    if args.plot_dir:
        plot_dir = Path(args.plot_dir)
    elif args.out and args.out != "-" and not args.no_plot:
        plot_dir = Path(args.out).parent
    if plot_dir is not None:
        created = bench_mod.render_figures(rows, plot_dir)
        for p in created:
            print(f"wrote {p}", file=sys.stderr)
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ms2col", description=__doc__)
    parser.add_argument("--threads", type=int, default=1, help="worker threads (default 1, deterministic)")
    parser.add_argument("--cap-states", type=int, default=None, help="override solver state caps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide a local-budget instance")
    p.add_argument("instance")
    p.add_argument("--algo", default="auto", choices=["auto", "bruteforce", "layered", "orientation", "dcc", "treewidth", "greedy", "dzero"])
    p.add_argument("--d", type=int, default=None, help="local budget, overrides the file")
    p.add_argument("--witness", default=None, help="also write the solution to this path")
    p.add_argument("--stats", action="store_true", help="print solver statistics to stderr")
    p.add_argument("--paper-due-dates", action="store_true", help="use the looser scheduling due dates for comparison")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("solve-global", help="decide a global-budget instance")
    p.add_argument("instance")
    p.add_argument("--algo", default="auto", choices=["auto", "bruteforce", "a2sat"])
    p.add_argument("--D", dest="big_d", type=int, default=None, help="global budget, overrides the file")
    p.add_argument("--witness", default=None)
    p.add_argument("--stats", action="store_true")
    p.set_defaults(fn=_cmd_solve_global)

    p = sub.add_parser("verify", help="check a solution file against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--D", dest="big_d", type=int, default=None)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("reduce", help="emit a SAT-shaped reduction")
    p.add_argument("instance")
    p.add_argument("--to", required=True, choices=["ms2sat", "a2sat"])
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--D", dest="big_d", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("gen", help="generate instances")
    gsub = p.add_subparsers(dest="generator", required=True)
    g = gsub.add_parser("x13sat")
    g.add_argument("--formula", required=True)
    g = gsub.add_parser("edgebip")
    g.add_argument("--graph", required=True)
    g.add_argument("--k", type=int, required=True)
    g = gsub.add_parser("clique")
    g.add_argument("--graph", required=True)
    g.add_argument("--k", type=int, required=True)
    g = gsub.add_parser("mcclique")
    g.add_argument("--graph", required=True)
    g = gsub.add_parser("fewedges")
    g.add_argument("--instance", required=True)
    g = gsub.add_parser("random")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--tau", type=int, required=True)
    g.add_argument("--edge-prob", type=float, default=0.3)
    g.add_argument("--persistence", type=float, default=0.5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--d", type=int, default=None)
    g = gsub.add_parser("andcompose")
    g.add_argument("instances", nargs="+")
    for sp in gsub.choices.values():
        sp.add_argument("--out", default=None)
        sp.add_argument("--labels", default=None, help="write an id-to-gadget-name sidecar")
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("params", help="structural parameters and their lifts")
    p.add_argument("instance")
    p.add_argument("--param", default="all")
    p.set_defaults(fn=_cmd_params)

    p = sub.add_parser("bench", help="benchmark suites with CSV output")
    p.add_argument("--suite", default="quick")
    p.add_argument("--timeout-ms", type=int, default=None)
    p.add_argument("--algos", default=None, help="comma-separated algorithm list")
    p.add_argument("--out", default=None)
    p.add_argument("--plot-dir", default=None, help="directory for runtime figures")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(fn=_cmd_bench)
    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except InstanceParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceededError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPS
    except PreconditionError as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
