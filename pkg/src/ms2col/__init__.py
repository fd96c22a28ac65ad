"""Exact solvers, generators, and verification tools for multistage 2-coloring."""

from .core import (
    Budget,
    CapExceededError,
    ColoringSequence,
    PartialColoringSequence,
    PreconditionError,
    SolveOutcome,
    StaticGraph,
    TemporalGraph,
    delta,
    enumerate_proper_colorings,
    is_proper_coloring,
    layer_bipartite_check,
    underlying_graph,
    verify_solution,
)
from .exact import (
    SolverCaps,
    solve_auto,
    solve_bruteforce_local,
    solve_d_zero,
    solve_greedy_large_d,
    solve_layered_dag,
)
from .extension import (
    ForcedRecoloring,
    Job,
    JobSet,
    apply_reduction_rule_colored_edge,
    edd_feasible,
    extract_forced_recolorings,
    solve_component_orientation,
    solve_ms2ce_edgeless,
)
from .cocluster import dcc_modulator, is_cocluster, solve_dcc_sum
from .treewidth import build_nice_tree_decomposition, parse_pace_td, solve_treewidth_dp
from .globalbudget import (
    TwoCnf,
    reduce_to_almost_2sat,
    solve_almost_2sat,
    solve_bruteforce_global,
    solve_global,
    wcnf_text,
)
from .generators import (
    GeneratedInstance,
    and_compose,
    gen_clique,
    gen_edge_bipartization,
    gen_few_edges,
    gen_multicolored_clique,
    gen_random,
    gen_x13sat,
)
from .params import lift

__all__ = [name for name in dir() if not name.startswith("_")]
