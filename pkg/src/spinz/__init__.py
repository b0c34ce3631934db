"""Deterministic approximation of two-state spin-system partition functions.

The estimator runs a telescoping product of conditional marginals, each
computed on a truncated self-avoiding-walk tree; when the interaction is
weak relative to the degree bound, truncation error decays geometrically
with depth and the total log Z error is certified below eps.  An exact
brute-force oracle and a set of property checks back every claim at small
scale.
"""

from .core import (
    DecayConditionError,
    EdgePotential,
    Graph,
    Spin,
    SpinSystem,
    SystemScalars,
    VertexField,
    critical_inverse_temperature,
    decay_condition_holds,
    decay_function,
    external_field,
    interaction_strength,
    ising_field,
    ising_potential,
    system_scalars,
)
from .generate import (
    GenSpec,
    GraphFileError,
    attach_spin_model,
    build_family_graph,
    generate,
    ising_system,
    load_system,
    parse_system,
    save_system,
    serialize_system,
)
from .marginal import edge_factor_log, marginal_plus, tree_log_ratio
from .oracle import (
    CheckReport,
    check_contraction,
    check_decay_bound,
    check_decay_geometric,
    check_edge_factor_lipschitz,
    check_saw_identity,
    check_saw_identity_exhaustive,
    check_saw_identity_random,
    check_telescoping,
    connected_graphs,
    exact_conditional_marginal,
    exact_log_partition,
    max_boundary_gap,
)
from .partition import (
    EstimateReport,
    MarginalUnderflowError,
    VertexEstimate,
    all_plus_log_weight,
    conditional_marginal_estimate,
    fptas_log_partition,
    truncation_depth,
)
from .sawtree import Condition, SawNode, SawTree, build_saw_tree, edge_greater, format_saw_tree, frontier_count

__version__ = "0.1.0"

__all__ = [
    "Spin",
    "Graph",
    "EdgePotential",
    "VertexField",
    "SpinSystem",
    "SystemScalars",
    "DecayConditionError",
    "interaction_strength",
    "external_field",
    "critical_inverse_temperature",
    "system_scalars",
    "decay_condition_holds",
    "decay_function",
    "ising_potential",
    "ising_field",
    "Condition",
    "SawNode",
    "SawTree",
    "build_saw_tree",
    "edge_greater",
    "format_saw_tree",
    "frontier_count",
    "edge_factor_log",
    "tree_log_ratio",
    "marginal_plus",
    "MarginalUnderflowError",
    "VertexEstimate",
    "EstimateReport",
    "all_plus_log_weight",
    "truncation_depth",
    "conditional_marginal_estimate",
    "fptas_log_partition",
    "GenSpec",
    "GraphFileError",
    "build_family_graph",
    "attach_spin_model",
    "ising_system",
    "generate",
    "parse_system",
    "serialize_system",
    "load_system",
    "save_system",
    "CheckReport",
    "exact_log_partition",
    "exact_conditional_marginal",
    "max_boundary_gap",
    "check_saw_identity",
    "check_contraction",
    "check_edge_factor_lipschitz",
    "check_decay_bound",
    "check_decay_geometric",
    "check_saw_identity_exhaustive",
    "check_saw_identity_random",
    "check_telescoping",
    "connected_graphs",
    "__version__",
]
