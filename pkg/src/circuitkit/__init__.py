"""Exact circuit-imbalance analysis for rational subspaces."""

from .augment import (
    AugmentationTrace,
    audit_trace,
    epsilon_of,
    flow_to_lp,
    guided_walk,
    max_flow_encoding,
    run,
    steepest_direction,
)
from .errors import AuditFailure, CircuitKitError
from .generate import GeneratorSpec, generate
from .graver import (
    appendix_counterexample,
    conjecture_decompose,
    ej_check,
    graver_basis,
    hk_check,
    ip_proximity_check,
)
from .imbalance import (
    ImbalanceReport,
    chibar,
    diameter_bound,
    imbalances,
    is_TU,
    kappa_star,
    pairwise,
    rescale,
)
from .lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LPInstance,
    LPResult,
    edge_graph_diameter,
    fractionality,
    solve,
    vertices,
)
from .proximity import (
    feasibility_simplified,
    fixing_sets_bounds,
    hoffman_feasibility_witness,
    hoffman_opt_witness,
    transfer_bound,
)
from .ratmat import RatMatrix
from .subspace import Subspace, circuits, conformal_decompose, dual, lift_min_norm, minor

__all__ = [
    "AuditFailure",
    "AugmentationTrace",
    "CircuitKitError",
    "GeneratorSpec",
    "ImbalanceReport",
    "INFEASIBLE",
    "LPInstance",
    "LPResult",
    "OPTIMAL",
    "RatMatrix",
    "Subspace",
    "UNBOUNDED",
    "appendix_counterexample",
    "audit_trace",
    "chibar",
    "circuits",
    "conformal_decompose",
    "conjecture_decompose",
    "diameter_bound",
    "dual",
    "edge_graph_diameter",
    "ej_check",
    "epsilon_of",
    "feasibility_simplified",
    "fixing_sets_bounds",
    "flow_to_lp",
    "fractionality",
    "generate",
    "graver_basis",
    "guided_walk",
    "hk_check",
    "hoffman_feasibility_witness",
    "hoffman_opt_witness",
    "imbalances",
    "ip_proximity_check",
    "is_TU",
    "kappa_star",
    "lift_min_norm",
    "max_flow_encoding",
    "minor",
    "pairwise",
    "rescale",
    "run",
    "solve",
    "steepest_direction",
    "transfer_bound",
    "vertices",
]
