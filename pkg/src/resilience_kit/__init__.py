"""Resilience analysis of linear systems to partial loss of control authority.

A linear system x' = Ax + B_bar u_bar keeps full authority over some
actuators (B u) while others produce arbitrary bounded inputs (C w). The
toolkit builds the control-deficit set Z = BU (-) (-CW), renders
resilient-stabilizability and resilience verdicts, computes inner
approximations of reachable sets of the reduced dynamics x' = Ax + z, and
bounds nominal/malfunctioning reach times and the worst-case slowdown ratio
via Lyapunov pairs.
"""

from .errors import (
    CapacityError,
    DimensionError,
    NumericalError,
    PreconditionError,
    RankError,
    ResilienceKitError,
)
from .linalg import (
    Spectrum,
    controllability_matrix,
    controllability_rank,
    eigen_spectrum,
    is_hurwitz,
    matrix_exponential,
    p_norm,
    solve_lyapunov,
)
from .zonotope import (
    EMPTY_SET,
    HPolytope,
    Zonotope,
    affine_dimension,
    box_zonotope,
    contains_point,
    contains_zonotope,
    facets,
    hpolytope_vertices,
    inner_minkowski_difference,
    linear_map,
    minkowski_sum,
    polygon2d,
    project,
    separating_direction,
    singleton,
    slice_extent,
    support,
    vertices,
)
from .resilience import (
    ControlSplit,
    LinearSystem,
    ResilienceVerdict,
    ZSet,
    check_nominal,
    check_resilience,
    check_resilient_stabilizability,
    compute_z_set,
    eigenvector_condition,
    split_system,
)
from .reachability import (
    UNREACHED,
    ReachTube,
    extent,
    malfunction_time_oracle,
    min_time_upper_bound,
    nominal_time_oracle,
    reach_tube,
    step_input_zonotope,
)
from .quantitative import (
    BoundsReport,
    LyapunovPair,
    b_max,
    b_min,
    best_bounds,
    ellipsoid_fit_P,
    from_pair_P,
    interpolated_pairs,
    make_pair,
    quantitative_report,
    reach_time_bounds,
    rq_bounds,
    sample_pairs,
    z_max,
    z_min,
)
from .scenarios import Scenario, list_scenarios, load_scenario, register_scenario

__version__ = "1.0.0"

__all__ = [
    "BoundsReport", "CapacityError", "ControlSplit", "DimensionError",
    "EMPTY_SET", "HPolytope", "LinearSystem", "LyapunovPair", "NumericalError",
    "PreconditionError", "RankError", "ReachTube", "ResilienceKitError",
    "ResilienceVerdict", "Scenario", "Spectrum", "UNREACHED", "ZSet",
    "Zonotope", "affine_dimension", "b_max", "b_min", "best_bounds",
    "box_zonotope", "check_nominal", "check_resilience",
    "check_resilient_stabilizability", "compute_z_set", "contains_point",
    "contains_zonotope", "controllability_matrix", "controllability_rank",
    "eigen_spectrum", "eigenvector_condition", "ellipsoid_fit_P", "extent",
    "facets", "from_pair_P", "hpolytope_vertices", "inner_minkowski_difference",
    "interpolated_pairs", "is_hurwitz", "linear_map", "list_scenarios",
    "load_scenario", "make_pair", "malfunction_time_oracle",
    "matrix_exponential", "min_time_upper_bound", "minkowski_sum",
    "nominal_time_oracle", "p_norm", "polygon2d", "project",
    "quantitative_report", "reach_time_bounds", "reach_tube",
    "register_scenario", "rq_bounds", "sample_pairs", "separating_direction",
    "singleton", "slice_extent", "solve_lyapunov", "split_system",
    "step_input_zonotope", "support", "vertices", "z_max", "z_min",
]
