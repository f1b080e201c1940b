"""carlevel: exact level-set bounds for dyadic Carleson selections.

Builds and validates binary Carleson sequences over the dyadic grid,
evaluates the closed-form optimal bound for the size of height-function
level sets, certifies its structural inequalities on exhaustive exact
grids, and probes sharpness with an exact dynamic program over truncated
trees.  Everything is integer or rational arithmetic; nothing is floating
point.
"""

from .candidate import (
    BellmanPoint,
    CandidateParams,
    candidate_c1,
    candidate_c2,
    candidate_c32,
    candidate_eval,
    candidate_fn,
    candidate_surface,
)
from .construct import binary_expansion, construct_admissible, construct_fractional
from .dyadic import (
    ROOT,
    DyadicRational,
    NodeAddress,
    Rational,
    children,
    compare,
    gr_compare,
    is_ancestor,
    parse_rational,
    relative_measure,
    to_fraction,
)
from .errors import AdmissibilityError, PrecisionError, ResourceLimitError
from .extremal import (
    ConvergenceRow,
    DPCell,
    DPKey,
    DPTable,
    LevelSetDP,
    convergence_report,
    dp_max_levelset,
    dp_table,
    reconstruct_witness,
)
from .sequences import (
    CarlesonSeq,
    ValidationReport,
    alpha_children,
    carleson_average,
    carleson_constant,
    generation_measure,
    height_at,
    level_set_measure,
    random_carleson,
    sparse_generations,
    truncate,
)
from .supersolution import (
    CheckGrid,
    CheckSummary,
    InductionTrace,
    Violation,
    check_jump,
    check_main_inequality,
    check_midpoint_concavity,
    check_obstacle,
    induction_trace,
    obstacle_indicator,
    run_all_checks,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "BellmanPoint",
    "CandidateParams",
    "CarlesonSeq",
    "CheckGrid",
    "CheckSummary",
    "ConvergenceRow",
    "DPCell",
    "DPKey",
    "DPTable",
    "DyadicRational",
    "InductionTrace",
    "LevelSetDP",
    "NodeAddress",
    "PrecisionError",
    "ROOT",
    "Rational",
    "ResourceLimitError",
    "ValidationReport",
    "Violation",
    "alpha_children",
    "binary_expansion",
    "candidate_c1",
    "candidate_c2",
    "candidate_c32",
    "candidate_eval",
    "candidate_fn",
    "candidate_surface",
    "carleson_average",
    "carleson_constant",
    "check_jump",
    "check_main_inequality",
    "check_midpoint_concavity",
    "check_obstacle",
    "children",
    "compare",
    "construct_admissible",
    "construct_fractional",
    "convergence_report",
    "dp_max_levelset",
    "dp_table",
    "generation_measure",
    "gr_compare",
    "height_at",
    "induction_trace",
    "is_ancestor",
    "level_set_measure",
    "obstacle_indicator",
    "parse_rational",
    "random_carleson",
    "reconstruct_witness",
    "relative_measure",
    "sparse_generations",
    "to_fraction",
    "truncate",
]
