"""Directional multivariate dependence measures on checkerboard copulas.

Estimate how strongly one variable (or group of variables) depends on
another group: 0 means independence, 1 means the target is a function of
the conditioning block.  Everything is rank-based and grid-based, so the
measures are invariant under strictly monotone reparameterizations of the
data and shrink to exact finite sums on the grid.
"""

from .errors import (
    CopdepError,
    CopulaValidationError,
    DegenerateBoundError,
    DegenerateMarginalError,
    EvaluationError,
    IncompatibleOperandsError,
    InsufficientDataError,
    InvalidArgumentError,
    InvalidDataError,
    RebalanceError,
)
from .estimation import (
    PseudoObservations,
    ResolutionPolicy,
    choose_resolution,
    fit_checkerboard,
    pseudo_observations,
    read_csv,
    rebalance_marginals,
)
from .generators import (
    SynthModel,
    assignment_copula,
    generate,
    make_rng,
    mixture_copula,
    random_copula,
    random_star_pair,
)
from .grid import (
    CheckerboardCopula,
    GridBox,
    GroupSplit,
    ValidationReport,
    comonotone_copula,
    copula_from_dict,
    copula_to_dict,
    frechet_lower,
    frechet_upper,
    independence_copula,
    load_copula,
    require_valid,
    save_copula,
)
from .measures import (
    KendallCdf,
    MeasureKind,
    MeasureReport,
    averaged_dependence,
    compute_measure,
    conditional_cdf,
    generic_measure,
    group_tau,
    group_tau_normalized,
    kendall_cdf,
    max_bound,
    mutual_information,
    renyi_alpha,
    renyi_limit,
    tau_alpha,
    tau_quadratic,
)
from .starprod import (
    DpiReport,
    InvarianceReport,
    StarCompatibility,
    TransformCase,
    compatibility_check,
    dpi_report,
    equitability_suite,
    identity_coupling,
    star,
)

__version__ = "0.1.0"

__all__ = [
    "CheckerboardCopula",
    "CopdepError",
    "CopulaValidationError",
    "DegenerateBoundError",
    "DegenerateMarginalError",
    "DpiReport",
    "EvaluationError",
    "GridBox",
    "GroupSplit",
    "IncompatibleOperandsError",
    "InsufficientDataError",
    "InvalidArgumentError",
    "InvalidDataError",
    "InvarianceReport",
    "KendallCdf",
    "MeasureKind",
    "MeasureReport",
    "PseudoObservations",
    "RebalanceError",
    "ResolutionPolicy",
    "StarCompatibility",
    "SynthModel",
    "TransformCase",
    "ValidationReport",
    "assignment_copula",
    "averaged_dependence",
    "choose_resolution",
    "comonotone_copula",
    "compatibility_check",
    "compute_measure",
    "conditional_cdf",
    "copula_from_dict",
    "copula_to_dict",
    "dpi_report",
    "equitability_suite",
    "fit_checkerboard",
    "frechet_lower",
    "frechet_upper",
    "generate",
    "generic_measure",
    "group_tau",
    "group_tau_normalized",
    "identity_coupling",
    "independence_copula",
    "kendall_cdf",
    "load_copula",
    "make_rng",
    "max_bound",
    "mixture_copula",
    "mutual_information",
    "pseudo_observations",
    "random_copula",
    "random_star_pair",
    "read_csv",
    "rebalance_marginals",
    "renyi_alpha",
    "renyi_limit",
    "require_valid",
    "save_copula",
    "star",
    "tau_alpha",
    "tau_quadratic",
]
