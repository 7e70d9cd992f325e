"""gcflow: a numerical laboratory for Gauss curvature flow of convex bodies.

Bodies in R^2 and R^3 are driven through their support functions on spectral
sphere grids; entropy-type functionals, stability gaps, and roundness
diagnostics are evaluated along the flow.
"""

from .body import (
    Ball,
    Ellipsoid,
    MinkowskiSum,
    Scaled,
    SlicedBall,
    SupportField,
    Translated,
    TrigPerturbation,
    convexity_margin,
    diameter,
    inradius_circumradius,
    normalize,
    pinching_ratio,
    sigma,
    spec_from_dict,
    spec_to_dict,
    support_from_spec,
    translate,
    volume,
)
from .errors import (
    ConvexityViolation,
    GcflowError,
    GridMismatch,
    LineSearchFailure,
    NotNormalized,
    OptimizationFailure,
    StepFailure,
)
from .flow import FlowConfig, FlowTrace, TRACE_COLUMNS, ck_proxy, roundness_study, run
from .functionals import (
    FunctionalReport,
    check_blaschke_santalo,
    check_entropy_chain,
    check_vitale,
    delta2,
    entropy,
    entropy_p,
    functional_report,
    hausdorff,
    lemma_stab_bound,
    santalo_point,
    stability_gap,
    vitale_constant,
)
from .grid import GridDescriptor, build_grid, differentiate, quadrature
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Ball",
    "ConvexityViolation",
    "Ellipsoid",
    "FlowConfig",
    "FlowTrace",
    "FunctionalReport",
    "GcflowError",
    "GridDescriptor",
    "GridMismatch",
    "LineSearchFailure",
    "MinkowskiSum",
    "NotNormalized",
    "OptimizationFailure",
    "Scaled",
    "SlicedBall",
    "StepFailure",
    "SupportField",
    "TRACE_COLUMNS",
    "Translated",
    "TrigPerturbation",
    "__version__",
    "build_grid",
    "check_blaschke_santalo",
    "check_entropy_chain",
    "check_vitale",
    "ck_proxy",
    "convexity_margin",
    "delta2",
    "diameter",
    "differentiate",
    "entropy",
    "entropy_p",
    "functional_report",
    "hausdorff",
    "inradius_circumradius",
    "lemma_stab_bound",
    "normalize",
    "pinching_ratio",
    "quadrature",
    "roundness_study",
    "run",
    "santalo_point",
    "sigma",
    "spec_from_dict",
    "spec_to_dict",
    "stability_gap",
    "support_from_spec",
    "translate",
    "vitale_constant",
    "volume",
]
