"""Fixed points, stability and dynamics of a quasi-strictly non-Volterra
quadratic stochastic operator on the 2-simplex."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    OperatorClass,
    QsoTensor,
    SimplexPoint,
    apply_tensor,
    classify_operator,
    load_tensor,
    validate_tensor,
)
from .errors import QsoError  # noqa: E402
from .family import FamilyParams, apply, make_params, phi, to_tensor  # noqa: E402
from .fixed_point import FixedPointReport, SolverCase, find_fixed_points  # noqa: E402
from .stability import StabilityClass, StabilityReport, classify  # noqa: E402
from .dynamics import (  # noqa: E402
    ConjugacyData,
    OrbitReport,
    TwoCycle,
    Verdict,
    logistic_conjugacy,
    omega_limit,
    phi2_fixed_points,
    predict_e1_limit,
    theta_of,
    trajectory,
    two_cycle_points,
)

__all__ = [
    "ConjugacyData",
    "FamilyParams",
    "FixedPointReport",
    "OperatorClass",
    "OrbitReport",
    "QsoError",
    "QsoTensor",
    "SimplexPoint",
    "SolverCase",
    "StabilityClass",
    "StabilityReport",
    "TwoCycle",
    "Verdict",
    "apply",
    "apply_tensor",
    "classify",
    "classify_operator",
    "find_fixed_points",
    "load_tensor",
    "logistic_conjugacy",
    "make_params",
    "omega_limit",
    "phi",
    "phi2_fixed_points",
    "predict_e1_limit",
    "theta_of",
    "to_tensor",
    "trajectory",
    "two_cycle_points",
    "validate_tensor",
]
