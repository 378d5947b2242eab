"""Numerical geometry of finite-dimensional real normed spaces."""

__version__ = "0.1.0"

from .catalog import build_absolute, build_arc2d, build_lp, parse_catalog
from .classify import classify
from .estimate import ModulusCurve, ModulusEstimate, Witness
from .moduli import (
    delta_convexity,
    delta_uacs,
    delta_uacs_tilde,
    delta_uacsed,
    estimate,
    grid_oracle_2d,
    nonsquareness,
    rho_smoothness,
    rho_uacs,
    rho_uacs_ball,
)
from .normcore import (
    DimensionError,
    DomainError,
    Functional,
    NormedSpace,
    dual_norm,
    dual_space,
    norming_functional,
    quotient_space,
    smoothness_gap,
    subdifferential,
)
from .sums import build_sum, e_prime, parse_sum, u_plus_violation

__all__ = [
    "DimensionError",
    "DomainError",
    "Functional",
    "ModulusCurve",
    "ModulusEstimate",
    "NormedSpace",
    "Witness",
    "build_absolute",
    "build_arc2d",
    "build_lp",
    "build_sum",
    "classify",
    "delta_convexity",
    "delta_uacs",
    "delta_uacs_tilde",
    "delta_uacsed",
    "dual_norm",
    "dual_space",
    "e_prime",
    "estimate",
    "grid_oracle_2d",
    "nonsquareness",
    "norming_functional",
    "parse_catalog",
    "parse_sum",
    "quotient_space",
    "rho_smoothness",
    "rho_uacs",
    "rho_uacs_ball",
    "smoothness_gap",
    "subdifferential",
    "u_plus_violation",
]
