from .curves import curve, read_csv, to_csv, witnesses_json
from .estimators import (
    DEFAULT_ANGLES,
    delta_convexity,
    delta_uacs,
    delta_uacs_tilde,
    delta_uacsed,
    estimate,
    nonsquareness,
    rho_smoothness,
    rho_uacs,
    rho_uacs_ball,
)
from .oracle import grid_oracle_2d

__all__ = [
    "DEFAULT_ANGLES",
    "curve",
    "delta_convexity",
    "delta_uacs",
    "delta_uacs_tilde",
    "delta_uacsed",
    "estimate",
    "grid_oracle_2d",
    "nonsquareness",
    "read_csv",
    "rho_smoothness",
    "rho_uacs",
    "rho_uacs_ball",
    "to_csv",
    "witnesses_json",
]
