from .ops import (
    EquivConstants,
    coset_norm,
    dual_norm,
    dual_space,
    equivalence_constants,
    norm_eval,
    norming_functional,
    quotient_space,
    smoothness_gap,
    subdifferential,
)
from .ring import Ring, planar_ring
from .space import (
    TOL_EXACT,
    TOL_OPT,
    Cone2D,
    DimensionError,
    DomainError,
    Functional,
    NormedSpace,
    Subdifferential,
    as_vec,
)

__all__ = [
    "Cone2D",
    "DimensionError",
    "DomainError",
    "EquivConstants",
    "Functional",
    "NormedSpace",
    "Ring",
    "Subdifferential",
    "TOL_EXACT",
    "TOL_OPT",
    "as_vec",
    "coset_norm",
    "dual_norm",
    "dual_space",
    "equivalence_constants",
    "norm_eval",
    "norming_functional",
    "planar_ring",
    "quotient_space",
    "smoothness_gap",
    "subdifferential",
]
