"""Core value types: vectors, functionals, normed spaces, subdifferentials."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

ZERO_TOL = 1e-10
TOL_EXACT = 1e-9
TOL_OPT = 1e-6


class DimensionError(ValueError):
    pass


class DomainError(ValueError):
    pass


def as_vec(v, dim: Optional[int] = None) -> np.ndarray:
    """Validate a coordinate sequence and return it as a float64 array."""
    a = np.array(v, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise DimensionError(f"expected a non-empty 1-d coordinate sequence, got shape {a.shape}")
    if dim is not None and a.size != dim:
        raise DimensionError(f"dimension mismatch: expected {dim}, got {a.size}")
    if not np.all(np.isfinite(a)):
        raise DomainError("non-finite coordinate")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Functional:
    """A dual vector acting on R^n by the dot product."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", as_vec(self.coords))

    @property
    def dim(self) -> int:
        return self.coords.size

    def __call__(self, x) -> float:
        x = as_vec(x, self.dim)
        return float(self.coords @ x)

    def tolist(self):
        return [float(c) for c in self.coords]


@dataclass(frozen=True)
class Cone2D:
    """Normal-cone descriptor at points of a planar unit sphere.

    Every norming functional lies in {t*(s*a + (1-s)*b) : s in [0,1], t in [1, scale]}.
    When `members` is true, a and b are themselves norming functionals (so scale is 1).
    Arrays carry a leading batch axis.
    """

    a: np.ndarray
    b: np.ndarray
    scale: np.ndarray
    members: np.ndarray


@dataclass(frozen=True, eq=False)
class NormedSpace:
    """A finite-dimensional real normed space given by a vectorized evaluator.

    evaluator maps an array of shape (..., dim) to norms of shape (...).
    bounds, when given, maps the same input to a (lo, hi) pair enclosing the
    exact norm; spaces whose evaluator is exact leave it unset.
    support2d (planar spaces only) maps unit points (k, 2) to a Cone2D.
    """

    dim: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    label: str = ""
    subgrad: Optional[Callable[[np.ndarray], np.ndarray]] = None
    equiv: Optional[tuple] = None
    bounds: Optional[Callable[[np.ndarray], tuple]] = None
    support2d: Optional[Callable[[np.ndarray], Cone2D]] = None
    support_exact: bool = False
    ring_factory: Optional[Callable[[int], object]] = None
    certified_eval: bool = True
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise DimensionError("dim must be a positive integer")

    def norms(self, V) -> np.ndarray:
        V = np.asarray(V, dtype=float)
        if V.shape[-1] != self.dim:
            raise DimensionError(f"dimension mismatch: expected {self.dim}, got {V.shape[-1]}")
        return np.asarray(self.evaluator(V), dtype=float)

    def norm_bounds(self, V):
        V = np.asarray(V, dtype=float)
        if self.bounds is None:
            n = self.norms(V)
            return n, n
        lo, hi = self.bounds(V)
        return np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)

    @property
    def exact(self) -> bool:
        """True when norm_bounds is a rigorous enclosure (possibly of width zero)."""
        return self.certified_eval

    def norm(self, v) -> float:
        return float(self.norms(as_vec(v, self.dim)))

    def __call__(self, v) -> float:
        return self.norm(v)

    def relabel(self, label: str) -> "NormedSpace":
        from dataclasses import replace

        return replace(self, label=label)


@dataclass(frozen=True)
class Subdifferential:
    base: np.ndarray
    members: tuple
    exact: bool

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)
