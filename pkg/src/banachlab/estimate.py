"""Enclosure records shared by every estimator."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

KINDS = (
    "delta_X",
    "rho_X",
    "delta_uacs",
    "delta_uacs_tilde",
    "rho_uacs",
    "rho_uacs_ball",
    "delta_uacsed",
    "nonsquareness",
    "dual_norm",
)

INF_KINDS = {"delta_X", "delta_uacs", "delta_uacs_tilde", "delta_uacsed"}


def _clean(v):
    if v is None:
        return None
    if isinstance(v, (np.ndarray, list, tuple)):
        return [float(c) for c in np.asarray(v, dtype=float).ravel()]
    return float(v)


@dataclass(frozen=True)
class Witness:
    x: np.ndarray
    y: Optional[np.ndarray] = None
    f: Optional[np.ndarray] = None

    def to_dict(self):
        return {"x": _clean(self.x), "y": _clean(self.y), "f": _clean(self.f)}


@dataclass(frozen=True)
class ModulusEstimate:
    kind: str
    argument: Optional[float]
    lo: float
    hi: float
    witness: Optional[Witness] = None
    certified: bool = False
    resolution: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown modulus kind {self.kind!r}")
        lo, hi = float(self.lo), float(self.hi)
        if lo > hi:
            # rounding in the slack terms can cross by an ulp or two
            if lo - hi > 1e-12 * max(1.0, abs(hi)):
                raise ValueError(f"empty enclosure [{lo}, {hi}] for {self.kind}")
            lo = hi
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= value <= self.hi + tol

    def to_dict(self):
        return {
            "kind": self.kind,
            "argument": None if self.argument is None else float(self.argument),
            "lo": float(self.lo),
            "hi": float(self.hi),
            "certified": bool(self.certified),
            "witness": None if self.witness is None else self.witness.to_dict(),
            "resolution": dict(self.resolution),
            "notes": {k: (_clean(v) if isinstance(v, (float, np.floating, np.ndarray)) else v) for k, v in self.notes.items()},
        }


@dataclass(frozen=True)
class ModulusCurve:
    kind: str
    arguments: tuple
    estimates: tuple

    def rows(self):
        for e in self.estimates:
            yield (e.kind, e.argument, e.lo, e.hi, e.certified)

    def monotone_violations(self, tol: float = 1e-9):
        """Adjacent pairs where a nondecreasing curve provably decreases."""
        bad = []
        for a, b in zip(self.estimates, self.estimates[1:]):
            if b.hi < a.lo - tol:
                bad.append((a.argument, b.argument))
        return bad
