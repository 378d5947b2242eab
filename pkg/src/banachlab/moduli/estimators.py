"""Public enclosure estimators for the convexity and smoothness moduli."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..estimate import ModulusEstimate, Witness
from ..normcore.ring import planar_ring
from ..normcore.sampling import directions
from ..normcore.space import DomainError, NormedSpace, as_vec
from . import planar
from .sections import DEFAULT_PLANES, SECTION_ANGLES, by_sections

DEFAULT_ANGLES = 1024
TILDE_MAX_ANGLES = 256
TILDE_SECTION_ANGLES = 128


def _check_space(space: NormedSpace):
    if space.dim < 2:
        raise DomainError("moduli are defined here for dimension two and up")


def _check_eps(eps):
    eps = float(eps)
    if not (0.0 < eps <= 2.0):
        raise DomainError(f"eps must lie in (0, 2], got {eps}")
    return eps


def _check_tau(tau):
    tau = float(tau)
    if not (tau > 0.0 and math.isfinite(tau)):
        raise DomainError(f"tau must be positive, got {tau}")
    return tau


def _angles(resolution, default=DEFAULT_ANGLES):
    n = int(resolution or default)
    if n < 64:
        raise DomainError("angle resolution must be at least 64")
    return -(-n // 8) * 8


def _run(space, kind, arg, fn2d, resolution, polish=True):
    """2D: ring scan plus polish.  Higher dimension: planar sections."""
    n = _angles(resolution)
    if space.dim == 2:
        est = fn2d(space, n)
        return planar.polish(space, est, n) if polish else est
    iso = bool(space.meta.get("isotropic"))
    angles = n if iso else min(n, SECTION_ANGLES)
    return by_sections(space, kind, arg, lambda sec, m: fn2d(sec, m), DEFAULT_PLANES, angles)


@lru_cache(maxsize=512)
def _cached(space, kind, arg, resolution):
    if kind == "delta_X":
        return _run(space, kind, arg, lambda s, n: planar.delta_x(s, arg, n), resolution)
    if kind == "rho_X":
        return _run(space, kind, arg, lambda s, n: planar.rho(s, arg, n, False), resolution)
    if kind == "rho_uacs":
        return _run(space, kind, arg, lambda s, n: planar.rho(s, arg, n, True), resolution)
    if kind == "nonsquareness":
        return _run(space, kind, arg, lambda s, n: planar.nonsquareness(s, n), resolution)
    if kind == "delta_uacs":
        return _run(space, kind, arg, lambda s, n: planar.delta_uacs(s, arg, n), resolution)
    if kind == "delta_uacs_tilde":
        m = min(_angles(resolution), TILDE_MAX_ANGLES if space.dim == 2 else TILDE_SECTION_ANGLES)
        return _run(space, kind, arg, lambda s, n: planar.delta_uacs_tilde(s, arg, min(n, m)), m, polish=False)
    if kind == "rho_uacs_ball":
        return _run(space, kind, arg, lambda s, n: planar.rho_uacs_ball(s, arg, n), resolution, polish=False)
    raise DomainError(f"unknown modulus kind {kind!r}")


def delta_convexity(space: NormedSpace, eps: float, resolution: int | None = None) -> ModulusEstimate:
    """delta_X(eps) = inf{1 - ||x+y||/2 : x, y in B_X, ||x-y|| >= eps}, searched on the sphere."""
    _check_space(space)
    est = _cached(space, "delta_X", _check_eps(eps), resolution)
    if "interior_min" not in est.notes and space.dim == 2:
        est = _with_interior_check(space, est)
    return est


def _with_interior_check(space, est):
    # the ball infimum is attained on the sphere; record what interior pairs give
    eps = est.argument
    P = planar_ring(space, 64).P
    P = P / space.norms(P)[:, None]
    best = math.inf
    for r in (0.5, 0.75, 0.9):
        X = r * P[:, None, :]
        for s in (1.0, 0.9):
            Y = s * P[None, :, :]
            ok = space.norms(X - Y) >= eps
            v = np.where(ok, 1.0 - 0.5 * space.norms(X + Y), np.inf)
            best = min(best, float(v.min()))
    notes = dict(est.notes)
    notes["interior_min"] = best
    notes["interior_consistent"] = bool(best >= est.lo - 1e-12)
    return ModulusEstimate(est.kind, est.argument, est.lo, est.hi, est.witness, est.certified, est.resolution, notes)


def rho_smoothness(space: NormedSpace, tau: float, resolution: int | None = None) -> ModulusEstimate:
    _check_space(space)
    return _cached(space, "rho_X", _check_tau(tau), resolution)


def delta_uacs(space: NormedSpace, eps: float, resolution: int | None = None) -> ModulusEstimate:
    _check_space(space)
    return _cached(space, "delta_uacs", _check_eps(eps), resolution)


def delta_uacs_tilde(space: NormedSpace, eps: float, resolution: int | None = None) -> ModulusEstimate:
    _check_space(space)
    return _cached(space, "delta_uacs_tilde", _check_eps(eps), resolution)


def rho_uacs(space: NormedSpace, tau: float, resolution: int | None = None) -> ModulusEstimate:
    _check_space(space)
    return _cached(space, "rho_uacs", _check_tau(tau), resolution)


def rho_uacs_ball(space: NormedSpace, tau: float, resolution: int | None = None) -> ModulusEstimate:
    _check_space(space)
    return _cached(space, "rho_uacs_ball", _check_tau(tau), resolution)


def nonsquareness(space: NormedSpace, resolution: int | None = None) -> ModulusEstimate:
    _check_space(space)
    return _cached(space, "nonsquareness", None, resolution)


# -- direction-constrained modulus ------------------------------------------------------

BISECT_ITERS = 64


def far_points(space: NormedSpace, X: np.ndarray, z: np.ndarray):
    """Both ends of the chord {x - s z} cut out by the unit ball, for each unit x in X."""
    T = 2.5 / space.norm(z)
    out = []
    for sgn in (1.0, -1.0):
        lo = np.zeros(X.shape[0])
        hi = np.full(X.shape[0], T)
        for _ in range(BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            inside = space.norms(X - (sgn * mid)[:, None] * z) <= 1.0 + 1e-13
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
        Y = X - (sgn * lo)[:, None] * z
        out.append(Y / space.norms(Y)[:, None])
    return out


def delta_uacsed(space: NormedSpace, z, eps: float, resolution: int | None = None) -> ModulusEstimate:
    """Infimum over D_X(eps) restricted to pairs with x - y in span{z}."""
    _check_space(space)
    eps = _check_eps(eps)
    z = as_vec(z, space.dim)
    nz = float(np.linalg.norm(z))
    if nz == 0.0:
        raise DomainError("direction z must be nonzero")
    zu = z / nz
    return _uacsed_cached(space, tuple(zu.tolist()), eps, resolution)


@lru_cache(maxsize=256)
def _uacsed_cached(space, zt, eps, resolution):
    z = np.array(zt)
    base = delta_uacs(space, eps, resolution)
    n = _angles(resolution)
    if space.dim == 2:
        ring = planar_ring(space, n)
        X = ring.P / space.norms(ring.P)[:, None]
        Fs = [ring.A, ring.B]
    else:
        X = np.array(directions(space.dim, 512))
        X = X / space.norms(X)[:, None]
        if space.subgrad is not None:
            G = np.array([space.subgrad(x) for x in X])
        else:
            from ..normcore.ops import numeric_gradient

            G = np.array([numeric_gradient(space, x) for x in X])
        Fs = [G]
    best = (math.inf, None)
    for Y in far_points(space, X, z):
        S = space.norms(X + Y)
        for F in Fs:
            fy = np.sum(F * Y, axis=1)
            v = np.where(fy <= 1.0 - eps + planar.WITNESS_TOL, 1.0 - 0.5 * S, np.inf)
            k = int(np.argmin(v))
            if v[k] < best[0]:
                best = (float(v[k]), (X[k], Y[k], F[k]))
    if best[1] is None:
        x = X[0]
        y = -x
        f = Fs[0][0]
        hi = 1.0
    else:
        hi = best[0]
        x, y, f = best[1]
    lo = min(base.lo, hi)
    return ModulusEstimate(
        "delta_uacsed", eps, lo, hi, Witness(x, y, np.array(f, dtype=float)), base.certified,
        dict(base.resolution), {"z": list(zt), "lo": "unrestricted delta_uacs"},
    )


def estimate(space: NormedSpace, kind: str, argument=None, resolution: int | None = None, z=None) -> ModulusEstimate:
    if kind == "delta_X":
        return delta_convexity(space, argument, resolution)
    if kind == "rho_X":
        return rho_smoothness(space, argument, resolution)
    if kind == "delta_uacs":
        return delta_uacs(space, argument, resolution)
    if kind == "delta_uacs_tilde":
        return delta_uacs_tilde(space, argument, resolution)
    if kind == "rho_uacs":
        return rho_uacs(space, argument, resolution)
    if kind == "rho_uacs_ball":
        return rho_uacs_ball(space, argument, resolution)
    if kind == "nonsquareness":
        return nonsquareness(space, resolution)
    if kind == "delta_uacsed":
        if z is None:
            raise DomainError("delta_uacsed needs a direction z")
        return delta_uacsed(space, z, argument, resolution)
    raise DomainError(f"unknown modulus kind {kind!r}")
