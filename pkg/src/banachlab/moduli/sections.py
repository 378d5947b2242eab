"""Moduli in dimension three and up through planar sections.

Every modulus here depends on a pair (x, y) only through the plane they span,
and norming functionals of a plane extend to the whole space (Hahn-Banach),
so each modulus of X is the extremum of the same modulus over planar
sections.  Sampling finitely many planes makes the result heuristic unless
the norm is invariant under rotations.
"""

from __future__ import annotations

import numpy as np

from ..estimate import ModulusEstimate, Witness
from ..normcore.ops import dual_norm
from ..normcore.sampling import sobol_directions
from ..normcore.space import Cone2D, NormedSpace

DEFAULT_PLANES = 12
SECTION_ANGLES = 256


def section(space: NormedSpace, u: np.ndarray, v: np.ndarray) -> NormedSpace:
    """The restriction of the norm to span{u, v} in the coordinates (a, b) -> a u + b v."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)

    def lift(V):
        V = np.asarray(V, dtype=float)
        return V[..., 0:1] * u + V[..., 1:2] * v

    def ev(V):
        return space.norms(lift(V))

    bounds = None
    if space.bounds is not None:
        bounds = lambda V: space.norm_bounds(lift(V))  # noqa: E731
    support = None
    if space.subgrad is not None and space.meta.get("smooth"):

        def support(P):
            P = np.asarray(P, dtype=float)
            X = lift(P).reshape(-1, space.dim)
            G = np.array([np.asarray(space.subgrad(x), dtype=float) for x in X])
            F = np.stack([G @ u, G @ v], axis=-1).reshape(P.shape)
            k = P.shape[:-1]
            return Cone2D(a=F, b=F.copy(), scale=np.ones(k), members=np.ones(k, dtype=bool))

    return NormedSpace(
        dim=2,
        evaluator=ev,
        label=f"{space.label}|plane",
        bounds=bounds,
        support2d=support,
        support_exact=support is not None and space.exact,
        certified_eval=space.exact,
        meta={"parent": space, "basis": (u, v)},
    )


def planes(space: NormedSpace, count: int = DEFAULT_PLANES):
    n = space.dim
    eye = np.eye(n)
    if space.meta.get("isotropic"):
        return [(eye[0], eye[1])]
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            out.append((eye[i], eye[j]))
            if len(out) >= 28:
                break
        if len(out) >= 28:
            break
    ones = np.ones(n) / np.sqrt(n)
    w = eye[0] - ones * ones[0]
    out.append((ones, w / np.linalg.norm(w)))
    D = sobol_directions(n, 2 * count)
    for k in range(count):
        a = D[2 * k]
        b = D[2 * k + 1] - (D[2 * k + 1] @ a) * a
        nb = np.linalg.norm(b)
        if nb > 1e-8:
            out.append((a, b / nb))
    return out


def _lift_point(u, v, p):
    if p is None:
        return None
    return p[0] * u + p[1] * v


def _lift_functional(space, u, v, est, x, y):
    """A norming functional of x in the whole space, checked against the dual norm."""
    g = est.witness.f
    if g is None:
        return None, None
    cands = []
    if space.subgrad is not None:
        cands.append(("subgradient", np.asarray(space.subgrad(x), dtype=float)))
    # the lift that vanishes on the orthogonal complement of the plane
    Q = np.stack([u, v], axis=1)
    cands.append(("plane lift", Q @ np.linalg.solve(Q.T @ Q, g)))
    for name, f in cands:
        dn = dual_norm(space, f, 256)
        if dn.hi <= 1.0 + 1e-9 and float(f @ x) >= 1.0 - 1e-9:
            return f, name
    return cands[-1][1], "unverified"


def by_sections(space: NormedSpace, kind: str, arg, planar_fn, count: int = DEFAULT_PLANES,
                angles: int = SECTION_ANGLES) -> ModulusEstimate:
    iso = bool(space.meta.get("isotropic"))
    sup = kind in ("rho_X", "rho_uacs", "rho_uacs_ball", "nonsquareness")
    planes_used = planes(space, count)
    wit_est, wit_uv, other = None, None, None
    for u, v in planes_used:
        est = planar_fn(section(space, u, v), angles)
        # the attained side picks the witness; the certified side is extremized separately
        att, bnd = (est.lo, est.hi) if sup else (est.hi, est.lo)
        if wit_est is None:
            wit_est, wit_uv, other = est, (u, v), bnd
            continue
        if sup:
            other = max(other, bnd)
            if att > wit_est.lo:
                wit_est, wit_uv = est, (u, v)
        else:
            other = min(other, bnd)
            if att < wit_est.hi:
                wit_est, wit_uv = est, (u, v)
    u, v = wit_uv
    w = wit_est.witness
    x = _lift_point(u, v, w.x) if w is not None else None
    y = _lift_point(u, v, w.y) if w is not None else None
    notes = {"planes": len(planes_used), "method": "planar sections"}
    f = None
    if w is not None and w.f is not None:
        f, how = _lift_functional(space, u, v, wit_est, x, y)
        notes["functional"] = how
    if sup:
        lo, hi = wit_est.lo, max(other, wit_est.lo)
    else:
        lo, hi = min(other, wit_est.hi), wit_est.hi
    certified = iso and wit_est.certified
    return ModulusEstimate(kind, arg, lo, hi, Witness(x, y, f) if x is not None else None, certified,
                           {"angles": angles, "planes": len(planes_used)}, notes)
