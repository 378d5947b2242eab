"""Three-valued classification: rotund, smooth, acs, and the equality form of Lau's condition.

A verdict is "fails" only with a witness that re-evaluates, "holds" only from a
certified bound (or a sampled gap for smoothness), and "inconclusive" otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .moduli import delta_convexity, delta_uacs
from .normcore.ops import dual_norm, numeric_gradient
from .normcore.ring import planar_ring
from .normcore.sampling import directions, structured_directions
from .normcore.space import NormedSpace, as_vec

HOLDS, FAILS, INCONCLUSIVE = "holds", "fails", "inconclusive"
DEFAULT_TOL = 1e-4
DEFAULT_RESOLUTION = 1024
FAIL_LADDER = (1.0, 0.5, 0.1)
FLAT_TOL = 1e-10
FD_STEP = 1e-7
BISECT = 60

# finite-dimensional collapse: each listed class coincides with the key property
COLLAPSE = {
    "rotund": ("LUR", "WLUR", "UR", "WUR", "MLUR", "WMLUR", "property (P)"),
    "smooth": ("US", "UG", "FS"),
    "acs": ("luacs", "sluacs", "wuacs", "luacs+", "sluacs+", "mluacs", "msluacs", "uacs", "U-space"),
}


def _clean(v):
    if isinstance(v, np.ndarray):
        return [float(c) for c in v.ravel()]
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (list, tuple)):
        return [_clean(c) for c in v]
    if isinstance(v, dict):
        return {k: _clean(c) for k, c in v.items()}
    if isinstance(v, np.bool_):
        return bool(v)
    return v


@dataclass(frozen=True)
class Verdict:
    name: str
    status: str
    witness: dict = field(default_factory=dict)
    evidence: dict = field(default_factory=dict)

    def to_dict(self):
        return {"status": self.status, "witness": _clean(self.witness), "evidence": _clean(self.evidence)}


# -- helpers -------------------------------------------------------------------------------


def _unit(space, v):
    v = np.asarray(v, dtype=float)
    return v / space.norm(v)


def _tangent(u):
    return np.array([-u[1], u[0]])


def one_sided_functionals(space: NormedSpace, x):
    """Planar norming functionals from the left and right derivatives along the tangent."""
    x = as_vec(x, 2)
    t = _tangent(x)
    n0 = space.norm(x)
    dp = (space.norm(x + FD_STEP * t) - n0) / FD_STEP
    dm = (n0 - space.norm(x - FD_STEP * t)) / FD_STEP
    M = np.stack([x, t])
    fm = np.linalg.solve(M, np.array([n0, dm]))
    fp = np.linalg.solve(M, np.array([n0, dp]))
    return fm / n0, fp / n0


def _gaps(space, X, Y, ts=(1e-3, 1e-4, 1e-5)):
    """Vectorized smoothness gap (||x+ty|| + ||x-ty|| - 2)/t with one Richardson step."""
    q = []
    for t in ts:
        q.append((space.norms(X + t * Y) + space.norms(X - t * Y) - 2.0 * space.norms(X)) / t)
    r = ts[-2] / ts[-1]
    rich = (r * q[-1] - q[-2]) / (r - 1.0)
    return np.clip(np.minimum(rich, q[-1]), 0.0, None)


def _res(space, resolution):
    return int(resolution or DEFAULT_RESOLUTION)


# -- rotundity -----------------------------------------------------------------------------


def check_flat_pair(space, x, y, tol):
    x, y = as_vec(x, space.dim), as_vec(y, space.dim)
    return (
        abs(space.norm(x) - 1.0) <= 1e-9
        and abs(space.norm(y) - 1.0) <= 1e-9
        and space.norm(x - y) >= 10.0 * tol
        and space.norm(x + y) >= 2.0 - tol * tol
    )


def is_rotund(space: NormedSpace, tol: float = DEFAULT_TOL, resolution: int | None = None) -> Verdict:
    n = _res(space, resolution)
    eps0 = 10.0 * tol
    for eps in FAIL_LADDER + (eps0,):
        if eps < eps0:
            continue
        est = delta_convexity(space, eps, n)
        w = est.witness
        if est.hi <= 0.5 * tol * tol and w is not None and check_flat_pair(space, w.x, w.y, tol):
            return Verdict("rotund", FAILS, {"x": w.x, "y": w.y},
                           {"eps": eps, "norm_sum": space.norm(w.x + w.y), "norm_diff": space.norm(w.x - w.y)})
    est = delta_convexity(space, eps0, n)
    ev = {"eps": eps0, "delta_lo": est.lo, "delta_hi": est.hi, "certified": est.certified}
    if est.certified and est.lo > 0.0:
        return Verdict("rotund", HOLDS, {}, ev)
    return Verdict("rotund", INCONCLUSIVE, {}, ev)


# -- smoothness ------------------------------------------------------------------------------


def check_corner(space, x, f1, f2, tol):
    """x unit, f1 and f2 both norming x, and sup over the ball of f1 - f2 beyond tol."""
    x, f1, f2 = as_vec(x, space.dim), as_vec(f1, space.dim), as_vec(f2, space.dim)
    if abs(space.norm(x) - 1.0) > 1e-9:
        return False
    for f in (f1, f2):
        if abs(float(f @ x) - 1.0) > 1e-6 or dual_norm(space, f).hi > 1.0 + 1e-6:
            return False
    return dual_norm(space, f1 - f2).lo > tol


def is_smooth(space: NormedSpace, tol: float = DEFAULT_TOL, resolution: int | None = None) -> Verdict:
    n = _res(space, resolution)
    if space.dim == 2:
        ring = planar_ring(space, n)
        lo, hi, _ = ring.support(ring.B - ring.A)
        k = int(np.argmax(lo))
        if lo[k] > tol:
            x = _unit(space, ring.P[k])
            if check_corner(space, x, ring.A[k], ring.B[k], tol):
                return Verdict("smooth", FAILS, {"x": x, "f1": ring.A[k], "f2": ring.B[k]},
                               {"pairing_gap": float(lo[k])})
        X = ring.P / space.norms(ring.P)[:, None]
        T = np.stack([-X[:, 1], X[:, 0]], axis=-1)
        T = T / space.norms(T)[:, None]
        G = _gaps(space, X, T)
        k = int(np.argmax(G))
        if G[k] > tol:
            f1, f2 = one_sided_functionals(space, X[k])
            if check_corner(space, X[k], f1, f2, tol):
                return Verdict("smooth", FAILS, {"x": X[k], "f1": f1, "f2": f2}, {"gap": float(G[k])})
        ev = {"max_gap": float(G.max()), "max_node_cone": float(hi.max()), "angles": n}
        if G.max() < tol and hi.max() < tol:
            return Verdict("smooth", HOLDS, {}, ev)
        return Verdict("smooth", INCONCLUSIVE, {}, ev)
    # sampled points against structured directions
    X = np.asarray(directions(space.dim, 512))
    X = X / space.norms(X)[:, None]
    Ydirs = np.asarray(structured_directions(space.dim))[: 8 * space.dim]
    worst = (0.0, None, None)
    for y in Ydirs:
        Y = np.broadcast_to(y / space.norm(y), X.shape)
        G = _gaps(space, X, Y)
        k = int(np.argmax(G))
        if G[k] > worst[0]:
            worst = (float(G[k]), X[k], y)
    ev = {"max_gap": worst[0], "samples": X.shape[0], "directions": len(Ydirs), "mode": "sampled"}
    if worst[0] > tol:
        x, y = worst[1], worst[2]
        grad = space.subgrad if space.subgrad is not None else (lambda z: numeric_gradient(space, z))
        f1 = np.asarray(grad(x + FD_STEP * y), dtype=float)
        f2 = np.asarray(grad(x - FD_STEP * y), dtype=float)
        f1, f2 = f1 / float(f1 @ x), f2 / float(f2 @ x)
        if check_corner(space, x, f1, f2, tol):
            return Verdict("smooth", FAILS, {"x": x, "f1": f1, "f2": f2}, ev)
        return Verdict("smooth", INCONCLUSIVE, {}, ev)
    return Verdict("smooth", HOLDS, {}, ev)


# -- acs -------------------------------------------------------------------------------------


def check_acs_triple(space, x, y, f, tol):
    x, y, f = as_vec(x, space.dim), as_vec(y, space.dim), as_vec(f, space.dim)
    return (
        abs(space.norm(x) - 1.0) <= 1e-9
        and abs(space.norm(y) - 1.0) <= 1e-9
        and space.norm(x + y) >= 2.0 - tol * tol
        and float(f @ x) >= 1.0 - tol * tol
        and dual_norm(space, f).hi <= 1.0 + tol * tol
        and float(f @ y) <= 1.0 - 10.0 * tol
    )


def is_acs(space: NormedSpace, tol: float = DEFAULT_TOL, resolution: int | None = None,
           segments=None) -> Verdict:
    n = _res(space, resolution)
    eps0 = 10.0 * tol
    for eps in FAIL_LADDER:
        est = delta_uacs(space, eps, n)
        w = est.witness
        if est.hi <= 0.5 * tol * tol and w is not None and w.f is not None:
            if check_acs_triple(space, w.x, w.y, w.f, tol):
                return Verdict("acs", FAILS, {"x": w.x, "y": w.y, "f": w.f},
                               {"eps": eps, "f_of_y": float(w.f @ w.y), "norm_sum": space.norm(w.x + w.y)})
    if space.dim == 2:
        # a flat segment ending at a corner: the corner's other functional misses the far end
        segs = flat_segments_2d(space, n) if segments is None else segments
        for s in segs:
            for end, other, fs in ((s["start"], s["end"], s["start_functionals"]),
                                   (s["end"], s["start"], s["end_functionals"])):
                for f in fs:
                    if check_acs_triple(space, end, other, f, tol):
                        return Verdict("acs", FAILS, {"x": end, "y": other, "f": f},
                                       {"route": "flat segment with a corner endpoint", "f_of_y": float(f @ other)})
    est = delta_uacs(space, eps0, n)
    ev = {"eps": eps0, "delta_uacs_lo": est.lo, "delta_uacs_hi": est.hi, "certified": est.certified}
    if est.certified and est.lo > 0.0:
        return Verdict("acs", HOLDS, {}, ev)
    w = est.witness
    if est.hi <= 0.5 * tol * tol and w is not None and w.f is not None and check_acs_triple(space, w.x, w.y, w.f, tol):
        return Verdict("acs", FAILS, {"x": w.x, "y": w.y, "f": w.f}, ev)
    return Verdict("acs", INCONCLUSIVE, {}, ev)


# -- flat segments ---------------------------------------------------------------------------


def _on_face(space, a, w):
    return 1.0 - space.norm(0.5 * (a + w)) <= FLAT_TOL


def _dir(space, th):
    e = np.array([math.cos(th), math.sin(th)])
    return e / space.norm(e)


def _extend(space, anchor, th_in, th_out):
    """Last angle between th_in (on the face) and th_out (off it) whose point stays on the face."""
    a, b = th_in, th_out
    for _ in range(BISECT):
        m = 0.5 * (a + b)
        if _on_face(space, anchor, _dir(space, m)):
            a = m
        else:
            b = m
    return a


def _face_functional(p, q):
    # the linear functional equal to 1 at p and q
    return np.linalg.solve(np.stack([p, q]), np.ones(2))


def flat_segments_2d(space: NormedSpace, resolution: int | None = None, smooth_tol: float = DEFAULT_TOL):
    """Maximal segments of the unit sphere, endpoints refined by bisection."""
    n = _res(space, resolution)
    th = 2.0 * np.pi * np.arange(n) / n
    U = np.stack([np.cos(th), np.sin(th)], axis=-1)
    U = U / space.norms(U)[:, None]
    V = np.roll(U, -1, axis=0)
    flat = 1.0 - space.norms(0.5 * (U + V)) <= FLAT_TOL
    if not flat.any():
        return []
    # arcs k-1 and k lie on one face when the midpoint of their outer nodes is on the sphere
    W = np.roll(U, 1, axis=0)
    joint = flat & np.roll(flat, 1) & (1.0 - space.norms(0.5 * (W + V)) <= FLAT_TOL)
    starts = np.flatnonzero(flat & ~joint)
    if starts.size == 0:
        return []
    runs = []
    for k in starts:
        e = int(k)
        while joint[(e + 1) % n] and (e + 1) % n != k:
            e = (e + 1) % n
        runs.append((int(k), e))
    step = 2.0 * np.pi / n
    out = []
    for s, e in runs:
        ts, te = th[s], th[e] + step
        if te < ts:
            te += 2.0 * np.pi
        ps, pe = U[s], U[(e + 1) % n]
        t_end = _extend(space, ps, te, te + step)
        pe = _dir(space, t_end)
        t_start = _extend(space, pe, ts, ts - step)
        ps = _dir(space, t_start)
        out.append(_segment_record(space, ps, pe, smooth_tol))
    return out


def _segment_record(space, p, q, smooth_tol):
    face = _face_functional(p, q)
    rec = {"start": p, "end": q, "length": float(np.linalg.norm(q - p)), "functional": face}
    for name, x in (("start", p), ("end", q)):
        fm, fp = one_sided_functionals(space, x)
        # the side away from the face gives the other extreme functional
        other = fm if np.linalg.norm(fm - face) > np.linalg.norm(fp - face) else fp
        gap = dual_norm(space, other - face).hi
        rec[f"{name}_smooth"] = bool(gap <= smooth_tol)
        rec[f"{name}_functionals"] = [face] if gap <= smooth_tol else [face, other]
    return rec


# -- Lau's condition -----------------------------------------------------------------------------


def lau_condition(space: NormedSpace, tol: float = DEFAULT_TOL, resolution: int | None = None,
                  segments=None) -> Verdict:
    """||x + y|| = 2 with x*(x) = 1 = y*(y) forces ||x* + y*|| = 2."""
    if space.dim != 2:
        return Verdict("lau_condition", INCONCLUSIVE, {}, {"mode": "planar spaces only"})
    n = _res(space, resolution)
    segs = flat_segments_2d(space, n) if segments is None else segments
    worst = (math.inf, None)
    checked = 0
    for s in segs:
        for f in s["start_functionals"]:
            for g in s["end_functionals"]:
                est = dual_norm(space, f + g, n)
                checked += 1
                if est.hi < worst[0]:
                    worst = (est.hi, (s["start"], s["end"], f, g, est.lo))
    ev = {"flat_segments": len(segs), "pairs_checked": checked}
    if worst[1] is None:
        return Verdict("lau_condition", HOLDS, {}, {**ev, "vacuous": True})
    x, y, f, g, lo = worst[1]
    ev["min_dual_norm"] = worst[0]
    if worst[0] < 2.0 - tol:
        return Verdict("lau_condition", FAILS, {"x": x, "y": y, "f": f, "g": g}, ev)
    if lo >= 2.0 - tol:
        return Verdict("lau_condition", HOLDS, {}, ev)
    return Verdict("lau_condition", INCONCLUSIVE, {}, ev)


def check_lau_quadruple(space, x, y, f, g, tol):
    x, y, f, g = (as_vec(v, 2) for v in (x, y, f, g))
    return (
        space.norm(x + y) >= 2.0 - tol * tol
        and abs(float(f @ x) - 1.0) <= 1e-6
        and abs(float(g @ y) - 1.0) <= 1e-6
        and dual_norm(space, f + g).hi < 2.0 - tol
    )


# -- report --------------------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassificationReport:
    label: str
    verdicts: dict
    tol: float
    resolution: int
    flat_segments: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def status(self, name):
        return self.verdicts[name].status

    def to_dict(self):
        derived = {}
        for key, names in COLLAPSE.items():
            for nm in names:
                derived[nm] = {"status": self.verdicts[key].status, "via": key}
        return {
            "space": self.label,
            "tol": self.tol,
            "resolution": self.resolution,
            "verdicts": {k: v.to_dict() for k, v in self.verdicts.items()},
            "finite_dimensional_collapse": derived,
            "flat_segments": [_clean(s) for s in self.flat_segments],
            "notes": dict(self.notes),
        }


def recheck(space: NormedSpace, v: Verdict, tol: float) -> bool:
    """Independent re-evaluation of a failure witness."""
    w = v.witness
    if v.status != FAILS:
        return True
    if v.name == "rotund":
        return check_flat_pair(space, w["x"], w["y"], tol)
    if v.name == "smooth":
        return check_corner(space, w["x"], w["f1"], w["f2"], tol)
    if v.name == "acs":
        return check_acs_triple(space, w["x"], w["y"], w["f"], tol)
    if v.name == "lau_condition":
        return check_lau_quadruple(space, w["x"], w["y"], w["f"], w["g"], tol)
    return False


def classify(space: NormedSpace, tol: float = DEFAULT_TOL, resolution: int | None = None) -> ClassificationReport:
    n = _res(space, resolution)
    segs = flat_segments_2d(space, n) if space.dim == 2 else []
    R = is_rotund(space, tol, n)
    S = is_smooth(space, tol, n)
    A = is_acs(space, tol, n, segments=segs)
    notes = {}
    if A.status == INCONCLUSIVE and HOLDS in (R.status, S.status):
        # rotund and smooth spaces are both acs
        src = "rotund" if R.status == HOLDS else "smooth"
        A = Verdict("acs", HOLDS, {}, {**A.evidence, "implied_by": src})
    L = lau_condition(space, tol, n, segments=segs)
    if A.status == FAILS and HOLDS in (R.status, S.status):
        notes["inconsistent"] = "acs fails while rotund or smooth holds"
    notes["property_P"] = "equals the rotund verdict in finite dimension"
    verdicts = {"rotund": R, "smooth": S, "acs": A, "lau_condition": L}
    return ClassificationReport(space.label, verdicts, tol, n, segs, notes)
