"""Derived objects of a normed space: dual norms, norming functionals, duals, quotients."""

from __future__ import annotations

from dataclasses import replace

import numpy as np
from scipy.optimize import minimize

from ..estimate import ModulusEstimate, Witness
from .ring import ROUND, Ring, dot2, numeric_cone, planar_ring, space_cone
from .sampling import directions
from .space import (
    TOL_OPT,
    ZERO_TOL,
    Cone2D,
    DimensionError,
    DomainError,
    Functional,
    NormedSpace,
    Subdifferential,
    as_vec,
)

DEFAULT_ANGLES = 1024
GS_ITERS = 90
INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def norm_eval(space: NormedSpace, v) -> float:
    return space.norm(as_vec(v, space.dim))


def _functional_coords(space, f) -> np.ndarray:
    if isinstance(f, Functional):
        f = f.coords
    return as_vec(f, space.dim)


# -- dual norm -----------------------------------------------------------------


def _pattern_search_sup(space: NormedSpace, f: np.ndarray, starts: np.ndarray, iters: int = 60):
    """Maximize f(x)/||x|| by coordinate pattern moves from several starts (vectorized)."""
    n = space.dim
    X = starts.copy()
    val = (X @ f) / space.norms(X)
    step = np.full(X.shape[0], 0.25)
    eye = np.eye(n)
    moves = np.concatenate([eye, -eye], axis=0)
    for _ in range(iters):
        cand = X[:, None, :] + step[:, None, None] * moves[None, :, :]
        cv = (cand @ f) / space.norms(cand)
        j = np.argmax(cv, axis=1)
        best = cv[np.arange(X.shape[0]), j]
        up = best > val
        X[up] = cand[np.arange(X.shape[0]), j][up]
        X[up] /= space.norms(X[up])[:, None]
        val = np.where(up, best, val)
        step = np.where(up, step, step * 0.5)
        if np.all(step < 1e-12):
            break
    i = int(np.argmax(val))
    return float(val[i]), X[i] / space.norms(X[i])


def _dual_search_hd(space: NormedSpace, f: np.ndarray, count: int):
    D = directions(space.dim, count)
    vals = (D @ f) / space.norms(D)
    order = np.argsort(-vals, kind="stable")[:8]
    starts = D[order]
    g = space.subgrad
    if g is None:
        # the normalized f itself is a natural start in near-Euclidean spaces
        starts = np.concatenate([starts, (f / np.linalg.norm(f))[None, :]], axis=0)
    return _pattern_search_sup(space, f, starts)


def dual_norm(space: NormedSpace, f, resolution: int = DEFAULT_ANGLES) -> ModulusEstimate:
    """Enclosure of sup{f(x) : ||x|| <= 1}."""
    fc = _functional_coords(space, f)
    res = {"angles": int(resolution)} if space.dim == 2 else {"samples": int(resolution)}
    if not np.any(fc):
        return ModulusEstimate("dual_norm", None, 0.0, 0.0, None, True, res)
    exact = space.meta.get("dual_exact")
    if space.dim == 2 and exact is None:
        ring = planar_ring(space, resolution)
        lo, hi, k = ring.support(fc)
        x = ring.P[int(k)]
        return ModulusEstimate(
            "dual_norm", None, float(lo), float(hi), Witness(x=x / space.norm(x)), ring.certified, res
        )
    if space.dim == 1:
        u = np.array([1.0])
        v = abs(fc[0]) / space.norm(u)
        return ModulusEstimate("dual_norm", None, v, v, Witness(x=np.sign(fc) / space.norm(u)), True, res)
    lo, x = _dual_search_hd(space, fc, max(256, int(resolution)))
    if exact is not None:
        v = float(exact(fc))
        return ModulusEstimate("dual_norm", None, min(lo, v), v, Witness(x=x), True, res)
    major = space.meta.get("dual_majorant")
    if major is not None:
        hi = float(major(fc))
        return ModulusEstimate("dual_norm", None, min(lo, hi), hi, Witness(x=x), True, res, {"hi": "majorant"})
    return ModulusEstimate("dual_norm", None, lo, lo, Witness(x=x), False, res, {"hi": "heuristic"})


# -- norming functionals and subdifferentials ---------------------------------------


def _check_nonzero(space, x):
    x = as_vec(x, space.dim)
    nx = space.norm(x)
    if nx < ZERO_TOL:
        raise DomainError("zero vector has no norming functional")
    return x, nx


def numeric_gradient(space: NormedSpace, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    n = space.dim
    nx = space.norm(x)
    step = h * max(nx, 1.0)
    E = np.eye(n) * step
    g = (space.norms(x[None, :] + E) - space.norms(x[None, :] - E)) / (2 * step)
    gx = float(g @ x)
    if gx > 0:
        g = g * (nx / gx)
    return g


def _cone_at(space: NormedSpace, u: np.ndarray) -> tuple[Cone2D, bool]:
    cone, exact = space_cone(space, u[None, :])
    return cone, exact


def norming_functional(space: NormedSpace, x) -> Functional:
    """A functional f with f(x) = ||x|| and dual norm one.

    Uses the analytic subgradient when the space has one; otherwise the
    lexicographically smallest endpoint of the planar normal cone, or a
    difference-quotient gradient in higher dimension.
    """
    x, nx = _check_nonzero(space, x)
    if space.subgrad is not None:
        return Functional(np.asarray(space.subgrad(x), dtype=float))
    if space.dim == 2:
        cone, _ = _cone_at(space, x / nx)
        a, b = cone.a[0], cone.b[0]
        f = min((tuple(a), tuple(b)))
        return Functional(np.array(f))
    return Functional(numeric_gradient(space, x))


def _dedupe(F: np.ndarray, decimals: int = 9) -> np.ndarray:
    key = np.round(F, decimals)
    _, idx = np.unique(key, axis=0, return_index=True)
    return F[np.sort(idx)]


def subdifferential(space: NormedSpace, x, resolution: int = 64, tol: float = TOL_OPT) -> Subdifferential:
    x, nx = _check_nonzero(space, x)
    if abs(nx - 1.0) > tol:
        raise DomainError(f"base point is not on the unit sphere (norm {nx})")
    if space.dim == 2:
        cone, exact = _cone_at(space, x)
        F = np.stack([cone.a[0], cone.b[0]])
        F = _dedupe(F)
        return Subdifferential(x, tuple(Functional(f) for f in F), bool(exact))
    # sampled: gradients at nearby points converge into the subdifferential
    n = space.dim
    grad = space.subgrad if space.subgrad is not None else (lambda z: numeric_gradient(space, z))
    D = directions(n, resolution)
    rows = [np.asarray(grad(x), dtype=float)]
    delta = 1e-7
    for v in D:
        z = x + delta * v
        g = np.asarray(grad(z), dtype=float)
        gx = float(g @ x)
        if gx > 0:
            rows.append(g / gx)
    F = _dedupe(np.array(rows), 6)
    return Subdifferential(x, tuple(Functional(f) for f in F), False)


# -- smoothness gap -------------------------------------------------------------------

T_SCHEDULE = (1e-2, 1e-3, 1e-4, 1e-5)


def smoothness_gap(space: NormedSpace, x, y, t_schedule=T_SCHEDULE, tol: float = TOL_OPT) -> float:
    """Limit of (||x+ty|| + ||x-ty|| - 2)/t as t -> 0+.

    The quotient is nonincreasing as t decreases (convexity); the value at the
    smallest t is corrected by one Richardson step and clipped to [0, q_min].
    """
    x = as_vec(x, space.dim)
    y = as_vec(y, space.dim)
    nx, ny = space.norm(x), space.norm(y)
    if abs(nx - 1.0) > tol or abs(ny - 1.0) > tol:
        raise DomainError("smoothness_gap needs unit vectors")
    if np.array_equal(x, y) or np.array_equal(x, -y):
        return 0.0
    ts = np.sort(np.asarray(t_schedule, dtype=float))[::-1]
    V = np.concatenate([x + ts[:, None] * y, x - ts[:, None] * y])
    nv = space.norms(V)
    k = len(ts)
    q = (nv[:k] + nv[k:] - 2.0 * nx) / ts
    qmin = float(q[-1])
    if k >= 2:
        r = ts[-2] / ts[-1]
        rich = (r * q[-1] - q[-2]) / (r - 1.0)
    else:
        rich = qmin
    return float(min(max(rich, 0.0), max(qmin, 0.0)))


# -- equivalence constants -----------------------------------------------------------


class EquivConstants(tuple):
    """(c, C) with c*|v|_2 <= ||v|| <= C*|v|_2; `certified` tells whether it is proved."""

    def __new__(cls, c, C, certified):
        obj = super().__new__(cls, (float(c), float(C)))
        obj.certified = bool(certified)
        return obj

    @property
    def c(self):
        return self[0]

    @property
    def C(self):
        return self[1]


def equivalence_constants(space: NormedSpace, resolution: int | None = None) -> EquivConstants:
    if space.equiv is not None:
        return EquivConstants(space.equiv[0], space.equiv[1], True)
    cache = space.meta.setdefault("_equiv", {})
    key = resolution
    if key in cache:
        return cache[key]
    if space.dim == 1:
        v = space.norm([1.0])
        out = EquivConstants(v, v, True)
    elif space.dim == 2:
        n = int(resolution or 16384)
        th = 2.0 * np.pi * np.arange(n) / n
        E = np.stack([np.cos(th), np.sin(th)], axis=-1)
        lo, hi = space.norm_bounds(E)
        Cg, cg = float(hi.max()), float(lo.min())
        gap = 2.0 * np.sin(np.pi / (2.0 * n))
        C = Cg / (1.0 - gap)
        c = cg - C * gap
        out = EquivConstants(max(c, 0.0), C, space.exact)
    else:
        D = directions(space.dim, int(resolution or 4096))
        nv = space.norms(D)
        out = EquivConstants(float(nv.min()), float(nv.max()), False)
    cache[key] = out
    return out


# -- dual space ------------------------------------------------------------------------


def _dual_support2d(ring: Ring):
    def support(G):
        G = np.asarray(G, dtype=float)
        k, node = ring.locate(G)
        kn = (k + 1) % ring.n
        a = ring.P[k]
        b = np.where(node[..., None], ring.P[k], ring.P[kn])
        scale = np.where(node, 1.0, ring.Ka[k])
        return Cone2D(a=a, b=b, scale=scale, members=node.copy())

    return support


def dual_space(space: NormedSpace, resolution: int = DEFAULT_ANGLES) -> NormedSpace:
    """The dual space, with its norm evaluated as the midpoint of the dual-norm enclosure."""
    label = (space.label or "X") + "*"
    factory = space.meta.get("dual_factory")
    if factory is not None:
        return factory().relabel(label)
    eq = equivalence_constants(space)
    equiv = (1.0 / eq.C, 1.0 / eq.c) if eq.c > 0 else None
    if space.dim == 2:
        ring = planar_ring(space, resolution)

        def bounds(V):
            lo, hi, _ = ring.support(V)
            return lo, hi

        def evaluator(V):
            lo, hi = bounds(V)
            return 0.5 * (lo + hi)

        def ring_factory(n, _space=space):
            return planar_ring(_space, n).dual()

        return NormedSpace(
            dim=2,
            evaluator=evaluator,
            label=label,
            equiv=equiv if eq.certified else None,
            bounds=bounds,
            support2d=_dual_support2d(ring),
            support_exact=ring.certified,
            ring_factory=ring_factory,
            certified_eval=ring.certified,
            meta={"primal": space, "resolution": int(resolution)},
        )
    D = directions(space.dim, max(int(resolution), 1024))
    W = D / space.norms(D)[:, None]

    def evaluator_hd(V):
        V = np.asarray(V, dtype=float)
        return np.max(V @ W.T, axis=-1)

    return NormedSpace(
        dim=space.dim,
        evaluator=evaluator_hd,
        label=label,
        certified_eval=False,
        meta={"primal": space, "resolution": int(resolution)},
    )


# -- quotients -----------------------------------------------------------------------


def _golden_min(fun, lo, hi, iters=GS_ITERS):
    """Vectorized golden-section search of convex 1-d functions on [lo, hi].

    Returns (t, value_hi, value_lo): value_hi is attained, value_lo is a convexity
    lower bound over the final bracket.
    """
    a, b = lo.copy(), hi.copy()
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        left = fc <= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new = np.where(left, b - INV_PHI * (b - a), a + INV_PHI * (b - a))
        fnew = fun(new)
        c, d = np.where(left, new, d), np.where(left, c, new)
        fc, fd = np.where(left, fnew, fd), np.where(left, fc, fnew)
    fa, fb = fun(a), fun(b)
    m = 0.5 * (a + b)
    fm = fun(m)
    best = np.minimum(np.minimum(fa, fb), np.minimum(fm, np.minimum(fc, fd)))
    # convexity: secants through the midpoint bound the function from below
    with np.errstate(invalid="ignore", divide="ignore"):
        sl = np.where(m > a, (fa - fm) / (m - a), 0.0)
        sr = np.where(b > m, (fb - fm) / (b - m), 0.0)
    drop = np.maximum(np.maximum(sl, 0.0) * (m - a), np.maximum(sr, 0.0) * (b - m))
    lower = np.minimum(fm - drop, best)
    return m, best, lower


def quotient_space(space: NormedSpace, subspace_basis, resolution: int = 8) -> NormedSpace:
    """X/U in orthonormal coordinates of the Euclidean complement of U."""
    U = np.array([as_vec(u, space.dim) for u in subspace_basis], dtype=float)
    if U.ndim != 2 or U.shape[0] == 0:
        raise DomainError("empty subspace basis")
    k, n = U.shape
    sv = np.linalg.svd(U, compute_uv=False)
    if sv.min() <= 1e-10 * sv.max():
        raise DomainError("subspace basis is linearly dependent")
    if k >= n:
        raise DomainError("subspace is the whole space")
    Q, _ = np.linalg.qr(U.T, mode="complete")
    Ub = Q[:, :k]
    W = Q[:, k:]
    m = n - k
    label = f"{space.label or 'X'}/U{k}"

    if k == 1:
        u = Ub[:, 0]
        nu = space.norm(u)

        def solve(V):
            V = np.asarray(V, dtype=float)
            X = V @ W.T
            nx = space.norms(X)
            T = 2.0 * nx / nu + 1e-300
            shape = nx.shape

            def fun(t):
                return space.norms(X - t[..., None] * u)

            t, val, low = _golden_min(fun, -T, T)
            lo_s, hi_s = space.norm_bounds(X - t[..., None] * u)
            hi = np.minimum(val, hi_s) if space.bounds is not None else val
            lo = np.maximum(np.minimum(low, hi) - 4 * ROUND * np.maximum(nx, 1.0), 0.0)
            zero = nx == 0
            return np.where(zero, 0.0, lo).reshape(shape), np.where(zero, 0.0, hi).reshape(shape), t

        def bounds(V):
            lo, hi, _ = solve(V)
            return lo, hi

        def evaluator(V):
            return solve(V)[1]

        certified = space.exact

        def nearest(V):
            V = np.asarray(V, dtype=float)
            _, _, t = solve(V)
            return V @ W.T - t[..., None] * u
    else:
        starts = max(2, int(resolution))

        def one(x):
            nx = space.norm(x)
            if nx == 0:
                return 0.0, x
            best, arg = space.norm(x), np.zeros(k)
            grid = np.linspace(-1.0, 1.0, starts) * nx / max(space.norm(Ub[:, 0]), 1e-300)
            for s in grid:
                c0 = np.full(k, s / np.sqrt(k))
                r = minimize(lambda c: space.norm(x - Ub @ c), c0, method="Powell", options={"xtol": 1e-12, "ftol": 1e-14})
                if r.fun < best:
                    best, arg = float(r.fun), r.x
            return best, x - Ub @ arg

        def evaluator(V):
            V = np.asarray(V, dtype=float)
            flat = V.reshape(-1, m) @ W.T
            out = np.array([one(x)[0] for x in flat])
            return out.reshape(V.shape[:-1])

        bounds = None
        certified = False

        def nearest(V):
            flat = np.asarray(V, dtype=float).reshape(-1, m) @ W.T
            return np.array([one(x)[1] for x in flat]).reshape(np.asarray(V).shape[:-1] + (n,))

    support = None
    support_exact = False
    if m == 2 and space.subgrad is not None and space.meta.get("smooth"):
        # at a nearest point x0 the (unique) gradient annihilates U
        def support(Pts):
            Pts = np.asarray(Pts, dtype=float)
            X0 = nearest(Pts)
            F = np.array([np.asarray(space.subgrad(x0), dtype=float) for x0 in X0.reshape(-1, n)])
            G = (F @ W).reshape(Pts.shape)
            G = G / dot2(G, Pts)[..., None]
            kk = Pts.shape[:-1]
            return Cone2D(a=G, b=G.copy(), scale=np.ones(kk), members=np.ones(kk, dtype=bool))

        support_exact = certified

    q = NormedSpace(
        dim=m,
        evaluator=evaluator,
        label=label,
        bounds=bounds,
        support2d=support,
        support_exact=support_exact,
        certified_eval=certified,
        meta={"parent": space, "complement": W, "subspace": Ub, "costly_eval": True},
    )
    return q


def coset_norm(qspace: NormedSpace, x) -> float:
    """Quotient norm of the coset of a representative x given in parent coordinates."""
    W = qspace.meta["complement"]
    x = as_vec(x, W.shape[0])
    return float(qspace.norms(x @ W))


def check_dim(space: NormedSpace, v):
    a = np.asarray(v, dtype=float)
    if a.shape[-1] != space.dim:
        raise DimensionError(f"dimension mismatch: expected {space.dim}, got {a.shape[-1]}")
    return a
