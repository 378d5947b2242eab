"""Planar moduli from a ring sandwich of the unit sphere.

Pairs (x, y) of sphere points are covered by cells arc_i x arc_j.  On a cell,
convex objectives are bounded by their values at the four node pairs plus
the arc-to-chord distances d_i, d_j, which gives certified bounds for the
optimizing side.  The attained side comes from node pairs, each node moved
onto the sphere (|  ||P_k|| - 1 | <= pte_k).
"""

from __future__ import annotations

import math

import numpy as np

from .. import kernels
from ..estimate import ModulusEstimate, Witness
from ..normcore.ring import Ring, dot2, planar_ring, unit_circle
from ..normcore.space import NormedSpace

ROUND_SLACK = 1e-15
WITNESS_TOL = 1e-12
BLOCK_ELEMS = 1 << 21
CACHE_MAX_N = 1024
MAX_BAND = 16


def _unit(space, v):
    v = np.asarray(v, dtype=float)
    return v / space.norm(v)


class Tables:
    """Pairwise norm tables ||P_r + t P_c|| in row blocks, columns wrapped to N+1."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self.N = ring.n
        N = self.N
        P = ring.P
        self.sym = N % 2 == 0 and np.array_equal(P[N // 2 :], -P[: N // 2])
        self.cols = np.arange(N + 1) % N
        self.cache = ring.__dict__.setdefault("_tables", {}) if N <= CACHE_MAX_N else None

    def blocks(self):
        N = self.N
        b = max(1, min(N, BLOCK_ELEMS // (N + 1)))
        for i0 in range(0, N, b):
            yield i0, min(b, N - i0)

    def rows(self, i0, b):
        return (i0 + np.arange(b + 1)) % self.N

    def pair(self, i0, b, t, keep=True):
        """(lo, hi) tables of ||P_r + t P_c|| and ||P_r - t P_c||."""
        key = (i0, b, float(t))
        if self.cache is not None and key in self.cache:
            return self.cache[key]
        ring, N = self.ring, self.N
        R = ring.P[self.rows(i0, b)]
        if self.sym:
            lo, hi = ring.norm_bounds(R[:, None, :] + t * ring.P[None, :, :])
            idx = self.cols
            sh = (idx + N // 2) % N
            out = (lo[:, idx], hi[:, idx]), (lo[:, sh], hi[:, sh])
        else:
            C = ring.P[self.cols]
            p = ring.norm_bounds(R[:, None, :] + t * C[None, :, :])
            m = ring.norm_bounds(R[:, None, :] - t * C[None, :, :])
            out = p, m
        if self.cache is not None and keep:
            self.cache[key] = out
        return out

    def functionals(self, i0, b, F):
        """Table F_r(P_c) for rows r of the block (b rows, N+1 columns)."""
        R = F[(i0 + np.arange(b)) % self.N]
        C = self.ring.P[self.cols]
        return np.ascontiguousarray(dot2(R[:, None, :], C[None, :, :]))


def _row_vec(v, i0, b, N):
    return np.ascontiguousarray(v[(i0 + np.arange(b + 1)) % N])


def _col_vec(v, N):
    return np.ascontiguousarray(v[np.arange(N + 1) % N])


def _resolution(ring, extra=None):
    res = {"angles": ring.n, "backend": kernels.BACKEND}
    if extra:
        res.update(extra)
    return res


# -- delta_X -----------------------------------------------------------------------


def _max_chord(ring):
    return float(ring.norm_bounds(np.roll(ring.P, -1, axis=0) - ring.P)[1].max())


def _scan_dx_full(ring, eps_k):
    tab = Tables(ring)
    N = ring.n
    dc, pc = _col_vec(ring.d, N), _col_vec(ring.pte, N)
    best = (math.inf, -1, -1)
    nbest = (math.inf, -1, -1)
    for i0, b in tab.blocks():
        (Slo, Shi), (Dlo, Dhi) = tab.pair(i0, b, 1.0)
        out = kernels.scan_delta_x(
            Shi, Dhi, Slo, Dlo, _row_vec(ring.d, i0, b, N), dc, _row_vec(ring.pte, i0, b, N), pc, eps_k
        )
        if out[0] < best[0]:
            best = (out[0], (i0 + out[1]) % N, out[2] % N)
        if out[3] < nbest[0]:
            nbest = (out[3], (i0 + out[4]) % N, out[5] % N)
    return best, nbest


def _scan_dx_band(ring, eps_k, rows_fn, halfwidth):
    """Scan cells (i, j) with j in [i - halfwidth, i + halfwidth] (superset)."""
    N = ring.n
    w = int(halfwidth)
    best = (math.inf, -1, -1)
    nbest = (math.inf, -1, -1)
    for i0, b, c0, W in rows_fn(N, w):
        rows = (i0 + np.arange(b + 1)) % N
        cols = (c0 + np.arange(W + 1)) % N
        R, C = ring.P[rows], ring.P[cols]
        Slo, Shi = ring.norm_bounds(R[:, None, :] + C[None, :, :])
        Dlo, Dhi = ring.norm_bounds(R[:, None, :] - C[None, :, :])
        out = kernels.scan_delta_x(
            Shi, Dhi, Slo, Dlo,
            np.ascontiguousarray(ring.d[rows]), np.ascontiguousarray(ring.d[cols]),
            np.ascontiguousarray(ring.pte[rows]), np.ascontiguousarray(ring.pte[cols]), eps_k,
        )
        if out[0] < best[0]:
            best = (out[0], (i0 + out[1]) % N, (c0 + out[2]) % N)
        if out[3] < nbest[0]:
            nbest = (out[3], (i0 + out[4]) % N, (c0 + out[5]) % N)
    return best, nbest


def _near_blocks(N, w):
    b = max(1, w)
    for i0 in range(0, N, b):
        bb = min(b, N - i0)
        yield i0, bb, i0 - w, bb + 2 * w


def _far_blocks(N, g):
    # one row at a time, skipping columns within g of the diagonal
    for i0 in range(N):
        c0 = i0 + 1 + g
        W = N - 1 - 2 * g
        if W > 0:
            yield i0, 1, c0, W


def delta_x(space: NormedSpace, eps: float, n: int) -> ModulusEstimate:
    ring = planar_ring(space, n)
    eps_k = eps - WITNESS_TOL
    chord = _max_chord(ring)
    notes = {}
    extra = {}
    if chord <= eps / 5.0 or eps >= 1.0:
        best, nbest = _scan_dx_full(ring, eps_k)
        node_ring = ring
    else:
        # near-diagonal cells need arcs much shorter than eps
        ratio = 1
        while chord / ratio > eps / 5.0 and n * ratio < (1 << 17):
            ratio *= 2
        N = ring.n
        g = 1
        while True:
            far, nfar = _scan_dx_band(ring, eps_k, lambda N, w, g=g: _far_blocks(N, g), 0)
            sep = (far[2] - far[1]) % N
            # a far minimum on the band edge means the coarse cells there are too loose
            if far[0] > 0.0 or min(sep, N - sep) > g + 1 or g >= MAX_BAND:
                break
            g *= 2
        notes["band_cells"] = g
        if nfar[0] <= ROUND_SLACK:
            # an attained zero already decides the enclosure
            near, nnear = far, nfar
        else:
            fine = planar_ring(space, n * ratio)
            near, nnear = _scan_dx_band(fine, eps_k, _near_blocks, (g + 2) * ratio + 1)
        best = far if far[0] <= near[0] else near
        if nfar[0] <= nnear[0]:
            nbest, node_ring = nfar, ring
        else:
            nbest, node_ring = nnear, fine
        extra = {"fine_angles": n * ratio}
        notes["near_diagonal"] = "refined band"
    lo = max(best[0] - ROUND_SLACK, 0.0)
    if nbest[1] >= 0 and nbest[0] <= 1.0:
        x = _unit(space, node_ring.P[nbest[1]])
        y = _unit(space, node_ring.P[nbest[2]])
        hi = nbest[0]
    else:
        x = _unit(space, ring.P[0])
        y = -x
        hi = 1.0
    hi = max(hi, lo)
    return ModulusEstimate("delta_X", eps, lo, hi, Witness(x, y), ring.certified, _resolution(ring, extra), notes)


# -- rho_X and rho_uacs on the sphere ---------------------------------------------------


def rho(space: NormedSpace, tau: float, n: int, constrained: bool) -> ModulusEstimate:
    ring = planar_ring(space, n)
    tab = Tables(ring)
    N = ring.n
    thr = 2.0 * (1.0 - tau)
    dc, pc = _col_vec(ring.d, N), _col_vec(ring.pte, N)
    best = (-math.inf, -1, -1)
    nbest = (-math.inf, -1, -1)
    for i0, b in tab.blocks():
        (Qplo, Qphi), (Qmlo, Qmhi) = tab.pair(i0, b, tau)
        if constrained:
            (Slo, Shi), _ = tab.pair(i0, b, 1.0)
        else:
            Slo = Shi = Qphi
        out = kernels.scan_rho(
            Qphi + Qmhi, Qplo + Qmlo, Shi, Slo, _row_vec(ring.d, i0, b, N), dc,
            _row_vec(ring.pte, i0, b, N), pc, tau, thr, constrained,
        )
        if out[0] > best[0]:
            best = (out[0], (i0 + out[1]) % N, out[2] % N)
        if out[3] > nbest[0]:
            nbest = (out[3], (i0 + out[4]) % N, out[5] % N)
    kind = "rho_uacs" if constrained else "rho_X"
    hi = min(best[0] + ROUND_SLACK, tau)
    x = _unit(space, ring.P[nbest[1]])
    y = _unit(space, ring.P[nbest[2]])
    lo = min(nbest[0], hi)
    return ModulusEstimate(kind, tau, lo, hi, Witness(x, y), ring.certified, _resolution(ring))


# -- non-squareness -----------------------------------------------------------------------


def nonsquareness(space: NormedSpace, n: int) -> ModulusEstimate:
    ring = planar_ring(space, n)
    tab = Tables(ring)
    N = ring.n
    dc, pc = _col_vec(ring.d, N), _col_vec(ring.pte, N)
    best = (-math.inf, -1, -1)
    nbest = (-math.inf, -1, -1)
    for i0, b in tab.blocks():
        (Slo, Shi), (Dlo, Dhi) = tab.pair(i0, b, 1.0)
        out = kernels.scan_ns(Shi, Dhi, Slo, Dlo, _row_vec(ring.d, i0, b, N), dc, _row_vec(ring.pte, i0, b, N), pc)
        if out[0] > best[0]:
            best = (out[0], (i0 + out[1]) % N, out[2] % N)
        if out[3] > nbest[0]:
            nbest = (out[3], (i0 + out[4]) % N, out[5] % N)
    hi = min(best[0] + ROUND_SLACK, 1.0)
    x = _unit(space, ring.P[nbest[1]])
    y = _unit(space, ring.P[nbest[2]])
    return ModulusEstimate(
        "nonsquareness", None, min(nbest[0], hi), hi, Witness(x, y), ring.certified, _resolution(ring)
    )


# -- delta_uacs -------------------------------------------------------------------------


def _uacs_block(ring, tab, i0, b, eps_k, has_ext):
    N = ring.n
    (Slo, Shi), _ = tab.pair(i0, b, 1.0, keep=b > 1)
    FA = tab.functionals(i0, b, ring.A)
    FB = tab.functionals(i0, b, ring.B)
    GA = tab.functionals(i0, b, ring.CA)
    GB = tab.functionals(i0, b, ring.CB)
    rows = (i0 + np.arange(b)) % N
    if has_ext:
        ext = [tab.functionals(i0, b, ring.XA[:, s]) for s in (0, 1)]
        ext += [tab.functionals(i0, b, ring.XB[:, s]) for s in (0, 1)]
        XA0, XA1, XB0, XB1 = ext
        XK = np.ascontiguousarray(ring.XK[rows])
    else:
        XA0 = XB0 = XA1 = XB1 = FA
        XK = np.zeros((b, 2))
    dc, pc = _col_vec(ring.d, N), _col_vec(ring.pte, N)
    return kernels.scan_uacs(
        Shi, Slo, FA, FB, GA, GB, np.ascontiguousarray(ring.Ka[rows]),
        _row_vec(ring.d, i0, b, N), dc, _row_vec(ring.pte, i0, b, N), pc, eps_k,
        XA0, XB0, XA1, XB1, XK, has_ext,
    )


REFINE_FACTOR = 4
REFINE_LEVELS = 3
REFINE_CELLS = 1 << 27
REFINE_FLOOR = 1e-12  # below this an enclosure [0, hi] is already tight


def _has_ext(ring):
    return bool(np.any(ring.XK > 0))


def delta_uacs(space: NormedSpace, eps: float, n: int, ring: Ring | None = None, refine: bool = True) -> ModulusEstimate:
    ring = planar_ring(space, n) if ring is None else ring
    tab = Tables(ring)
    N = ring.n
    eps_k = eps - WITNESS_TOL
    ext = _has_ext(ring)
    best = (math.inf, -1, -1, -1)
    nbest = (math.inf, ring, -1, -1, -1)
    for i0, b in tab.blocks():
        out = _uacs_block(ring, tab, i0, b, eps_k, ext)
        if out[0] < best[0]:
            best = (out[0], (i0 + out[1]) % N, out[2] % N, out[3])
        if out[4] < nbest[0]:
            nbest = (out[4], ring, (i0 + out[5]) % N, out[6] % N, out[7])
    lo_cells = best[0]
    notes = {}
    levels = 0
    # each fine node of a costly norm is an inner optimization; keep the coarse bound there
    refine = refine and not space.meta.get("costly_eval")
    if refine and REFINE_FLOOR < nbest[0] <= 1.0 and lo_cells < 0.5 * nbest[0] and ring is planar_ring(space, n):
        lo_cells, nbest, levels = _refine_rows(space, ring, eps_k, nbest)
        if levels:
            notes["refined_levels"] = levels
    lo = max(lo_cells - ROUND_SLACK, 0.0)
    if nbest[2] >= 0 and nbest[0] <= 1.0:
        _, wr, i, j, which = nbest
        x = _unit(space, wr.P[i])
        y = _unit(space, wr.P[j])
        f = (wr.A if which == 0 else wr.B)[i]
        hi = nbest[0]
    else:
        x = _unit(space, ring.P[0])
        y = -x
        f = ring.A[0]
        hi = 1.0
        notes["witness"] = "antipodal pair"
    if best[1] < 0:
        notes["feasible_cells"] = 0
    hi = max(hi, lo)
    extra = {"refined_angles": N * REFINE_FACTOR**levels} if levels else None
    return ModulusEstimate(
        "delta_uacs", eps, lo, hi, Witness(x, y, np.array(f, dtype=float)), ring.certified,
        _resolution(ring, extra), notes,
    )


def _refine_rows(space, ring, eps_k, nbest):
    """Branch and bound on x-arcs: rows whose bound is below half the attained value
    are rescanned against a ring REFINE_FACTOR times finer (nodes nest exactly)."""
    N = ring.n
    tab = Tables(ring)
    ext = _has_ext(ring)
    rowmin = np.empty(N)
    for i in range(N):
        out = _uacs_block(ring, tab, i, 1, eps_k, ext)
        rowmin[i] = out[0]
        if out[4] < nbest[0]:
            nbest = (out[4], ring, i, out[6] % N, out[7])
    settled = math.inf
    bad = np.arange(N)
    cur, level = ring, 0
    vals = rowmin
    while level < REFINE_LEVELS:
        thr = 0.5 * nbest[0]
        keep = vals >= thr
        if np.any(keep):
            settled = min(settled, float(vals[keep].min()))
        bad = bad[~keep]
        if bad.size == 0:
            break
        Nf = cur.n * REFINE_FACTOR
        if bad.size * REFINE_FACTOR * Nf > REFINE_CELLS:
            break
        fine = planar_ring(space, Nf)
        ftab = Tables(fine)
        fext = _has_ext(fine)
        rows = (bad[:, None] * REFINE_FACTOR + np.arange(REFINE_FACTOR)[None, :]).ravel()
        fv = np.empty(rows.size)
        for k, r in enumerate(rows):
            out = _uacs_block(fine, ftab, int(r), 1, eps_k, fext)
            fv[k] = out[0]
            if out[4] < nbest[0]:
                nbest = (out[4], fine, int(r), out[6] % Nf, out[7])
        cur, bad, vals, level = fine, rows, fv, level + 1
    lo = min(settled, float(vals.min()) if bad.size else math.inf)
    return lo, nbest, level


# -- delta_uacs_tilde ----------------------------------------------------------------------

LAMBDA_COUNT = 96


def _max4(M):
    return np.maximum(np.maximum(M[:-1, :-1], M[:-1, 1:]), np.maximum(M[1:, :-1], M[1:, 1:]))


def delta_uacs_tilde(space: NormedSpace, eps: float, n: int) -> ModulusEstimate:
    """Uses phi(x, y) = max{f(x) : f in B*, f(y) <= c} = min_{l >= 0} ||x - l y|| + l c."""
    ring = planar_ring(space, n)
    N = ring.n
    c = 1.0 - eps
    lam_max = 50.0 if eps >= 2.0 - 1e-12 else min(50.0, 2.0 / (2.0 - eps))
    lams = np.linspace(0.0, lam_max, LAMBDA_COUNT)
    idx = np.arange(N + 1) % N
    P = ring.P
    Pc = P[idx]
    d = ring.d
    dr = d[:, None]
    dcol = d[None, :]
    best_lo = np.full((N, N), np.inf)
    _, Shi = ring.norm_bounds(Pc[:, None, :] + Pc[None, :, :])
    S4 = _max4(Shi)
    phi = np.full((N, N), np.inf)
    for lam in lams:
        _, Nh = ring.norm_bounds(Pc[:, None, :] - lam * Pc[None, :, :])
        phi = np.minimum(phi, _max4(Nh) + lam * (c + dcol))
    phi = phi + dr
    best_lo = np.maximum(1.0 - 0.5 * ((S4 + dr) + dcol), 1.0 - phi)
    flat = best_lo.reshape(-1)
    lo = max(float(flat.min()) - ROUND_SLACK, 0.0)
    # attained side: exact dual functionals on node pairs near the best cells
    top = np.argsort(flat, kind="stable")[:64]
    ci, cj = np.unravel_index(top, (N, N))
    pairs = []
    for i, j in zip(ci, cj):
        for a in (i, (i + 1) % N):
            for b in (j, (j + 1) % N):
                pairs.append((a, b))
    pairs = list(dict.fromkeys(pairs))
    dual = ring.dual()
    G = dual.P
    X = np.array([P[a] for a, _ in pairs]) / space.norms(np.array([P[a] for a, _ in pairs]))[:, None]
    Y = np.array([P[b] for _, b in pairs]) / space.norms(np.array([P[b] for _, b in pairs]))[:, None]
    gy = Y @ G.T
    gx = X @ G.T
    feas = gy <= c + WITNESS_TOL
    fx = np.where(feas, gx, -np.inf)
    k = np.argmax(fx, axis=1)
    fbest = fx[np.arange(len(pairs)), k]
    sxy = space.norms(X + Y)
    vals = np.maximum(1.0 - 0.5 * sxy, 1.0 - fbest)
    m = int(np.argmin(vals))
    hi = float(vals[m])
    notes = {}
    if not np.isfinite(hi):
        notes["feasible"] = "no dual node met f(y) <= 1 - eps on the candidate pairs"
        x = _unit(space, P[0])
        y = -x
        f = ring.A[0]
        hi = 1.0
    else:
        x, y, f = X[m], Y[m], G[k[m]]
    hi = max(hi, lo)
    return ModulusEstimate(
        "delta_uacs_tilde", eps, lo, hi, Witness(x, y, np.array(f, dtype=float)), ring.certified,
        _resolution(ring, {"lambdas": LAMBDA_COUNT, "dual_nodes": int(G.shape[0])}), notes,
    )


# -- rho_uacs over the ball ---------------------------------------------------------------------

BALL_RADII = (0.0, 0.25, 0.5, 0.75, 1.0)


def rho_uacs_ball(space: NormedSpace, tau: float, n: int) -> ModulusEstimate:
    """Upper side from rho_X (the objective is convex, so its max over B x B sits on S x S)."""
    up = rho(space, tau, n, constrained=False)
    base = rho(space, tau, n, constrained=True)
    lo, wit = base.lo, base.witness
    P = unit_circle(128)
    P = P / space.norms(P)[:, None]
    thr = 2.0 * (1.0 - tau)
    best = -math.inf
    arg = None
    for r in BALL_RADII:
        for s in BALL_RADII:
            Xs = r * P[:, None, :]
            Ys = s * P[None, :, :]
            ok = space.norms(Xs + Ys) >= thr
            v = 0.5 * (space.norms(Xs + tau * Ys) + space.norms(Xs - tau * Ys)) - 1.0
            v = np.where(ok, v, -np.inf)
            k = int(np.argmax(v))
            if v.flat[k] > best:
                best = float(v.flat[k])
                i, j = np.unravel_index(k, v.shape)
                arg = (r * P[i], s * P[j])
    if arg is not None and best > lo:
        lo, wit = best, Witness(arg[0], arg[1])
    return ModulusEstimate(
        "rho_uacs_ball", tau, min(lo, up.hi), up.hi, wit, up.certified, up.resolution,
        {"hi": "rho_X bound", "ball_radii": list(BALL_RADII)},
    )


# -- polish ----------------------------------------------------------------------------------

POLISH_ITERS = 50


def _point(space, th):
    e = np.array([math.cos(th), math.sin(th)])
    return e / space.norm(e)


def polish(space: NormedSpace, est: ModulusEstimate, n: int) -> ModulusEstimate:
    """Coordinate descent on the two witness angles; only ever improves the attained side."""
    kind = est.kind
    if est.witness is None or est.witness.y is None or space.bounds is not None:
        return est
    if kind == "delta_uacs" and not (space.support2d is not None and space.support_exact):
        return est
    if kind not in ("delta_X", "delta_uacs", "rho_X", "rho_uacs", "nonsquareness"):
        return est
    x0, y0 = est.witness.x, est.witness.y
    arg = est.argument
    sign = 1.0 if kind.startswith("delta") else -1.0  # minimize sign * value

    def value(x, y):
        if kind == "delta_X":
            if space.norm(x - y) < arg:
                return None
            return 1.0 - 0.5 * space.norm(x + y), None
        if kind == "delta_uacs":
            cone = space.support2d(x[None, :])
            fs = [cone.a[0], cone.b[0]]
            f = min(fs, key=lambda g: float(g @ y))
            if float(f @ y) > 1.0 - arg:
                return None
            return 1.0 - 0.5 * space.norm(x + y), f
        if kind in ("rho_X", "rho_uacs"):
            if kind == "rho_uacs" and space.norm(x + y) < 2.0 * (1.0 - arg):
                return None
            return 0.5 * (space.norm(x + arg * y) + space.norm(x - arg * y)) - 1.0, None
        return 0.5 * min(space.norm(x + y), space.norm(x - y)), None

    tx = math.atan2(x0[1], x0[0])
    ty = math.atan2(y0[1], y0[0])
    cur = value(_point(space, tx), _point(space, ty))
    if cur is None:
        return est
    cv, cf = cur
    step = 2.0 * math.pi / n
    for _ in range(POLISH_ITERS):
        moved = False
        for dx, dy in ((step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)):
            cand = value(_point(space, tx + dx), _point(space, ty + dy))
            if cand is not None and sign * cand[0] < sign * cv:
                cv, cf = cand
                tx, ty = tx + dx, ty + dy
                moved = True
                break
        if not moved:
            step *= 0.5
    x, y = _point(space, tx), _point(space, ty)
    # plain float evaluation: pad toward the conservative side
    cv = cv + sign * ROUND_SLACK
    if kind.startswith("delta"):
        if cv >= est.hi or cv < est.lo - 1e-12:
            return est
        f = cf if cf is not None else est.witness.f
        return ModulusEstimate(kind, arg, est.lo, max(cv, est.lo), Witness(x, y, f), est.certified, est.resolution,
                               {**est.notes, "polished": True})
    if cv <= est.lo or cv > est.hi + 1e-12:
        return est
    return ModulusEstimate(kind, arg, min(cv, est.hi), est.hi, Witness(x, y), est.certified, est.resolution,
                           {**est.notes, "polished": True})
