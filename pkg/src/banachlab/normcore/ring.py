"""Polygonal sandwich of a planar unit sphere.

A ring holds N points P_k on the unit sphere in counter-clockwise order,
the endpoints A_k, B_k of the norming-functional segment at each P_k, and
for every arc P_k -> P_{k+1} a triangle (P_k, P_{k+1}, apex_k) that contains
the true arc.  The apex is where the supporting lines B_k(x) = 1 and
A_{k+1}(x) = 1 meet.  Any point of the arc lies within `d[k]` (in norm) of
the chord, and every norming functional of a point inside the arc lies in
the cone spanned by B_k and A_{k+1}, scaled by a factor in [1, K_k].

The same data describes the dual sphere exactly: the functionals A_k, B_k
are dual unit vectors, the dual arcs between B_k and A_{k+1} are sandwiched
by the lines h(P_k) = 1 and h(P_{k+1}) = 1.  `Ring.dual()` builds that ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .space import Cone2D, NormedSpace

FLAT_TOL = 1e-12
ROUND = 4e-16
TWO_PI = 2.0 * np.pi


def unit_circle(n: int) -> np.ndarray:
    """n directions at angles 2*pi*k/n; exactly symmetric when 8 divides n."""
    if n % 8:
        th = TWO_PI * np.arange(n) / n
        return np.stack([np.cos(th), np.sin(th)], axis=-1)
    q = n // 8
    th = TWO_PI * np.arange(q + 1) / n
    c, s = np.cos(th), np.sin(th)
    c[q] = s[q] = np.sqrt(0.5)
    first = np.stack([c, s], axis=-1)  # angles 0 .. pi/4
    second = first[q - 1 :: -1][:, ::-1]  # pi/4 .. pi/2, exclusive of pi/4
    quarter = np.concatenate([first, second[:-1]], axis=0)[: 2 * q]
    out = [quarter]
    for _ in range(3):
        quarter = np.stack([-quarter[:, 1], quarter[:, 0]], axis=-1)
        out.append(quarter)
    E = np.concatenate(out, axis=0)
    E[E == 0.0] = 0.0
    return E


def dot2(F, X):
    return F[..., 0] * X[..., 0] + F[..., 1] * X[..., 1]


def arc_scale(p, q):
    """Largest radial scale of the dual arc over its chord, given p = A_{k+1}(P_k), q = B_k(P_{k+1})."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    flat = (p >= 1.0 - FLAT_TOL) | (q >= 1.0 - FLAT_TOL)
    with np.errstate(divide="ignore", invalid="ignore"):
        den = 2.0 - p - q
        K = 1.0 / (p + (1.0 - p) ** 2 / den)
    K = np.where(flat, 1.0, K)
    # p <= 0 only happens on absurdly coarse rings; no finite bound then
    K = np.where((~flat) & ((p <= 0.0) | ~np.isfinite(K) | (K < 1.0)), np.inf, K)
    return K


def numeric_cone(space: NormedSpace, P: np.ndarray, t: float = 1e-7) -> Cone2D:
    """Norming-functional endpoints from one-sided difference quotients.

    Convexity makes forward quotients overestimate one-sided derivatives, so
    the returned cone contains the true one up to rounding.
    """
    P = np.asarray(P, dtype=float)
    W = np.stack([-P[..., 1], P[..., 0]], axis=-1)
    n0 = space.norms(P)
    dp = (space.norms(P + t * W) - n0) / t
    dm = (space.norms(P - t * W) - n0) / t
    det = dot2(P, P)

    def solve(d):
        return np.stack([(P[..., 0] * n0 - P[..., 1] * d) / det, (P[..., 1] * n0 + P[..., 0] * d) / det], axis=-1)

    a = solve(-dm)
    b = solve(dp)
    k = P.shape[:-1]
    return Cone2D(a=a, b=b, scale=np.ones(k), members=np.zeros(k, dtype=bool))


def space_cone(space: NormedSpace, P: np.ndarray) -> tuple[Cone2D, bool]:
    if space.support2d is not None:
        return space.support2d(P), bool(space.support_exact)
    return numeric_cone(space, P), False


@dataclass(eq=False)
class Ring:
    P: np.ndarray  # (N, 2) nodes
    pte: np.ndarray  # (N,) bound on | ||P_k|| - 1 |
    A: np.ndarray  # (N, 2) first norming functional at P_k
    B: np.ndarray  # (N, 2) last norming functional at P_k
    XA: np.ndarray  # (N, 2, 2) optional extension cones of the node's norming set
    XB: np.ndarray
    XK: np.ndarray  # (N, 2), 0 when the extension slot is unused
    apex: np.ndarray  # (N, 2), nan for flat arcs
    CA: np.ndarray  # (N, 2) cone of norming functionals inside arc k
    CB: np.ndarray
    Ka: np.ndarray  # (N,)
    d: np.ndarray  # (N,) distance bound from arc k to its chord
    bounds_fn: Callable
    certified: bool
    label: str = ""

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def norm_bounds(self, V):
        return self.bounds_fn(np.asarray(V, dtype=float))

    def cell_radius(self) -> np.ndarray:
        """Distance bound from any sphere point in arc k-1 or k to the node P_k."""
        chord = self.norm_bounds(np.roll(self.P, -1, axis=0) - self.P)[1]
        r = chord + self.d
        return np.maximum(r, np.roll(r, 1))

    # -- support function --------------------------------------------------
    @property
    def _angles(self):
        cached = self.__dict__.get("_ang")
        if cached is None:
            seq = np.empty((2 * self.n, 2))
            seq[0::2] = self.A
            seq[1::2] = self.B
            ang = np.unwrap(np.arctan2(seq[:, 1], seq[:, 0]))
            ang = np.maximum.accumulate(ang)
            cached = ang
            self.__dict__["_ang"] = cached
        return cached

    def locate(self, F: np.ndarray):
        """Return (k, in_node) with F normal to P_k (in_node) or to a point of arc k."""
        F = np.asarray(F, dtype=float)
        ang = self._angles
        base = ang[0]
        psi = np.arctan2(F[..., 1], F[..., 0])
        s = base + np.mod(psi - base, TWO_PI)
        pos = np.searchsorted(ang, s, side="right") - 1
        pos = np.clip(pos, 0, 2 * self.n - 1)
        return pos // 2, (pos % 2) == 0

    def support(self, F):
        """Enclosure of sup{F(x) : ||x|| <= 1} and the maximizing node index."""
        F = np.asarray(F, dtype=float)
        k, node = self.locate(F)
        kn = (k + 1) % self.n
        vk = dot2(F, self.P[k])
        vn = dot2(F, self.P[kn])
        ap = self.apex[k]
        flat = np.isnan(ap[..., 0])
        va = np.where(flat, -np.inf, dot2(F, np.where(flat[..., None], 0.0, ap)))
        lo = np.where(node, vk, np.maximum(vk, vn))
        hi = np.where(node, vk, np.maximum(np.maximum(vk, vn), va))
        mag = np.abs(F[..., 0]) + np.abs(F[..., 1])
        pk = np.where(node, self.pte[k], np.maximum(self.pte[k], self.pte[kn]))
        slack = (pk + ROUND) * mag * np.maximum(1.0, np.abs(self.P).max())
        lo = np.maximum(lo - slack, 0.0)
        hi = hi + slack
        best = np.where(node | (vk >= vn), k, kn)
        zero = mag == 0
        lo = np.where(zero, 0.0, lo)
        hi = np.where(zero, 0.0, hi)
        return lo, hi, best

    # -- dual ring ---------------------------------------------------------
    def dual(self, subdiv: float | None = None) -> "Ring":
        return _dual_ring(self, subdiv)


def _same(f, g):
    return np.all(np.abs(f - g) <= 1e-12 * max(1.0, np.abs(f).max()))


def _arc_geometry(P, A, B, bounds_fn, pte):
    """Apexes, J-cones and chord distances of the arcs P_k -> P_{k+1}."""
    N = P.shape[0]
    Pn = np.roll(P, -1, axis=0)
    An = np.roll(A, -1, axis=0)
    p = dot2(An, P)
    q = dot2(B, Pn)
    flat = (p >= 1.0 - FLAT_TOL) | (q >= 1.0 - FLAT_TOL)
    det = B[:, 0] * An[:, 1] - B[:, 1] * An[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        apex = np.stack([(An[:, 1] - B[:, 1]) / det, (B[:, 0] - An[:, 0]) / det], axis=-1)
    bad = ~np.all(np.isfinite(apex), axis=-1)
    flat = flat | bad
    apex[flat] = np.nan
    K = arc_scale(p, q)
    K = np.where(flat, 1.0, K)
    mid = 0.5 * (P + Pn)
    d = np.zeros(N)
    nf = ~flat
    if nf.any():
        d[nf] = bounds_fn(apex[nf] - mid[nf])[1]
    pmax = np.maximum(pte, np.roll(pte, -1))
    d = d + pmax + np.where(flat, FLAT_TOL * 4, 0.0)
    return apex, K, d, flat


def build_ring(P, pte, A, B, bounds_fn, certified, label="", XA=None, XB=None, XK=None) -> Ring:
    N = P.shape[0]
    apex, K, d, flat = _arc_geometry(P, A, B, bounds_fn, pte)
    if XA is None:
        XA = np.zeros((N, 2, 2))
        XB = np.zeros((N, 2, 2))
        XK = np.zeros((N, 2))
    return Ring(
        P=P, pte=pte, A=A, B=B, XA=XA, XB=XB, XK=XK, apex=apex,
        CA=B.copy(), CB=np.roll(A, -1, axis=0), Ka=K, d=d,
        bounds_fn=bounds_fn, certified=certified, label=label,
    )


def planar_ring(space: NormedSpace, n: int) -> Ring:
    """Ring on the angular grid of n directions (n divisible by 8 hits axes and diagonals)."""
    if space.ring_factory is not None:
        return space.ring_factory(n)
    return _planar_ring_cached(space, int(n))


@lru_cache(maxsize=32)
def _planar_ring_cached(space: NormedSpace, n: int) -> Ring:
    if space.dim != 2:
        raise ValueError("rings are planar")
    E = unit_circle(n)
    lo, hi = space.norm_bounds(E)
    mid = 0.5 * (lo + hi)
    P = E / mid[:, None]
    pte = (hi - lo) / (2.0 * mid) + ROUND
    cone, exact = space_cone(space, P)
    A = np.array(cone.a, dtype=float)
    B = np.array(cone.b, dtype=float)
    return build_ring(P, pte, A, B, space.norm_bounds, certified=exact and space.exact, label=space.label)


def _dual_ring(ring: Ring, subdiv: float | None) -> Ring:
    N = ring.n
    P, A, B = ring.P, ring.A, ring.B
    chords = ring.norm_bounds(np.roll(P, -1, axis=0) - P)[1]
    h = float(np.median(chords)) if subdiv is None else float(subdiv)

    def dnorm(F):
        return ring.support(F)[1]

    # emit dual nodes: (functional, first X node, last X node, interior flag)
    nodes = []
    for k in range(N):
        pts = [A[k]]
        if not _same(A[k], B[k]):
            m = int(np.ceil(float(dnorm(B[k] - A[k])) / h)) if h > 0 else 1
            m = max(1, min(m, 4096))
            for s in range(1, m):
                t = s / m
                pts.append((1.0 - t) * A[k] + t * B[k])
            pts.append(B[k])
        for idx, g in enumerate(pts):
            interior = 0 < idx < len(pts) - 1
            if nodes and not interior and not nodes[-1][3] and _same(nodes[-1][0], g):
                nodes[-1][2] = k
            else:
                nodes.append([np.array(g, dtype=float), k, k, interior])
    if len(nodes) > 1 and not nodes[-1][3] and not nodes[0][3] and _same(nodes[-1][0], nodes[0][0]):
        last = nodes.pop()
        nodes[0][1] = last[1]
    M = len(nodes)
    G = np.array([nd[0] for nd in nodes])
    # a dual node's face is a run of X nodes P_{k1}..P_{k2}
    k1 = np.array([nd[1] for nd in nodes])
    k2 = np.array([nd[2] for nd in nodes])
    interior = np.array([nd[3] for nd in nodes])
    Xscale = ring.Ka
    DA = P[k1].copy()
    DB = P[k2].copy()
    XA = np.zeros((M, 2, 2))
    XB = np.zeros((M, 2, 2))
    XK = np.zeros((M, 2))
    for m in range(M):
        if interior[m]:
            continue
        a, b = k1[m], k2[m]
        if _same(A[a], G[m]):
            kb = (a - 1) % N
            XA[m, 0] = P[kb]
            XB[m, 0] = P[a]
            XK[m, 0] = Xscale[kb]
        if _same(B[b], G[m]):
            XA[m, 1] = P[b]
            XB[m, 1] = P[(b + 1) % N]
            XK[m, 1] = Xscale[b]
    # arcs between consecutive dual nodes
    Gn = np.roll(G, -1, axis=0)
    same_x = np.zeros(M, dtype=bool)
    for m in range(M):
        mn = (m + 1) % M
        same_x[m] = k2[m] == k1[mn]
    apex = np.full((M, 2), np.nan)
    CA = np.empty((M, 2))
    CB = np.empty((M, 2))
    Ka = np.ones(M)
    for m in range(M):
        if same_x[m]:
            CA[m] = P[k2[m]]
            CB[m] = P[k2[m]]
            continue
        k = k2[m]
        kn = (k + 1) % N
        CA[m] = P[k]
        CB[m] = P[kn]
        Ka[m] = Xscale[k]
        pk, pn = P[k], P[kn]
        p = float(Gn[m] @ pk)
        q = float(G[m] @ pn)
        if p >= 1.0 - FLAT_TOL or q >= 1.0 - FLAT_TOL:
            continue
        det = pk[0] * pn[1] - pk[1] * pn[0]
        if det == 0.0:
            continue
        apex[m] = [(pn[1] - pk[1]) / det, (pk[0] - pn[0]) / det]
    flat = np.isnan(apex[:, 0])
    d = np.zeros(M)
    mid = 0.5 * (G + Gn)
    if (~flat).any():
        d[~flat] = dnorm(apex[~flat] - mid[~flat])
    d = d + np.where(flat, FLAT_TOL * 4, 0.0) + ROUND

    def bounds_fn(V):
        lo, hi, _ = ring.support(V)
        return lo, hi

    return Ring(
        P=G, pte=np.full(M, ROUND), A=DA, B=DB, XA=XA, XB=XB, XK=XK, apex=apex,
        CA=CA, CB=CB, Ka=Ka, d=d, bounds_fn=bounds_fn, certified=ring.certified,
        label=(ring.label + "*") if ring.label else "",
    )
