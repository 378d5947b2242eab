"""Concrete norms: lp, the truncated sequence-space renormings, planar arc norms, absolute norms."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .normcore.space import Cone2D, DomainError, NormedSpace

SQ2 = math.sqrt(2.0)


def _sign(x):
    return np.sign(x)


def _order_ccw(n1, n2):
    """Order two normals so that the second follows the first counter-clockwise."""
    cross = n1[..., 0] * n2[..., 1] - n1[..., 1] * n2[..., 0]
    swap = cross < 0
    a = np.where(swap[..., None], n2, n1)
    b = np.where(swap[..., None], n1, n2)
    return a, b


# -- lp -------------------------------------------------------------------------


def _lp_eval(p):
    if p == 1:
        return lambda V: np.sum(np.abs(V), axis=-1)
    if p == 2:
        return lambda V: np.sqrt(np.sum(V * V, axis=-1))
    if math.isinf(p):
        return lambda V: np.max(np.abs(V), axis=-1)

    def ev(V):
        A = np.abs(V)
        m = np.max(A, axis=-1)
        safe = np.where(m > 0, m, 1.0)
        return m * np.sum((A / safe[..., None]) ** p, axis=-1) ** (1.0 / p)

    return ev


def _lp_grad(p, ev):
    def grad(x):
        x = np.asarray(x, dtype=float)
        nx = ev(x)
        if p == 2:
            return x / nx
        r = np.abs(x) / nx
        return np.sign(x) * r ** (p - 1.0)

    return grad


def _lp_support2d(p, ev):
    if 1 < p < math.inf:
        grad = _lp_grad(p, ev)

        def support(P):
            P = np.asarray(P, dtype=float)
            G = grad(P) if P.ndim == 1 else np.stack([grad(row) for row in P.reshape(-1, 2)]).reshape(P.shape)
            k = P.shape[:-1]
            return Cone2D(a=G, b=G.copy(), scale=np.ones(k), members=np.ones(k, dtype=bool))

        return support

    if p == 1:

        def support(P):
            P = np.asarray(P, dtype=float)
            x, y = P[..., 0], P[..., 1]
            sx, sy = np.sign(x), np.sign(y)
            a = np.stack([sx, sy], axis=-1)
            b = a.copy()
            on_x = y == 0
            on_y = x == 0
            a = np.where(on_x[..., None], np.stack([sx, -sx], axis=-1), a)
            b = np.where(on_x[..., None], np.stack([sx, sx], axis=-1), b)
            a = np.where(on_y[..., None], np.stack([sy, sy], axis=-1), a)
            b = np.where(on_y[..., None], np.stack([-sy, sy], axis=-1), b)
            k = P.shape[:-1]
            return Cone2D(a=a, b=b, scale=np.ones(k), members=np.ones(k, dtype=bool))

        return support

    def support(P):
        P = np.asarray(P, dtype=float)
        x, y = P[..., 0], P[..., 1]
        ax, ay = np.abs(x), np.abs(y)
        zero = np.zeros_like(x)
        nx = np.stack([np.sign(x), zero], axis=-1)
        ny = np.stack([zero, np.sign(y)], axis=-1)
        a = np.where((ax > ay)[..., None], nx, ny)
        b = a.copy()
        corner = ax == ay
        ca, cb = _order_ccw(nx, ny)
        a = np.where(corner[..., None], ca, a)
        b = np.where(corner[..., None], cb, b)
        k = P.shape[:-1]
        return Cone2D(a=a, b=b, scale=np.ones(k), members=np.ones(k, dtype=bool))

    return support


def _conj(p):
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _p_label(p):
    if math.isinf(p):
        return "inf"
    return f"{p:g}"


def build_lp(n: int, p: float) -> NormedSpace:
    p = float(p)
    if not p >= 1:
        raise DomainError("p must be at least 1")
    n = int(n)
    if n < 1:
        raise DomainError("n must be positive")
    ev = _lp_eval(p)
    expo = abs(1.0 / p - 0.5) if not math.isinf(p) else 0.5
    k = n**expo
    equiv = (1.0, k) if p <= 2 else (1.0 / k, 1.0)
    q = _conj(p)
    dual_ev = _lp_eval(q)
    meta = {
        "family": "lp",
        "p": p,
        "smooth": 1 < p < math.inf,
        "isotropic": p == 2,
        "dual_exact": lambda f: float(dual_ev(np.asarray(f, dtype=float))),
        "dual_factory": lambda: build_lp(n, q),
        "spec": f"lp({n},{_p_label(p)})",
    }
    return NormedSpace(
        dim=n,
        evaluator=ev,
        label=f"lp({n},{_p_label(p)})",
        subgrad=_lp_grad(p, ev) if 1 < p < math.inf else None,
        equiv=equiv,
        support2d=_lp_support2d(p, ev) if n == 2 else None,
        support_exact=n == 2,
        meta=meta,
    )


# -- truncated sequence-space renormings -----------------------------------------------


def build_example_62(m: int) -> NormedSpace:
    """sqrt(|x|_1^2 + |x|_2^2) on R^m."""
    m = int(m)
    if m < 2:
        raise DomainError("m must be at least 2")

    def ev(V):
        V = np.asarray(V, dtype=float)
        s1 = np.sum(np.abs(V), axis=-1)
        s2 = np.sum(V * V, axis=-1)
        return np.sqrt(s1 * s1 + s2)

    def grad(x):
        x = np.asarray(x, dtype=float)
        return (np.sum(np.abs(x)) * np.sign(x) + x) / ev(x)

    return NormedSpace(
        dim=m,
        evaluator=ev,
        label=f"ex62({m})",
        subgrad=grad,
        equiv=(SQ2, math.sqrt(m + 1.0)),
        meta={
            "family": "ex62",
            "dual_majorant": lambda f: float(np.max(np.abs(f))),
            "spec": f"ex62({m})",
        },
    )


def default_weights(m: int) -> np.ndarray:
    return 1.0 / np.arange(1, m + 1, dtype=float)


def build_example_63(m: int, alpha: Optional[Sequence[float]] = None) -> NormedSpace:
    """max(|x_1|, |x'|_2)^2 + |Tx|_2^2 with Tx = (alpha_k x_k), alpha_1 = 1."""
    m = int(m)
    if m < 2:
        raise DomainError("m must be at least 2")
    a = default_weights(m) if alpha is None else np.array(alpha, dtype=float)
    if a.shape != (m,):
        raise DomainError(f"expected {m} weights")
    if np.any(a <= 0) or np.any(a > 1) or np.any(np.diff(a) > 0):
        raise DomainError("weights must be decreasing and lie in (0, 1]")
    if a[0] != 1.0:
        raise DomainError("the first weight must be 1")
    a2 = a * a

    def ev(V):
        V = np.asarray(V, dtype=float)
        head = np.abs(V[..., 0])
        tail = np.sqrt(np.sum(V[..., 1:] ** 2, axis=-1))
        mx = np.maximum(head, tail)
        return np.sqrt(mx * mx + np.sum(a2 * V * V, axis=-1))

    def grad(x):
        x = np.asarray(x, dtype=float)
        head = abs(x[0])
        tail = float(np.sqrt(np.sum(x[1:] ** 2)))
        d = np.zeros(m)
        if head >= tail:
            d[0] = np.sign(x[0])
            mx = head
        else:
            d[1:] = x[1:] / tail
            mx = tail
        return (mx * d + a2 * x) / ev(x)

    def major(f):
        f = np.asarray(f, dtype=float)
        f1 = abs(f[0])
        r = float(np.sqrt(np.sum(f[1:] ** 2)))
        if f1 >= r:
            return (f1 + r) / SQ2
        return math.sqrt(f1 * f1 + r * r)

    return NormedSpace(
        dim=m,
        evaluator=ev,
        label=f"ex63({m})",
        subgrad=grad,
        equiv=(1.0 / SQ2, SQ2),
        meta={"family": "ex63", "alpha": a, "dual_majorant": major, "spec": f"ex63({m})"},
    )


def build_example_64(m: int) -> NormedSpace:
    """max(|x_1|, |x'|_1) + |x|_2 on R^m."""
    m = int(m)
    if m < 2:
        raise DomainError("m must be at least 2")

    def ev(V):
        V = np.asarray(V, dtype=float)
        head = np.abs(V[..., 0])
        tail = np.sum(np.abs(V[..., 1:]), axis=-1)
        return np.maximum(head, tail) + np.sqrt(np.sum(V * V, axis=-1))

    def grad(x):
        x = np.asarray(x, dtype=float)
        head = abs(x[0])
        tail = float(np.sum(np.abs(x[1:])))
        d = np.zeros(m)
        if head >= tail:
            d[0] = np.sign(x[0])
        else:
            d[1:] = np.sign(x[1:])
        return d + x / float(np.sqrt(np.sum(x * x)))

    def major(f):
        f = np.asarray(f, dtype=float)
        f1 = abs(f[0])
        g = float(np.max(np.abs(f[1:])))
        return max(f1 / 2.0, (f1 + g) / 2.0, g)

    return NormedSpace(
        dim=m,
        evaluator=ev,
        label=f"ex64({m})",
        subgrad=grad,
        equiv=(1.0 + 1.0 / SQ2, 1.0 + math.sqrt(m)),
        meta={"family": "ex64", "dual_majorant": major, "spec": f"ex64({m})"},
    )


def build_example_65(m: int) -> NormedSpace:
    """|x|_M^2 = |x|_1^2 + |x'|_2^2 + (|x'|_1 + |x|_2)^2 on R^m."""
    m = int(m)
    if m < 2:
        raise DomainError("m must be at least 2")

    def ev(V):
        V = np.asarray(V, dtype=float)
        s1 = np.sum(np.abs(V), axis=-1)
        t1 = np.sum(np.abs(V[..., 1:]), axis=-1)
        t2 = np.sum(V[..., 1:] ** 2, axis=-1)
        s2 = np.sqrt(np.sum(V * V, axis=-1))
        inner = t1 + s2
        return np.sqrt(s1 * s1 + t2 + inner * inner)

    def grad(x):
        x = np.asarray(x, dtype=float)
        s1 = float(np.sum(np.abs(x)))
        s2 = float(np.sqrt(np.sum(x * x)))
        t1 = float(np.sum(np.abs(x[1:])))
        tail = np.concatenate([[0.0], x[1:]])
        stail = np.concatenate([[0.0], np.sign(x[1:])])
        inner = t1 + s2
        return (s1 * np.sign(x) + tail + inner * (stail + x / s2)) / ev(x)

    return NormedSpace(
        dim=m,
        evaluator=ev,
        label=f"ex65({m})",
        subgrad=grad,
        equiv=(SQ2, math.sqrt(6.0 * m)),
        meta={"family": "ex65", "dual_majorant": lambda f: float(np.max(np.abs(f))) / SQ2, "spec": f"ex65({m})"},
    )


# -- planar arc norms ----------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    start: tuple
    end: tuple


@dataclass(frozen=True)
class EllipticArc:
    """Axis-aligned elliptic arc (x, y) = center + (a cos t, b sin t), t from t0 to t1."""

    center: tuple
    a: float
    b: float
    t0: float
    t1: float

    @property
    def start(self):
        return (self.center[0] + self.a * math.cos(self.t0), self.center[1] + self.b * math.sin(self.t0))

    @property
    def end(self):
        return (self.center[0] + self.a * math.cos(self.t1), self.center[1] + self.b * math.sin(self.t1))


def circular_arc(center, r, t0, t1) -> EllipticArc:
    return EllipticArc(tuple(center), float(r), float(r), float(t0), float(t1))


def _reverse(piece):
    if isinstance(piece, Segment):
        return Segment(piece.end, piece.start)
    return EllipticArc(piece.center, piece.a, piece.b, piece.t1, piece.t0)


@dataclass(frozen=True)
class Arc2DSpec:
    """Upper half of a centrally symmetric convex boundary, as pieces from (r, 0) to (-r, 0)."""

    pieces: tuple
    name: str = "arc2d"


class _Piece:
    """Evaluation data for one boundary piece (or its reflection through the origin)."""

    def __init__(self, piece, sign):
        self.sign = sign
        if isinstance(piece, Segment):
            p0 = np.array(piece.start, dtype=float) * sign
            p1 = np.array(piece.end, dtype=float) * sign
            t = p1 - p0
            nrm = np.array([t[1], -t[0]])
            c = float(nrm @ p0)
            if c <= 0:
                raise DomainError("origin is not strictly inside the boundary")
            self.kind = "seg"
            self.f = nrm / c  # the norm is f(v) on this sector
            self.p0, self.p1 = p0, p1
        else:
            self.kind = "ell"
            self.c = np.array(piece.center, dtype=float) * sign
            self.a, self.b = float(piece.a), float(piece.b)
            self.p0 = np.array(piece.start, dtype=float) * sign
            self.p1 = np.array(piece.end, dtype=float) * sign
            if piece.t1 <= piece.t0:
                raise DomainError("elliptic arcs must run counter-clockwise")
            self.t0, self.t1 = piece.t0, piece.t1

    def norm(self, V):
        if self.kind == "seg":
            return V[..., 0] * self.f[0] + V[..., 1] * self.f[1]
        ia2, ib2 = 1.0 / (self.a * self.a), 1.0 / (self.b * self.b)
        cx, cy = self.c
        A = V[..., 0] ** 2 * ia2 + V[..., 1] ** 2 * ib2
        B = -2.0 * (V[..., 0] * cx * ia2 + V[..., 1] * cy * ib2)
        C = cx * cx * ia2 + cy * cy * ib2 - 1.0
        disc = np.sqrt(np.maximum(B * B - 4.0 * A * C, 0.0))
        # larger root lam of A lam^2 + B lam + C = 0; the norm is 1/lam
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(B <= 0, 2.0 * A / (-B + disc), (-B - disc) / (2.0 * C))
        return inv

    def normal(self, P):
        if self.kind == "seg":
            return np.broadcast_to(self.f, P.shape).copy()
        g = np.stack([(P[..., 0] - self.c[0]) / self.a**2, (P[..., 1] - self.c[1]) / self.b**2], axis=-1)
        s = g[..., 0] * P[..., 0] + g[..., 1] * P[..., 1]
        return g / s[..., None]

    def normal_at(self, which):
        P = self.p0 if which == 0 else self.p1
        return self.normal(P[None, :])[0]


def _ang(p):
    return math.atan2(p[1], p[0])


def validate_arc2d(spec: Arc2DSpec) -> tuple:
    pieces = list(spec.pieces)
    if not pieces:
        raise DomainError("empty boundary")
    if pieces[0].start[0] < 0:
        pieces = [_reverse(p) for p in reversed(pieces)]
    s0, e0 = pieces[0].start, pieces[-1].end
    if abs(s0[1]) > 1e-12 or abs(e0[1]) > 1e-12 or s0[0] <= 0:
        raise DomainError("boundary must run from (r, 0) to (-r, 0) through the upper half-plane")
    if abs(s0[0] + e0[0]) > 1e-12:
        raise DomainError("boundary is not centrally symmetric")
    for p, q in zip(pieces, pieces[1:]):
        if max(abs(p.end[0] - q.start[0]), abs(p.end[1] - q.start[1])) > 1e-12:
            raise DomainError("boundary pieces are not connected")
    for p in pieces:
        for pt in (p.start, p.end):
            if pt[1] < -1e-12:
                raise DomainError("pieces must stay in the closed upper half-plane")
    return tuple(pieces)


def build_arc2d(spec) -> NormedSpace:
    if isinstance(spec, str):
        if spec not in ARC2D_PRESETS:
            raise DomainError(f"unknown arc2d preset {spec!r}")
        spec = ARC2D_PRESETS[spec]()
    pieces = validate_arc2d(spec)
    upper = [_Piece(p, 1.0) for p in pieces]
    full = upper + [_Piece(p, -1.0) for p in pieces]
    # polar angle ranges; lower copies live in (-pi, 0]
    starts = np.array([_ang(p.p0) for p in upper])
    starts[0] = 0.0
    ends = np.array([_ang(p.p1) for p in upper])
    ends[-1] = math.pi
    if np.any(np.diff(starts) <= 0):
        raise DomainError("boundary is not star-shaped about the origin")
    # convexity: outward normal angle nondecreasing along the whole closed curve
    seq = []
    for pc in full:
        seq.append(pc.normal_at(0))
        if pc.kind == "ell":
            ts = np.linspace(pc.t0, pc.t1, 9)[1:-1]
            pts = np.stack([pc.c[0] + pc.a * np.cos(ts) * pc.sign, pc.c[1] + pc.b * np.sin(ts) * pc.sign], axis=-1)
            pts = pc.sign * np.stack([pc.c[0] * pc.sign + pc.a * np.cos(ts), pc.c[1] * pc.sign + pc.b * np.sin(ts)], axis=-1)
            seq.extend(pc.normal(pts))
        seq.append(pc.normal_at(1))
    seq = np.array(seq)
    ang = np.arctan2(seq[:, 1], seq[:, 0])
    steps = np.mod(np.diff(np.concatenate([ang, ang[:1]])) + math.pi, 2 * math.pi) - math.pi
    if np.any(steps < -1e-9) or abs(steps.sum() - 2 * math.pi) > 1e-6:
        raise DomainError("boundary is not convex")
    junction_tol = 1e-13

    def locate(V):
        y = V[..., 1]
        flip = (y < 0) | ((y == 0) & (V[..., 0] < 0))
        W = np.where(flip[..., None], -V, V)
        th = np.arctan2(W[..., 1], W[..., 0])
        idx = np.searchsorted(starts, th, side="right") - 1
        idx = np.clip(idx, 0, len(upper) - 1)
        return W, th, idx, flip

    def ev(V):
        V = np.asarray(V, dtype=float)
        W, _, idx, _ = locate(V)
        out = np.zeros(W.shape[:-1])
        for i, pc in enumerate(upper):
            sel = idx == i
            if np.any(sel):
                out[sel] = pc.norm(W[sel])
        zero = (V[..., 0] == 0) & (V[..., 1] == 0)
        return np.where(zero, 0.0, out)

    def support(P):
        P = np.asarray(P, dtype=float)
        W, th, idx, flip = locate(P)
        G = np.zeros(W.shape)
        for i, pc in enumerate(upper):
            sel = idx == i
            if np.any(sel):
                G[sel] = pc.normal(W[sel])
        a = G.copy()
        b = G.copy()
        # junctions: the normal cone spans the normals of both adjacent pieces
        for i in range(len(upper)):
            prev_n = upper[i - 1].normal_at(1) if i > 0 else -upper[-1].normal_at(1)
            here = np.abs(th - starts[i]) <= junction_tol
            if np.any(here):
                na, nb = _order_ccw(np.broadcast_to(prev_n, W[here].shape), np.broadcast_to(upper[i].normal_at(0), W[here].shape))
                a[here], b[here] = na, nb
            if i == len(upper) - 1:
                at_end = np.abs(th - math.pi) <= junction_tol
                if np.any(at_end):
                    na, nb = _order_ccw(
                        np.broadcast_to(upper[i].normal_at(1), W[at_end].shape),
                        np.broadcast_to(-upper[0].normal_at(0), W[at_end].shape),
                    )
                    a[at_end], b[at_end] = na, nb
        a = np.where(flip[..., None], -a, a)
        b = np.where(flip[..., None], -b, b)
        k = P.shape[:-1]
        return Cone2D(a=a, b=b, scale=np.ones(k), members=np.ones(k, dtype=bool))

    # exact equivalence constants are not closed-form here; computed on demand
    return NormedSpace(
        dim=2,
        evaluator=ev,
        label=f"arc2d({spec.name})",
        support2d=support,
        support_exact=True,
        meta={"family": "arc2d", "pieces": pieces, "spec": f"arc2d({spec.name})"},
    )


def preset_ex61() -> Arc2DSpec:
    # flat top from (1.5, 1.5) to (-1.5, 1.5); elliptic shoulders tangent to it,
    # meeting the x-axis at (+-3, 0) with a kink there
    b = 2.0
    a = 1.5 / math.sqrt(1.0 - (0.5 / b) ** 2)
    t0 = math.atan2(0.5 / b, 1.5 / a)
    right = EllipticArc((1.5, -0.5), a, b, t0, math.pi / 2)
    left = EllipticArc((-1.5, -0.5), a, b, math.pi / 2, math.pi - t0)
    top = Segment((1.5, 1.5), (-1.5, 1.5))
    # snap the shoulder endpoints onto the axis exactly
    return Arc2DSpec((right, top, left), name="ex61")


def preset_fig5() -> Arc2DSpec:
    r = 0.4
    cy = 2.0 - r * SQ2
    tx = r / SQ2
    ty = cy + r / SQ2
    return Arc2DSpec(
        (
            Segment((2.0, 0.0), (tx, ty)),
            circular_arc((0.0, cy), r, math.pi / 4, 3 * math.pi / 4),
            Segment((-tx, ty), (-2.0, 0.0)),
        ),
        name="fig5",
    )


ARC2D_PRESETS = {"ex61": preset_ex61, "fig5": preset_fig5}


# -- absolute norms ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AbsoluteNorm:
    dim: int
    evaluator: Callable
    label: str
    certified_absolute: bool
    certified_normalized: bool
    failures: tuple = ()
    subgrad: Optional[Callable] = None
    meta: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.certified_absolute and self.certified_normalized

    def norms(self, A):
        return np.asarray(self.evaluator(np.asarray(A, dtype=float)), dtype=float)

    def __call__(self, a) -> float:
        return float(self.norms(np.asarray(a, dtype=float)))

    def as_space(self) -> NormedSpace:
        cached = self.meta.get("_space")
        if cached is not None:
            return cached
        base = self.meta.get("space")
        if base is not None:
            sp = base
        else:
            sp = NormedSpace(dim=self.dim, evaluator=self.evaluator, label=self.label, subgrad=self.subgrad)
        self.meta["_space"] = sp
        return sp


def certify_absolute(m: int, evaluator, samples: int = 1000, tol: float = 1e-12):
    """Sampled checks of absoluteness, normalization, monotonicity and the l1/linf sandwich."""
    from .normcore.sampling import sobol_directions

    failures = []
    eye = np.eye(m)
    ne = np.asarray(evaluator(eye), dtype=float)
    normalized = True
    for i in range(m):
        if abs(ne[i] - 1.0) > tol:
            normalized = False
            failures.append({"axiom": "normalized", "witness": eye[i].tolist(), "value": float(ne[i])})
            break
    if m == 1:
        D = np.array([[1.0], [-0.5], [2.0]])
    else:
        D = np.asarray(sobol_directions(m, samples), dtype=float)
    A = np.abs(D)
    na = np.asarray(evaluator(A), dtype=float)
    absolute = True
    signs = np.where(np.asarray(sobol_directions(m, samples) if m > 1 else D, dtype=float) >= 0, 1.0, -1.0)
    signs = np.roll(signs, 1, axis=0)[: A.shape[0]]
    flipped = np.asarray(evaluator(A * signs), dtype=float)
    bad = np.abs(flipped - na) > tol * np.maximum(na, 1.0)
    if np.any(bad):
        i = int(np.argmax(bad))
        absolute = False
        failures.append({"axiom": "absolute", "witness": [A[i].tolist(), (A[i] * signs[i]).tolist()]})
    # monotone in each |a_i|: shrinking one coordinate never increases the norm
    shrink = A.copy()
    j = np.arange(A.shape[0]) % m
    shrink[np.arange(A.shape[0]), j] *= 0.5
    ns = np.asarray(evaluator(shrink), dtype=float)
    bad = ns > na * (1.0 + tol) + tol
    if np.any(bad):
        i = int(np.argmax(bad))
        absolute = False
        failures.append({"axiom": "monotone", "witness": [A[i].tolist(), shrink[i].tolist()]})
    if normalized:
        l1 = A.sum(axis=1)
        linf = A.max(axis=1)
        bad = (na < linf * (1 - tol) - tol) | (na > l1 * (1 + tol) + tol)
        if np.any(bad):
            i = int(np.argmax(bad))
            normalized = False
            failures.append({"axiom": "sandwich", "witness": A[i].tolist()})
    return absolute, normalized, tuple(failures)


def build_absolute(kind, m: int, p: float = 2.0, weights=None, evaluator=None, label=None, samples: int = 1000) -> AbsoluteNorm:
    """kind is 'lp', 'weighted-lp' or 'custom'."""
    m = int(m)
    if m < 1:
        raise DomainError("m must be positive")
    space = None
    subgrad = None
    meta = {}
    if kind == "lp":
        space = build_lp(m, p)
        ev = space.evaluator
        subgrad = space.subgrad
        name = label or f"lp({m},{_p_label(float(p))})"
        meta["dual_p"] = _conj(float(p))
        meta["p"] = float(p)
    elif kind == "weighted-lp":
        w = np.ones(m) if weights is None else np.asarray(weights, dtype=float)
        if w.shape != (m,) or np.any(w <= 0):
            raise DomainError("weights must be positive, one per coordinate")
        base = _lp_eval(float(p))
        if math.isinf(p):
            ev = lambda A, w=w: np.max(np.abs(A) * w, axis=-1)  # noqa: E731
        else:
            ev = lambda A, w=w, pp=float(p): base(np.abs(A) * w ** (1.0 / pp))  # noqa: E731
        name = label or f"wlp({m},{_p_label(float(p))})"
    elif kind == "custom":
        if evaluator is None:
            raise DomainError("custom absolute norms need an evaluator")
        ev = evaluator
        name = label or f"custom({m})"
    else:
        raise DomainError(f"unknown absolute norm kind {kind!r}")
    absolute, normalized, failures = certify_absolute(m, ev, samples)
    if space is not None:
        meta["space"] = space
    return AbsoluteNorm(m, ev, name, absolute, normalized, failures, subgrad, meta)


# -- spec strings ---------------------------------------------------------------------


def _num(tok: str) -> float:
    t = tok.strip().lower()
    if t in ("inf", "infinity", "oo"):
        return math.inf
    return float(t)


_CALL = re.compile(r"^\s*([A-Za-z0-9_]+)\s*\((.*)\)\s*$")


def parse_catalog(text: str) -> NormedSpace:
    """Parse 'catalog:<name>(<params>)'."""
    t = text.strip()
    if t.startswith("catalog:"):
        t = t[len("catalog:") :]
    mm = _CALL.match(t)
    if not mm:
        raise DomainError(f"cannot parse space spec {text!r}")
    name, args = mm.group(1), mm.group(2)
    toks = [a.strip() for a in args.split(",")] if args.strip() else []
    if name == "lp":
        if len(toks) != 2:
            raise DomainError("lp takes (n, p)")
        return build_lp(int(_num(toks[0])), _num(toks[1]))
    if name == "euclid":
        return build_lp(int(_num(toks[0])) if toks else 2, 2.0)
    if name == "ex62":
        return build_example_62(int(_num(toks[0])))
    if name == "ex63":
        m = int(_num(toks[0]))
        alpha = [float(_num(a)) for a in toks[1:]] or None
        return build_example_63(m, alpha)
    if name == "ex64":
        return build_example_64(int(_num(toks[0])))
    if name == "ex65":
        return build_example_65(int(_num(toks[0])))
    if name == "arc2d":
        if len(toks) != 1:
            raise DomainError("arc2d takes a preset name")
        return build_arc2d(toks[0])
    raise DomainError(f"unknown catalog entry {name!r}")


def catalog_entries():
    return [
        {"spec": "catalog:lp(n,p)", "description": "lp norm on R^n, 1 <= p <= inf"},
        {"spec": "catalog:ex62(m)", "description": "sqrt(|x|_1^2 + |x|_2^2) on R^m"},
        {"spec": "catalog:ex63(m[,alpha...])", "description": "max(|x1|,|x'|_2)^2 + |Tx|_2^2, default alpha_k = 1/k"},
        {"spec": "catalog:ex64(m)", "description": "max(|x1|,|x'|_1) + |x|_2 on R^m"},
        {"spec": "catalog:ex65(m)", "description": "sqrt(|x|_1^2 + |x'|_2^2 + (|x'|_1 + |x|_2)^2) on R^m"},
        {"spec": "catalog:arc2d(ex61)", "description": "flat top and bottom, smooth shoulders, kinks at (+-3, 0)"},
        {"spec": "catalog:arc2d(fig5)", "description": "diamond with rounded top and bottom vertices"},
    ]


PLANAR_CATALOG = ("lp(2,2)", "lp(2,1)", "lp(2,inf)", "arc2d(ex61)", "arc2d(fig5)")
