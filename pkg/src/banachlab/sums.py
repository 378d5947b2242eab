"""Absolute sums [X_1 + ... + X_m]_E, the dual-type norm E' and property (u+)."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .catalog import AbsoluteNorm, build_absolute, parse_catalog
from .estimate import ModulusEstimate, Witness
from .normcore.ops import equivalence_constants, numeric_gradient
from .normcore.ring import planar_ring
from .normcore.sampling import directions
from .normcore.space import DimensionError, DomainError, Functional, NormedSpace, as_vec


@dataclass(frozen=True, eq=False)
class SumSpace(NormedSpace):
    components: tuple = ()
    E: Optional[AbsoluteNorm] = None

    @property
    def total_dim(self) -> int:
        return self.dim

    @property
    def slices(self):
        out, k = [], 0
        for X in self.components:
            out.append(slice(k, k + X.dim))
            k += X.dim
        return out

    def split(self, v):
        v = np.asarray(v, dtype=float)
        return [v[..., s] for s in self.slices]

    def component_norms(self, V):
        return np.stack([X.norms(part) for X, part in zip(self.components, self.split(V))], axis=-1)

    def embed(self, i: int, v) -> np.ndarray:
        """v in X_i placed in slot i, zeros elsewhere."""
        out = np.zeros(self.dim)
        out[self.slices[i]] = as_vec(v, self.components[i].dim)
        return out


def _sum_subgrad(components, E, slices):
    if E.subgrad is None:
        gE = lambda a: numeric_gradient(E.as_space(), a)  # noqa: E731
    else:
        gE = E.subgrad
    subs = [X.subgrad for X in components]

    def subgrad(v):
        v = np.asarray(v, dtype=float)
        parts = [v[s] for s in slices]
        a = np.array([X.norm(p) for X, p in zip(components, parts)])
        g = np.abs(np.asarray(gE(a), dtype=float))
        out = np.zeros_like(v)
        for i, (X, p, s) in enumerate(zip(components, parts, slices)):
            if a[i] > 0.0:
                out[s] = g[i] * np.asarray(subs[i](p), dtype=float)
        return out

    return subgrad


def build_sum(components, E: AbsoluteNorm) -> SumSpace:
    """The norm ||(x_i)|| = ||(||x_i||)_i||_E on the concatenated coordinates."""
    components = tuple(components)
    if not components:
        raise DomainError("a sum needs at least one component")
    if E.dim != len(components):
        raise DimensionError(f"E has dimension {E.dim} but there are {len(components)} components")
    if not E.certified:
        raise DomainError(f"E = {E.label} failed its absolute/normalized checks: {list(E.failures)}")
    dims = [X.dim for X in components]
    slices, k = [], 0
    for d in dims:
        slices.append(slice(k, k + d))
        k += d

    def ev(V):
        V = np.asarray(V, dtype=float)
        a = np.stack([X.norms(V[..., s]) for X, s in zip(components, slices)], axis=-1)
        return E.norms(a)

    subgrad = None
    if all(X.subgrad is not None for X in components):
        subgrad = _sum_subgrad(components, E, slices)

    # max_i ||x_i|| <= ||x|| <= sum_i ||x_i||, then the component constants
    eqs = [equivalence_constants(X) for X in components]
    m = len(components)
    c = min(e.c for e in eqs) / math.sqrt(m)
    C = max(e.C for e in eqs) * math.sqrt(m)

    p = E.meta.get("p")
    iso = p == 2.0 and all(X.meta.get("isotropic") for X in components)
    smooth = p is not None and 1.0 < p < math.inf and all(X.meta.get("smooth") for X in components)
    meta = {
        "family": "sum",
        "isotropic": iso,
        "smooth": smooth,
        "spec": f"sum(E={E.label}; " + ", ".join(X.meta.get("spec", X.label) for X in components) + ")",
    }
    dual_p = E.meta.get("dual_p")
    exacts = [X.meta.get("dual_exact") for X in components]
    if dual_p is not None and all(e is not None for e in exacts):
        Ep = build_absolute("lp", m, dual_p)

        def dual_exact(f):
            f = np.asarray(f, dtype=float)
            return float(Ep([ex(f[s]) for ex, s in zip(exacts, slices)]))

        meta["dual_exact"] = dual_exact
    label = f"[{' + '.join(X.label for X in components)}]_{E.label}"
    return SumSpace(
        dim=sum(dims),
        evaluator=ev,
        label=label,
        subgrad=subgrad,
        equiv=(c, C),
        certified_eval=all(X.exact for X in components),
        meta=meta,
        components=components,
        E=E,
    )


# -- E' ------------------------------------------------------------------------------------

E_PRIME_SAMPLES = 2048


def _orthant_sphere(E: AbsoluteNorm, resolution: int):
    """Points of S_E in the closed nonnegative orthant."""
    m = E.dim
    if m == 1:
        return np.array([[1.0 / E([1.0])]])
    if m == 2:
        th = 0.5 * np.pi * np.arange(resolution + 1) / resolution
        B = np.stack([np.cos(th), np.sin(th)], axis=-1)
        B[0], B[-1] = [1.0, 0.0], [0.0, 1.0]
    else:
        B = np.unique(np.abs(np.asarray(directions(m, resolution))), axis=0)
    return B / E.norms(B)[:, None]


def e_prime(E: AbsoluteNorm, resolution: int = E_PRIME_SAMPLES) -> AbsoluteNorm:
    """||a||_E' = sup{sum |a_i b_i| : b in B_E}."""
    if not E.certified:
        raise DomainError(f"E = {E.label} is not certified absolute and normalized")
    dual_p = E.meta.get("dual_p")
    if dual_p is not None:
        return build_absolute("lp", E.dim, dual_p)
    B = _orthant_sphere(E, int(resolution))

    def ev(A):
        A = np.abs(np.asarray(A, dtype=float))
        return np.max(A @ B.T, axis=-1)

    out = build_absolute("custom", E.dim, evaluator=ev, label=f"{E.label}'")
    out.meta["support_points"] = B
    return out


def pair_sum_functional(fs) -> Functional:
    """(f_1, ..., f_m) acting on the sum by sum_i f_i(x_i)."""
    parts = [np.asarray(f.coords if isinstance(f, Functional) else f, dtype=float).ravel() for f in fs]
    if not parts:
        raise DimensionError("need at least one functional")
    return Functional(np.concatenate(parts))


def check_pairing_dims(space: SumSpace, fs):
    dims = [np.asarray(f.coords if isinstance(f, Functional) else f).size for f in fs]
    if dims != [X.dim for X in space.components]:
        raise DimensionError(f"functional dims {dims} do not match components {[X.dim for X in space.components]}")


# -- property (u+) --------------------------------------------------------------------------


@dataclass(frozen=True)
class UPlusResult:
    value: float
    delta: float
    eps: float
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    feasible_pairs: int
    notes: dict = field(default_factory=dict)

    @property
    def within_eps(self) -> bool:
        return self.value <= self.eps

    def __float__(self):
        return float(self.value)

    def to_dict(self):
        return {
            "value": float(self.value),
            "delta": float(self.delta),
            "eps": float(self.eps),
            "within_eps": bool(self.within_eps),
            "witness": {"a": self.a.tolist(), "b": self.b.tolist(), "c": self.c.tolist()},
            "feasible_pairs": int(self.feasible_pairs),
            "notes": dict(self.notes),
        }


U_PLUS_RESOLUTION = 2048


def _norming_orthant(E: AbsoluteNorm, resolution: int):
    """Orthant sphere points of E with the extreme norming functionals at each."""
    m = E.dim
    if m == 2:
        n = 4 * resolution
        ring = planar_ring(E.as_space(), n)
        q = n // 4 + 1  # nodes with angle in [0, pi/2]
        P = ring.P[:q] / E.norms(ring.P[:q])[:, None]
        return P, [ring.A[:q], ring.B[:q]]
    P = _orthant_sphere(E, resolution)
    sp = E.as_space()
    g = E.subgrad if E.subgrad is not None else (lambda a: numeric_gradient(sp, a))
    return P, [np.array([np.asarray(g(a), dtype=float) for a in P])]


def u_plus_violation(E: AbsoluteNorm, delta: float, eps: float, resolution: int = U_PLUS_RESOLUTION) -> UPlusResult:
    """max of sum |c_i||a_i - b_i| over a, b in S_E with ||a+b|| >= 2(1-delta), c norming a."""
    delta, eps = float(delta), float(eps)
    if not (delta > 0.0 and eps > 0.0):
        raise DomainError("delta and eps must be positive")
    P, Fs = _norming_orthant(E, int(resolution))
    thr = 2.0 * (1.0 - delta)
    best = (-math.inf, None)
    feasible = 0
    rows = max(1, (1 << 20) // P.shape[0])
    for i0 in range(0, P.shape[0], rows):
        A = P[i0 : i0 + rows, None, :]
        ok = E.norms(A + P[None, :, :]) >= thr
        feasible += int(ok.sum())
        D = np.abs(A - P[None, :, :])
        for F in Fs:
            C = np.abs(F[i0 : i0 + rows, None, :])
            V = np.where(ok, np.sum(C * D, axis=-1), -np.inf)
            k = int(np.argmax(V))
            v = float(V.reshape(-1)[k])
            if v > best[0]:
                i, j = divmod(k, P.shape[0])
                best = (v, (P[i0 + i], P[j], np.abs(F[i0 + i])))
    if best[1] is None:
        raise DomainError("no feasible pair at this resolution")
    a, b, c = best[1]
    return UPlusResult(best[0], delta, eps, a.copy(), b.copy(), c.copy(), feasible, {"method": "orthant grid maximum"})


# -- componentwise moduli ----------------------------------------------------------------


def min_component_uacs(components, eps: float, resolution: int | None = None) -> ModulusEstimate:
    """Interval minimum of the components' delta_uacs enclosures."""
    from .moduli import delta_uacs

    ests = [delta_uacs(X, eps, resolution) for X in components]
    k = int(np.argmin([e.hi for e in ests]))
    lo = min(e.lo for e in ests)
    return ModulusEstimate(
        "delta_uacs", float(eps), lo, ests[k].hi, ests[k].witness, all(e.certified for e in ests),
        dict(ests[k].resolution), {"component": k, "method": "componentwise minimum"},
    )


def lift_witness(space: SumSpace, i: int, est: ModulusEstimate) -> ModulusEstimate:
    """Move a component's witness into slot i; E normalized keeps all norms unchanged."""
    w = est.witness
    if w is None:
        raise DomainError("estimate carries no witness")
    x = space.embed(i, w.x)
    y = None if w.y is None else space.embed(i, w.y)
    f = None if w.f is None else space.embed(i, w.f)
    if est.kind.startswith("delta") and y is not None:
        val = 1.0 - 0.5 * space.norm(x + y)
        hi, lo = val, min(est.lo, val)
    else:
        lo, hi = est.lo, est.hi
    return ModulusEstimate(est.kind, est.argument, lo, hi, Witness(x, y, f), False, dict(est.resolution),
                           {"lifted_from": i})


def sum_delta_uacs(space: SumSpace, eps: float, resolution: int | None = None) -> ModulusEstimate:
    """delta_uacs of the sum, improved by lifting each component's witness."""
    from .moduli import delta_uacs

    base = delta_uacs(space, eps, resolution)
    best = base
    for i, X in enumerate(space.components):
        if X.dim < 2:
            continue
        lifted = lift_witness(space, i, delta_uacs(X, eps, resolution))
        if lifted.hi < best.hi:
            best = ModulusEstimate("delta_uacs", base.argument, min(base.lo, lifted.hi), lifted.hi, lifted.witness,
                                   base.certified, dict(base.resolution), {**base.notes, **lifted.notes})
    return best


# -- sum-spec text ---------------------------------------------------------------------------

_SUM = re.compile(r"^\s*sum\s*\(\s*E\s*=\s*(.+?)\s*;(.*)\)\s*$")


def _split_top(text: str):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        parts.append("".join(cur).strip())
    return parts


def parse_absolute(text: str) -> AbsoluteNorm:
    t = text.strip()
    if t.startswith("catalog:"):
        t = t[len("catalog:") :]
    m = re.match(r"^lp\s*\(\s*([0-9]+)\s*,\s*([^)]+)\)$", t)
    if not m:
        raise DomainError(f"E must be an lp norm spec, got {text!r}")
    tok = m.group(2).strip().lower()
    p = math.inf if tok in ("inf", "infinity", "oo") else float(tok)
    return build_absolute("lp", int(m.group(1)), p)


def parse_sum(text: str) -> SumSpace:
    """Parse 'sum(E=catalog:lp(m,p); <space>, <space>, ...)'."""
    m = _SUM.match(text)
    if not m:
        raise DomainError(f"cannot parse sum spec {text!r}")
    E = parse_absolute(m.group(1))
    comps = [parse_catalog(s) for s in _split_top(m.group(2))]
    return build_sum(comps, E)
