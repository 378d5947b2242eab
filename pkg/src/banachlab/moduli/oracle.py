"""Brute-force planar oracle, independent of the ring machinery.

Grid points u_k = e_k/||e_k|| on the unit sphere, e_k on the Euclidean circle.
Every unit vector lies within eta = 2 (C/c) 2 sin(pi/(2n)) of some u_k in the
norm, so Lipschitz slack of a few eta turns grid extrema into enclosures.
"""

from __future__ import annotations

import math

import numpy as np

from ..estimate import ModulusEstimate, Witness
from ..normcore.ops import equivalence_constants
from ..normcore.space import DomainError, NormedSpace

ORACLE_KINDS = ("delta_X", "rho_X", "rho_uacs", "nonsquareness", "delta_uacs", "delta_uacs_tilde")
CHUNK = 1 << 20
FD_STEP = 1e-7


def _grid(space, n):
    th = 2.0 * np.pi * np.arange(n) / n
    E = np.stack([np.cos(th), np.sin(th)], axis=-1)
    return E / space.norms(E)[:, None]


def _one_sided(space, U):
    """Norming functionals from the two one-sided derivatives along the tangent."""
    T = np.stack([-U[:, 1], U[:, 0]], axis=-1)
    n0 = space.norms(U)
    dp = (space.norms(U + FD_STEP * T) - n0) / FD_STEP
    dm = (n0 - space.norms(U - FD_STEP * T)) / FD_STEP
    M = np.stack([U, T], axis=1)  # rows u, t
    out = []
    for d in (dm, dp):
        rhs = np.stack([np.ones_like(d), d], axis=-1)
        out.append(np.linalg.solve(M, rhs[..., None])[..., 0])
    return out


def _pairs(U, rows):
    """Yield (i0, X block, Y) covering all ordered pairs, rows at a time."""
    n = U.shape[0]
    for i0 in range(0, n, rows):
        yield i0, U[i0 : i0 + rows, None, :], U[None, :, :]


def _scan(space, U, value, gate, want_max):
    n = U.shape[0]
    rows = max(1, CHUNK // n)
    best, arg = (-math.inf if want_max else math.inf), None
    for i0, X, Y in _pairs(U, rows):
        V = value(X, Y, i0)
        G = gate(X, Y, i0)
        V = np.where(G, V, -np.inf if want_max else np.inf)
        k = int(np.argmax(V) if want_max else np.argmin(V))
        v = float(V.reshape(-1)[k])
        if (v > best) if want_max else (v < best):
            best, arg = v, (i0 + k // n, k % n)
    return best, arg


def grid_oracle_2d(space: NormedSpace, kind: str, argument=None, angle_count: int = 1024) -> ModulusEstimate:
    if space.dim != 2:
        raise DomainError("grid_oracle_2d needs a planar space")
    if kind not in ORACLE_KINDS:
        raise DomainError(f"grid_oracle_2d does not handle {kind!r}")
    n = int(angle_count)
    U = _grid(space, n)
    c, C = equivalence_constants(space)
    eta = 2.0 * (C / c) * 2.0 * math.sin(math.pi / (2.0 * n))
    certified = bool(equivalence_constants(space).certified and space.exact)
    res = {"angles": n, "eta": eta}
    N = space.norms

    if kind == "delta_X":
        eps = float(argument)
        val = lambda X, Y, i: 1.0 - 0.5 * N(X + Y)  # noqa: E731
        hi, a = _scan(space, U, val, lambda X, Y, i: N(X - Y) >= eps, False)
        lo, _ = _scan(space, U, val, lambda X, Y, i: N(X - Y) >= eps - 2.0 * eta, False)
        lo = max(lo - eta, 0.0)
        return _est(kind, eps, lo, hi, U, a, None, certified, res)

    if kind in ("rho_X", "rho_uacs"):
        tau = float(argument)
        thr = 2.0 * (1.0 - tau)
        val = lambda X, Y, i: 0.5 * (N(X + tau * Y) + N(X - tau * Y)) - 1.0  # noqa: E731
        if kind == "rho_X":
            lo, a = _scan(space, U, val, lambda X, Y, i: True, True)
            hi = lo
        else:
            lo, a = _scan(space, U, val, lambda X, Y, i: N(X + Y) >= thr, True)
            hi, _ = _scan(space, U, val, lambda X, Y, i: N(X + Y) >= thr - 4.0 * eta, True)
        hi = min(hi + eta * (1.0 + tau), tau)
        return _est(kind, tau, lo, hi, U, a, None, certified, res)

    if kind == "nonsquareness":
        val = lambda X, Y, i: 0.5 * np.minimum(N(X + Y), N(X - Y))  # noqa: E731
        lo, a = _scan(space, U, val, lambda X, Y, i: True, True)
        hi = min(lo + eta, 1.0)
        return _est(kind, None, lo, hi, U, a, None, certified, res)

    # functional-constrained kinds: norming sets come from finite differences, so heuristic
    eps = float(argument)
    Fm, Fp = _one_sided(space, U)
    res["functionals"] = "one-sided difference quotients"
    if kind == "delta_uacs":
        best = (math.inf, None, None)
        for F in (Fm, Fp):
            val = lambda X, Y, i: 1.0 - 0.5 * N(X + Y)  # noqa: E731
            gate = lambda X, Y, i, F=F: np.sum(F[i : i + X.shape[0], None, :] * Y, axis=-1) <= 1.0 - eps + 1e-12  # noqa: E731
            hi, a = _scan(space, U, val, gate, False)
            if hi < best[0]:
                best = (hi, a, F)
        hi, a, F = best
        if a is None:
            return _est(kind, eps, 0.0, 1.0, U, (0, n // 2), Fm[0], False, res)
        lo = max(hi - 2.0 * eta, 0.0)
        return _est(kind, eps, lo, hi, U, a, F[a[0]], False, res)

    # delta_uacs_tilde: f ranges over norming functionals of grid points
    best = (math.inf, None)
    S = N(U[:, None, :] + U[None, :, :])  # S[i, j] = ||u_i + u_j||
    for F in (Fm, Fp):
        FY = U @ F.T  # FY[j, k] = f_k(u_j)
        for k in range(n):
            feas = FY[:, k] <= 1.0 - eps + 1e-12
            if not feas.any():
                continue
            V = np.maximum(1.0 - 0.5 * S[:, feas], (1.0 - FY[:, k])[:, None])
            m = int(np.argmin(V))
            v = float(V.reshape(-1)[m])
            if v < best[0]:
                i, jj = divmod(m, int(feas.sum()))
                best = (v, (i, int(np.flatnonzero(feas)[jj]), F[k]))
    if best[1] is None:
        return _est(kind, eps, 0.0, 1.0, U, (0, n // 2), Fm[0], False, res)
    i, j, f = best[1]
    hi = best[0]
    return _est(kind, eps, max(hi - 2.0 * eta, 0.0), hi, U, (i, j), f, False, res)


def _est(kind, arg, lo, hi, U, a, f, certified, res):
    i, j = a
    if kind.startswith("delta"):
        # the true value is nonnegative; a negative attained value is rounding
        lo, hi = max(lo, 0.0), max(hi, 0.0)
    w = Witness(U[i].copy(), U[j].copy(), None if f is None else np.asarray(f, dtype=float))
    return ModulusEstimate(kind, arg, min(lo, hi), hi, w, certified, res, {"method": "grid oracle"})
