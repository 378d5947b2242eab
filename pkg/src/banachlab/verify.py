"""Inequality harness over argument grids, and exact replays of the sequence counterexamples.

An inequality LHS >= RHS is *verified* only in the strong direction
LHS.lo >= RHS.hi (up to VERIFY_TOL of rounding), *violated* when even
LHS.hi < RHS.lo - VERIFY_TOL, and *inconclusive* otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from mpmath import mp

from .catalog import build_example_62, build_example_63, build_example_64, build_example_65
from .classify import FAILS, HOLDS, flat_segments_2d, is_acs
from .estimate import ModulusEstimate
from .moduli import delta_uacs, delta_uacs_tilde, nonsquareness, rho_uacs, rho_uacs_ball
from .normcore import DomainError, NormedSpace, as_vec, dual_norm, dual_space, quotient_space, smoothness_gap

VERIFIED = "verified"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"

VERIFY_TOL = 1e-12
DEFAULT_RESOLUTION = 1024
EQUALITY_TOL = 1e-12
TERMINAL_GAP = 2e-2
QUOTIENT_TOL = 1e-3
QUOTIENT_RESOLUTION = 256


def _f(v):
    if v is None:
        return None
    if isinstance(v, (np.ndarray, list, tuple)):
        return [float(c) for c in np.asarray(v, dtype=float).ravel()]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, dict):
        return {str(k): _f(x) for k, x in v.items()}
    return v


@dataclass
class Interval:
    lo: float
    hi: float

    @classmethod
    def point(cls, v):
        return cls(float(v), float(v))

    @classmethod
    def of(cls, est: ModulusEstimate):
        return cls(float(est.lo), float(est.hi))

    def __add__(self, other):
        o = other if isinstance(other, Interval) else Interval.point(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    def scale(self, c):
        a, b = self.lo * c, self.hi * c
        return Interval(min(a, b), max(a, b))

    @property
    def width(self):
        return self.hi - self.lo

    def to_list(self):
        return [float(self.lo), float(self.hi)]


@dataclass
class CheckPoint:
    args: dict
    status: str
    margin: float
    lhs: Optional[Interval] = None
    rhs: Optional[Interval] = None
    witness: dict = field(default_factory=dict)
    note: str = ""

    def to_dict(self):
        return {
            "args": _f(self.args),
            "status": self.status,
            "margin": float(self.margin),
            "lhs": None if self.lhs is None else self.lhs.to_list(),
            "rhs": None if self.rhs is None else self.rhs.to_list(),
            "witness": _f(self.witness),
            "note": self.note,
        }


@dataclass
class InequalityReport:
    inequality: str
    space: str
    grid: dict
    points: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def counts(self):
        out = {VERIFIED: 0, VIOLATED: 0, INCONCLUSIVE: 0}
        for p in self.points:
            out[p.status] += 1
        return out

    @property
    def violated(self):
        return any(p.status == VIOLATED for p in self.points)

    def to_dict(self):
        return {
            "inequality": self.inequality,
            "space": self.space,
            "grid": _f(self.grid),
            "counts": self.counts(),
            "points": [p.to_dict() for p in self.points],
            "notes": _f(self.notes),
        }


def compare(args, lhs: Interval, rhs: Interval, witness=None, note="") -> CheckPoint:
    """Status for lhs >= rhs under the strong verification rule."""
    margin = lhs.lo - rhs.hi
    if margin >= -VERIFY_TOL:
        status = VERIFIED
    elif lhs.hi < rhs.lo - VERIFY_TOL:
        status = VIOLATED
    else:
        status = INCONCLUSIVE
    return CheckPoint(args, status, margin, lhs, rhs, witness or {}, note)


def vacuous(args, note="hypothesis not met") -> CheckPoint:
    return CheckPoint(args, INCONCLUSIVE, 0.0, None, None, {}, "vacuous: " + note)


def _label(space):
    return space.meta.get("spec") or space.label or "X"


def _witness(est: ModulusEstimate):
    return est.witness.to_dict() if est.witness is not None else {}


def _delta_at(space, eps, resolution) -> Interval:
    """delta_uacs at eps, with delta(0) = 0 and monotonicity for eps beyond 2."""
    if eps <= 0.0:
        return Interval(0.0, 0.0)
    return Interval.of(delta_uacs(space, min(eps, 2.0), resolution))


# -- planar inequalities -----------------------------------------------------------------


def check_delta_rho(space: NormedSpace, eps_grid, tau_grid, resolution: int | None = DEFAULT_RESOLUTION) -> InequalityReport:
    """delta_uacs(eps) >= (eps tau - 2 rho_uacs(tau)) / (2 (tau + 1))."""
    rep = InequalityReport("delta_rho", _label(space), {"eps": list(eps_grid), "tau": list(tau_grid)})
    for eps in eps_grid:
        d = delta_uacs(space, eps, resolution)
        for tau in tau_grid:
            r = rho_uacs(space, tau, resolution)
            den = 2.0 * (tau + 1.0)
            rhs = Interval((eps * tau - 2.0 * r.hi) / den, (eps * tau - 2.0 * r.lo) / den)
            rep.points.append(compare({"eps": eps, "tau": tau}, Interval.of(d), rhs, _witness(d)))
    return rep


def check_delta_tilde_rho(space: NormedSpace, eps_grid, resolution: int | None = DEFAULT_RESOLUTION,
                          fraction: float = 0.49) -> InequalityReport:
    """2 rho_uacs(tau) <= tau eps whenever 2 tau < tilde delta_uacs(eps)."""
    rep = InequalityReport("delta_tilde_rho", _label(space), {"eps": list(eps_grid)}, notes={"tau_fraction": fraction})
    for eps in eps_grid:
        dt = delta_uacs_tilde(space, eps, resolution)
        if dt.lo <= 0.0:
            rep.points.append(vacuous({"eps": eps}, "tilde delta_uacs lower bound is zero"))
            continue
        tau = fraction * dt.lo
        r = rho_uacs(space, tau, resolution)
        pt = compare({"eps": eps, "tau": tau}, Interval.point(tau * eps), Interval.of(r).scale(2.0), _witness(r))
        rep.points.append(pt)
    return rep


def check_lipschitz_delta_uacs(space: NormedSpace, eps_grid, resolution: int | None = DEFAULT_RESOLUTION) -> InequalityReport:
    """|delta(e) - delta(e')| <= |e - e'| / min(e, e') for adjacent grid points in (0, 1)."""
    grid = sorted(float(e) for e in eps_grid if 0.0 < e < 1.0)
    rep = InequalityReport("lipschitz_delta_uacs", _label(space), {"eps": grid})
    for a, b in zip(grid, grid[1:]):
        da, db = Interval.of(delta_uacs(space, a, resolution)), Interval.of(delta_uacs(space, b, resolution))
        diff_hi = max(da.hi - db.lo, db.hi - da.lo)
        diff_lo = max(0.0, da.lo - db.hi, db.lo - da.hi)
        bound = (b - a) / a
        rep.points.append(compare({"eps": a, "eps2": b}, Interval.point(bound), Interval(diff_lo, diff_hi)))
    return rep


def check_dual_inequalities(space: NormedSpace, eps_grid, tau_grid, resolution: int | None = DEFAULT_RESOLUTION,
                            dual: NormedSpace | None = None) -> dict:
    """Three sub-reports pairing the space with its dual."""
    Xs = dual if dual is not None else dual_space(space)
    label = _label(space)
    grid = {"eps": list(eps_grid), "tau": list(tau_grid)}
    r1 = InequalityReport("dual_i", label, grid)
    r2 = InequalityReport("dual_ii", label, grid)
    r3 = InequalityReport("dual_iii", label, {"eps": list(eps_grid)})
    for eps in eps_grid:
        d = Interval.of(delta_uacs(space, eps, resolution))
        ds = Interval.of(delta_uacs(Xs, eps, resolution))
        for tau in tau_grid:
            rhs = Interval.point(0.5 * tau * eps)
            rs = Interval.of(rho_uacs(Xs, tau, resolution))
            r1.points.append(compare({"eps": eps, "tau": tau}, d + rs, rhs))
            rb = Interval.of(rho_uacs_ball(space, tau, resolution))
            r2.points.append(compare({"eps": eps, "tau": tau}, ds + rb, rhs))
        # delta is nondecreasing, so the inner enclosure brackets the outer value
        inner_lo, inner_hi = _delta_at(Xs, ds.lo, resolution), _delta_at(Xs, ds.hi, resolution)
        r3.points.append(compare({"eps": eps}, d, Interval(inner_lo.lo, inner_hi.hi)))
    for r in (r1, r2, r3):
        r.notes["dual"] = Xs.label
        _dual_hint(r, resolution)
    return {"i": r1, "ii": r2, "iii": r3}


def _dual_hint(rep, resolution):
    if any(p.status == INCONCLUSIVE for p in rep.points):
        rep.notes["hint"] = f"raise the angle resolution above {resolution or DEFAULT_RESOLUTION}"


def check_superreflexivity_criterion(space: NormedSpace, t_grid, resolution: int | None = DEFAULT_RESOLUTION,
                                     tol: float = 1e-9) -> InequalityReport:
    """rho_uacs(t) < t/2 for some t forces non-squareness, and its contrapositive."""
    ns = nonsquareness(space, resolution)
    rep = InequalityReport("superreflexivity", _label(space), {"t": list(t_grid)},
                           notes={"nonsquareness": [ns.lo, ns.hi]})
    square = ns.lo >= 1.0 - tol
    for t in t_grid:
        r = rho_uacs(space, t, resolution)
        args = {"t": t}
        if r.hi < 0.5 * t:
            # 1 - NS >= 0 must hold strictly
            pt = compare(args, Interval.point(1.0), Interval.of(ns), _witness(r), "rho_uacs(t) < t/2 forces NS < 1")
            if ns.hi < 1.0:
                pt.status, pt.margin = VERIFIED, 1.0 - ns.hi
            elif ns.lo >= 1.0:
                pt.status, pt.margin = VIOLATED, 1.0 - ns.lo
            else:
                pt.status, pt.margin = INCONCLUSIVE, 1.0 - ns.hi
            rep.points.append(pt)
        elif square:
            rep.points.append(compare(args, Interval.of(r), Interval.point(0.5 * t), _witness(r),
                                      "NS = 1 forces rho_uacs(t) >= t/2"))
        else:
            rep.points.append(vacuous(args, "rho_uacs(t) >= t/2 and NS < 1"))
    return rep


# -- sequence replays -------------------------------------------------------------------------

REPLAY_MAX_DIM = 4096
REPLAY_DUAL_SAMPLES = 64
REPLAY_DPS = 50


@dataclass
class SequenceReplay:
    example: int
    n: int
    dim: int
    quantities: dict
    equalities: dict
    limits: dict
    bounds: dict
    float_check: float = 0.0

    def to_dict(self):
        return {
            "example": self.example,
            "n": self.n,
            "dim": self.dim,
            "quantities": _f(self.quantities),
            "equalities": _f(self.equalities),
            "limits": _f(self.limits),
            "bounds": _f(self.bounds),
            "float_check": float(self.float_check),
        }


def _e(dim, i):
    v = np.zeros(dim)
    v[i] = 1.0
    return v


def _bound(space, f, cap=1.0):
    est = dual_norm(space, np.array([float(c) for c in f]), REPLAY_DUAL_SAMPLES)
    return {"dual_norm": [est.lo, est.hi], "cap": cap, "certified": est.certified}


# norms evaluated in 50-digit arithmetic, then rounded once to double


def _l1(v):
    return mp.fsum(abs(c) for c in v)


def _l2(v):
    return mp.sqrt(mp.fsum(c * c for c in v))


def _norm62(v):
    return mp.sqrt(_l1(v) ** 2 + _l2(v) ** 2)


def _norm63(v):
    head, tail = abs(v[0]), _l2(v[1:])
    # default weights alpha_k = 1/k
    tv = mp.fsum((c / (k + 1)) ** 2 for k, c in enumerate(v))
    return mp.sqrt(max(head, tail) ** 2 + tv)


def _norm64(v):
    return max(abs(v[0]), _l1(v[1:])) + _l2(v)


def _norm65(v):
    return mp.sqrt(_l1(v) ** 2 + _l2(v[1:]) ** 2 + (_l1(v[1:]) + _l2(v)) ** 2)


def _dot(f, v):
    return mp.fsum(a * b for a, b in zip(f, v))


def _add(u, v, s=1):
    return [a + s * b for a, b in zip(u, v)]


def _scal(c, v):
    return [c * a for a in v]


def _float_check(space, norm, vectors):
    """Largest gap between the double-precision catalog norm and the exact evaluation."""
    return max(abs(space.norm(np.array([float(c) for c in v])) - float(norm(v))) for v in vectors)


def _replay_62(n, bounds=True):
    with mp.workdps(REPLAY_DPS):
        dim = 2 * n
        beta = 2 / mp.sqrt(4 * n * n + 2 * n)
        x = [beta if i % 2 == 0 else mp.mpf(0) for i in range(dim)]
        y = [mp.mpf(0) if i % 2 == 0 else beta for i in range(dim)]
        f = [mp.mpf(1) if i % 2 == 0 else mp.mpf(0) for i in range(dim)]
        nx = _norm62(x)
        q = {
            "beta": beta,
            "norm_x": nx,
            "norm_y": _norm62(y),
            "norm_x_plus_y": _norm62(_add(x, y)),
            "norm_x_sq": nx * nx,
            "f_x": _dot(f, x),
            "f_y": _dot(f, y),
        }
        eq = {
            "norm_x_plus_y": mp.mpf(2),
            "norm_x_sq": mp.mpf(2 * n + 2) / (2 * n + 1),
            "norm_y": nx,
            "f_x": 2 * n / mp.sqrt(4 * n * n + 2 * n),
            "f_y": mp.mpf(0),
        }
        X = build_example_62(dim)
        chk = _float_check(X, _norm62, (x, y, _add(x, y)))
    lim = {"norm_x": (1.0, "decreasing"), "norm_y": (1.0, "decreasing"), "f_x": (1.0, "increasing")}
    return dim, q, eq, lim, ({"f": _bound(X, f)} if bounds else {}), chk


def _replay_63(n, bounds=True):
    with mp.workdps(REPLAY_DPS):
        dim = n
        a = 1 / mp.sqrt(2)
        e1 = [mp.mpf(1)] + [mp.mpf(0)] * (dim - 1)
        en = [mp.mpf(0)] * (dim - 1) + [mp.mpf(1)]
        x = _scal(a, e1)
        xn, yn = _scal(a, _add(e1, en)), _scal(a, _add(e1, en, -1))
        fn = _scal(a, _add(e1, en))
        q = {
            "norm_x": _norm63(x),
            "norm_x_n": _norm63(xn),
            "norm_y_n": _norm63(yn),
            "sum_minus_2x": max(abs(c) for c in _add(_add(xn, yn), _scal(2, x), -1)),
            "norm_x_n_minus_y_n": _norm63(_add(xn, yn, -1)),
            "f_n_x_n": _dot(fn, xn),
            "f_n_y_n": _dot(fn, yn),
        }
        eq = {"norm_x": mp.mpf(1), "sum_minus_2x": mp.mpf(0), "f_n_x_n": mp.mpf(1), "f_n_y_n": mp.mpf(0)}
        X = build_example_63(dim)
        chk = _float_check(X, _norm63, (x, xn, yn))
    lim = {
        "norm_x_n": (1.0, "decreasing"),
        "norm_y_n": (1.0, "decreasing"),
        "norm_x_n_minus_y_n": (math.sqrt(2.0), "decreasing"),
    }
    return dim, q, eq, lim, ({"f_n": _bound(X, fn)} if bounds else {}), chk


def _replay_64(n, bounds=True):
    with mp.workdps(REPLAY_DPS):
        dim = n + 1
        x = [mp.mpf(1)] + [mp.mpf(0)] * n
        xn = [mp.mpf(1)] + [mp.mpf(1) / n] * n
        yn = [mp.mpf(1)] + [-mp.mpf(1) / n] * n
        f = [mp.mpf(1)] * dim
        q = {
            "norm_x": _norm64(x),
            "norm_x_n": _norm64(xn),
            "norm_y_n": _norm64(yn),
            "sum_minus_2x": max(abs(c) for c in _add(_add(xn, yn), _scal(2, x), -1)),
            "f_x_n": _dot(f, xn),
            "f_y_n": _dot(f, yn),
        }
        eq = {"norm_x": mp.mpf(2), "sum_minus_2x": mp.mpf(0), "f_x_n": mp.mpf(2), "f_y_n": mp.mpf(0)}
        X = build_example_64(dim)
        chk = _float_check(X, _norm64, (x, xn, yn))
    lim = {"norm_x_n": (2.0, "decreasing"), "norm_y_n": (2.0, "decreasing")}
    return dim, q, eq, lim, ({"f": _bound(X, f)} if bounds else {}), chk


def _replay_65(n, bounds=True):
    with mp.workdps(REPLAY_DPS):
        dim = n + 1
        x = [mp.mpf(1)] + [mp.mpf(0)] * n
        xn = [mp.mpf(0)] + [mp.mpf(1) / n] * n
        r2 = mp.sqrt(2)
        f = [mp.mpf(0)] + [r2] * n
        q = {
            "norm_x": _norm65(x),
            "norm_x_n": _norm65(xn),
            "norm_x_n_plus_x": _norm65(_add(xn, x)),
            "f_x_n": _dot(f, xn),
            "f_x": _dot(f, x),
        }
        eq = {"norm_x": r2, "f_x_n": r2, "f_x": mp.mpf(0)}
        X = build_example_65(dim)
        chk = _float_check(X, _norm65, (x, xn, _add(xn, x)))
    lim = {"norm_x_n": (math.sqrt(2.0), "decreasing"), "norm_x_n_plus_x": (2.0 * math.sqrt(2.0), "decreasing")}
    return dim, q, eq, lim, ({"f": _bound(X, f)} if bounds else {}), chk


_REPLAYS = {62: (_replay_62, 1), 63: (_replay_63, 2), 64: (_replay_64, 1), 65: (_replay_65, 1)}


def replay_example(example: int, n_max: int = 64) -> list:
    """Evaluate the explicit vectors and functionals of one counterexample for n up to n_max."""
    if example not in _REPLAYS:
        raise DomainError(f"no replay for example {example!r}; choose from 62, 63, 64, 65")
    n_max = int(n_max)
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    fn, n0 = _REPLAYS[example]
    if 2 * n_max > REPLAY_MAX_DIM:
        raise DomainError(f"n_max = {n_max} exceeds the dimension budget {REPLAY_MAX_DIM}")
    out = []
    last = max(n0, n_max)
    for n in range(n0, last + 1):
        # the dual-norm search is the slow part; run it at powers of two and at the end
        dim, q, eq, lim, bd, chk = fn(n, n == last or n & (n - 1) == 0)
        with mp.workdps(REPLAY_DPS):
            eqs = {k: {"value": float(q[k]), "target": float(t), "error": float(abs(q[k] - t))} for k, t in eq.items()}
        qf = {k: float(v) for k, v in q.items()}
        lims = {k: {"value": qf[k], "limit": L, "direction": d} for k, (L, d) in lim.items()}
        out.append(SequenceReplay(example, n, dim, qf, eqs, lims, bd, chk))
    return out


def summarize_replays(replays, tol: float = EQUALITY_TOL, terminal_gap: float = TERMINAL_GAP) -> dict:
    """Per-claim verdicts: equalities at every n, monotone trend and terminal gap for limits, dual bounds."""
    if not replays:
        raise DomainError("no replays to summarize")
    out = {"example": replays[0].example, "n_max": replays[-1].n, "claims": {}}
    claims = out["claims"]
    for name in replays[0].equalities:
        err = max(r.equalities[name]["error"] for r in replays)
        claims[name] = {"kind": "equality", "max_error": err, "ok": bool(err <= tol)}
    for name, first in replays[0].limits.items():
        vals = np.array([r.limits[name]["value"] for r in replays])
        step = np.diff(vals)
        slack = 4e-16 * np.maximum(1.0, np.abs(vals[1:]))
        mono = bool(np.all(step <= slack)) if first["direction"] == "decreasing" else bool(np.all(step >= -slack))
        gap = abs(float(vals[-1]) - first["limit"])
        claims[name] = {
            "kind": "limit", "limit": first["limit"], "direction": first["direction"],
            "monotone": mono, "terminal_gap": gap, "ok": bool(mono and gap < terminal_gap),
        }
    checked = [r for r in replays if r.bounds]
    for name in checked[-1].bounds:
        worst = max(r.bounds[name]["dual_norm"][1] - r.bounds[name]["cap"] for r in checked)
        claims[name] = {"kind": "dual_norm_bound", "max_excess": worst, "checked_at": [r.n for r in checked],
                        "ok": bool(worst <= 1e-6)}
    fc = max(r.float_check for r in replays)
    claims["double_precision_norms"] = {"kind": "float_check", "max_error": fc, "ok": bool(fc <= tol)}
    out["ok"] = all(c["ok"] for c in claims.values())
    return out


# -- quotients and duals ----------------------------------------------------------------------


def _quotient_bases(dim, count, seed):
    """Coordinate subspaces first, then seeded random ones; each of codimension two."""
    k = dim - 2
    bases = []
    if k == 1:
        bases = [_e(dim, i)[None, :] for i in range(dim)][::-1]
    rng = np.random.default_rng(seed)
    while len(bases) < count:
        bases.append(rng.standard_normal((k, dim)))
    return bases[:count]


def check_quotient_acs(space: NormedSpace, sample_count: int = 20, tol: float = QUOTIENT_TOL,
                       resolution: int = QUOTIENT_RESOLUTION, seed: int = 0) -> InequalityReport:
    """The dual is acs iff every two-dimensional quotient is acs."""
    if space.dim < 3:
        raise DomainError("quotient checks need dimension at least 3")
    dual = dual_space(space)
    dv = is_acs(dual, tol, resolution)
    rep = InequalityReport("quotient_acs", _label(space), {"samples": int(sample_count), "seed": int(seed)},
                           notes={"dual": dual.label, "dual_acs": dv.status, "tol": tol, "resolution": resolution})
    found_fail = False
    for i, U in enumerate(_quotient_bases(space.dim, int(sample_count), seed)):
        Q = quotient_space(space, list(U))
        qv = is_acs(Q, tol, resolution)
        args = {"index": i, "U": [list(map(float, u)) for u in U]}
        wit = qv.to_dict()["witness"]
        if qv.status == FAILS:
            found_fail = True
        if INCONCLUSIVE in (qv.status, dv.status):
            pt = CheckPoint(args, INCONCLUSIVE, 0.0, witness=wit, note=f"quotient {qv.status}, dual {dv.status}")
        elif dv.status == HOLDS:
            ok = qv.status == HOLDS
            pt = CheckPoint(args, VERIFIED if ok else VIOLATED, 0.0 if ok else -1.0, witness=wit,
                            note="dual acs, quotient " + qv.status)
        elif qv.status == FAILS:
            pt = CheckPoint(args, VERIFIED, 0.0, witness=wit, note="dual not acs, quotient not acs")
        else:
            pt = CheckPoint(args, INCONCLUSIVE, 0.0, note="dual not acs, this quotient acs")
        rep.points.append(pt)
    rep.notes["quotient_failure_found"] = found_fail
    if dv.status == FAILS:
        st = VERIFIED if found_fail else INCONCLUSIVE
        rep.points.append(CheckPoint({"aggregate": "some quotient fails"}, st, 0.0,
                                     note="dual not acs requires a quotient that is not acs"))
    return rep


# -- sums ---------------------------------------------------------------------------------------


def check_sum_theorems(space, eps_grid, resolution: int | None = None, tol: float = 1e-4) -> InequalityReport:
    """acs and uacs pass to finite absolute sums; a degenerate component degenerates the sum."""
    from .sums import SumSpace, min_component_uacs, parse_sum, sum_delta_uacs

    S = parse_sum(space) if isinstance(space, str) else space
    if not isinstance(S, SumSpace):
        raise DomainError("check_sum_theorems needs a sum space")
    E_acs = is_acs(S.E.as_space(), tol).status
    comp = [is_acs(X, tol).status for X in S.components]
    rep = InequalityReport("sum_theorems", _label(S), {"eps": list(eps_grid)},
                           notes={"E_acs": E_acs, "components_acs": comp})
    all_hold = E_acs == HOLDS and all(c == HOLDS for c in comp)
    for eps in eps_grid:
        args = {"eps": eps}
        m = min_component_uacs(S.components, eps, resolution)
        s = sum_delta_uacs(S, eps, resolution)
        if m.hi <= VERIFY_TOL:
            # lifting a component witness gives delta_sum <= delta_component
            pt = compare(args, Interval.point(m.hi), Interval(s.lo, s.hi), _witness(s),
                         "degenerate component lifts to the sum")
            rep.points.append(pt)
        elif all_hold:
            pt = compare(args, Interval(s.lo, s.hi), Interval.point(0.0), _witness(s),
                         "acs components over an acs E")
            if s.lo <= 0.0:
                pt.status = VIOLATED if s.hi <= VERIFY_TOL else INCONCLUSIVE
            pt.witness["certified"] = s.certified
            pt.witness["component_min"] = [m.lo, m.hi]
            rep.points.append(pt)
        else:
            rep.points.append(vacuous(args, "E or a component is not acs"))
    return rep


# -- dual-free characterizations ------------------------------------------------------------------

CHAR_T = (1e-3, 1e-4, 1e-5)


def _limit(fn, ts=CHAR_T):
    """Richardson-corrected limit at t -> 0+ of a difference quotient."""
    q = [fn(t) for t in ts]
    r = ts[-2] / ts[-1]
    return float((r * q[-1] - q[-2]) / (r - 1.0))


def _derivative_minus(space, x, y):
    return _limit(lambda t: (space.norm(x - t * y) - 1.0) / t)


def _p_variant(space, x, y, p):
    iv = _limit(lambda t: (space.norm(x + t * y) ** p + space.norm(x - t * y) ** p - 2.0) / t**p)
    v = _limit(lambda t: ((1.0 + t) ** p + space.norm(x - t * y) ** p - 2.0) / t**p)
    return iv, v


def _flat_pairs(space, segs, samples):
    pairs = []
    for s in segs:
        a, b = as_vec(s["start"], 2), as_vec(s["end"], 2)
        pairs.append((a, b))
        pairs.append((b, a))
        for w in np.linspace(0.0, 1.0, samples + 2)[1:-1]:
            p = (1.0 - w) * a + w * b
            p = p / space.norm(p)
            pairs.append((p, b))
            pairs.append((p, a))
    return [(x, y) for x, y in pairs if space.norm(x + y) >= 2.0 - 1e-8 and not np.allclose(x, y)]


def check_acs_characterizations(space: NormedSpace, pair_samples: int = 4, tol: float = 1e-4,
                                resolution: int | None = None) -> InequalityReport:
    """Smoothness along flat pairs: the symmetric, one-sided and p-power limits."""
    rep = InequalityReport("acs_characterizations", _label(space), {"pair_samples": int(pair_samples)})
    v = is_acs(space, tol, resolution)
    rep.notes["acs"] = v.status
    if v.status == FAILS:
        x, y, f = (as_vec(v.witness[k], space.dim) for k in ("x", "y", "f"))
        need = 1.0 - float(f @ y)
        gap = smoothness_gap(space, x, y)
        der = _derivative_minus(space, x, y)
        # a norming f with f(y) < 1 forces gap >= 1 - f(y) and derivative >= -f(y)
        pt = compare({"pair": "acs witness"}, Interval.point(gap), Interval.point(need - tol),
                     {"x": x, "y": y, "f": f}, "witness pair must violate the smoothness limit")
        pt.witness.update({"gap": gap, "derivative": der})
        if pt.status == VERIFIED and der + 1.0 < need - tol:
            pt.status = INCONCLUSIVE
        rep.points.append(pt)
        return rep
    if space.dim != 2:
        rep.points.append(vacuous({}, "flat pairs are searched in the plane only"))
        return rep
    pairs = _flat_pairs(space, flat_segments_2d(space, resolution), int(pair_samples))
    if not pairs:
        rep.points.append(vacuous({}, "no flat pairs"))
        return rep
    if v.status != HOLDS:
        rep.points.append(vacuous({}, "acs is inconclusive"))
        return rep
    for k, (x, y) in enumerate(pairs):
        gap = smoothness_gap(space, x, y)
        der = _derivative_minus(space, x, y)
        pv = {p: _p_variant(space, x, y, p) for p in (1, 2)}
        best_p = min(max(abs(a), abs(b)) for a, b in pv.values())
        err = max(gap, abs(der + 1.0), best_p)
        status = VERIFIED if err <= tol else (VIOLATED if err > 100.0 * tol else INCONCLUSIVE)
        rep.points.append(CheckPoint({"pair": k}, status, tol - err, None, None,
                                     {"x": x, "y": y, "gap": gap, "derivative": der,
                                      "p1": list(pv[1]), "p2": list(pv[2])}))
    return rep


# -- batch harness --------------------------------------------------------------------------------

HARNESS_EPS = (0.25, 0.5, 1.0, 1.5)
HARNESS_TAU = (0.1, 0.25, 0.5)
HARNESS_SPACES = ("lp(2,2)", "lp(2,1)", "lp(2,inf)", "arc2d(ex61)", "arc2d(fig5)")
INEQUALITIES = ("delta_rho", "delta_tilde_rho", "lipschitz_delta_uacs", "dual", "superreflexivity")


def run_inequalities(space: NormedSpace, eps_grid=HARNESS_EPS, tau_grid=HARNESS_TAU,
                     resolution: int | None = DEFAULT_RESOLUTION, which=INEQUALITIES) -> list:
    out = []
    for name in which:
        if name == "delta_rho":
            out.append(check_delta_rho(space, eps_grid, tau_grid, resolution))
        elif name == "delta_tilde_rho":
            out.append(check_delta_tilde_rho(space, eps_grid, resolution))
        elif name == "lipschitz_delta_uacs":
            out.append(check_lipschitz_delta_uacs(space, eps_grid, resolution))
        elif name == "dual":
            out.extend(check_dual_inequalities(space, eps_grid, tau_grid, resolution).values())
        elif name == "superreflexivity":
            out.append(check_superreflexivity_criterion(space, tau_grid, resolution))
        else:
            raise DomainError(f"unknown inequality {name!r}")
    return out


def harness_summary(reports) -> dict:
    tot = {VERIFIED: 0, VIOLATED: 0, INCONCLUSIVE: 0}
    for r in reports:
        for k, v in r.counts().items():
            tot[k] += v
    n = sum(tot.values())
    return {"points": n, **tot, "strong_rate": tot[VERIFIED] / n if n else 0.0}


def involution_error(space: NormedSpace, count: int = 100, seed: int = 0) -> dict:
    """Largest relative gap between ||x|| and the bidual norm over seeded random vectors."""
    bidual = dual_space(dual_space(space))
    X = np.random.default_rng(seed).standard_normal((int(count), space.dim))
    a = space.norms(X)
    b = bidual.norms(X)
    rel = np.abs(b - a) / a
    k = int(np.argmax(rel))
    return {"space": _label(space), "samples": int(count), "max_rel_error": float(rel[k]), "worst": X[k].tolist()}
