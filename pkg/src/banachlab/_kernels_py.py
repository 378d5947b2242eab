"""Numpy versions of the scan kernels, same arithmetic order as the compiled ones."""

import numpy as np


def _max4(M):
    return np.maximum(np.maximum(M[:-1, :-1], M[:-1, 1:]), np.maximum(M[1:, :-1], M[1:, 1:]))


def _min4r(F, G):
    return np.minimum(np.minimum(F[:, :-1], F[:, 1:]), np.minimum(G[:, :-1], G[:, 1:]))


def _pick(V, want_max):
    """First row-major extremum of V (any trailing axes flatten into the order)."""
    if V.size == 0:
        return (-np.inf if want_max else np.inf), (-1,) * (V.ndim)
    flat = V.reshape(-1)
    k = int(np.argmax(flat) if want_max else np.argmin(flat))
    v = float(flat[k])
    if not np.isfinite(v) and (v < 0) == want_max:
        return v, (-1,) * V.ndim
    return v, np.unravel_index(k, V.shape)


def scan_delta_x(Shi, Dhi, Slo, Dlo, dr, dc, pr, pc, eps):
    b, W = Shi.shape[0] - 1, Shi.shape[1] - 1
    dr, dc = np.asarray(dr)[:b, None], np.asarray(dc)[None, :W]
    pr, pc = np.asarray(pr)[:b, None], np.asarray(pc)[None, :W]
    m = (_max4(Dhi) + dr) + dc
    v = 1.0 - 0.5 * ((_max4(Shi) + dr) + dc)
    best, (br, bc) = _pick(np.where(m >= eps, v, np.inf), False)
    m = (Dlo[:b, :W] - pr) - pc
    v = 1.0 - 0.5 * ((Slo[:b, :W] - pr) - pc)
    nbest, (nr, nc) = _pick(np.where(m >= eps, v, np.inf), False)
    return best, int(br), int(bc), nbest, int(nr), int(nc)


def scan_rho(Qhi, Qlo, Shi, Slo, dr, dc, pr, pc, tau, thr, constrained):
    b, W = Qhi.shape[0] - 1, Qhi.shape[1] - 1
    dr, dc = np.asarray(dr)[:b, None], np.asarray(dc)[None, :W]
    pr, pc = np.asarray(pr)[:b, None], np.asarray(pc)[None, :W]
    v = ((0.5 * _max4(Qhi) - 1.0) + dr) + tau * dc
    if constrained:
        v = np.where(((_max4(Shi) + dr) + dc) >= thr, v, -np.inf)
    best, (br, bc) = _pick(v, True)
    v = ((0.5 * Qlo[:b, :W] - 1.0) - pr) - tau * pc
    if constrained:
        v = np.where(((Slo[:b, :W] - pr) - pc) >= thr, v, -np.inf)
    nbest, (nr, nc) = _pick(v, True)
    return best, int(br), int(bc), nbest, int(nr), int(nc)


def scan_ns(Shi, Dhi, Slo, Dlo, dr, dc, pr, pc):
    b, W = Shi.shape[0] - 1, Shi.shape[1] - 1
    dr, dc = np.asarray(dr)[:b, None], np.asarray(dc)[None, :W]
    pr, pc = np.asarray(pr)[:b, None], np.asarray(pc)[None, :W]
    v = 0.5 * ((np.minimum(_max4(Shi), _max4(Dhi)) + dr) + dc)
    best, (br, bc) = _pick(v, True)
    v = 0.5 * ((np.minimum(Slo[:b, :W], Dlo[:b, :W]) - pr) - pc)
    nbest, (nr, nc) = _pick(v, True)
    return best, int(br), int(bc), nbest, int(nr), int(nc)


def _cone_low(w, k):
    with np.errstate(invalid="ignore"):
        return np.where(w < 0.0, k * w, w)


def scan_uacs(Shi, Slo, FA, FB, GA, GB, K, dr, dc, pr, pc, eps, XA0, XB0, XA1, XB1, XK, has_ext):
    b, W = Shi.shape[0] - 1, Shi.shape[1] - 1
    c1 = 1.0 - eps
    K = np.asarray(K)[:b, None]
    dr, dc = np.asarray(dr)[:b, None], np.asarray(dc)[None, :W]
    pr, pc1 = np.asarray(pr)[:b, None], np.asarray(pc)[None, :W]
    u = _min4r(FA, FB) - dc
    if has_ext:
        XK = np.asarray(XK)
        for s, (XA, XB) in enumerate(((XA0, XB0), (XA1, XB1))):
            k = XK[:b, s : s + 1]
            w = _cone_low(_min4r(XA, XB) - dc, k)
            u = np.where(k > 0.0, np.minimum(u, w), u)
    vn = 1.0 - 0.5 * ((np.maximum(Shi[:b, :W], Shi[:b, 1:]) + pr) + dc)
    vn = np.where(u <= c1, vn, np.inf)
    w = _cone_low(_min4r(GA, GB) - dc, K)
    va = 1.0 - 0.5 * ((_max4(Shi) + dr) + dc)
    va = np.where(w <= c1, va, np.inf)
    best, (br, bc, bt) = _pick(np.stack([vn, va], axis=-1), False)
    val = 1.0 - 0.5 * ((Slo[:b, :W] - pr) - pc1)
    cand = []
    for F in (FA, FB):
        fy = F[:b, :W]
        adj = np.where(fy >= 0.0, fy / (1.0 - pc1), fy / (1.0 + pc1))
        cand.append(np.where(adj <= c1, val, np.inf))
    nbest, (nr, nc, nf) = _pick(np.stack(cand, axis=-1), False)
    return best, int(br), int(bc), int(bt), nbest, int(nr), int(nc), int(nf)
