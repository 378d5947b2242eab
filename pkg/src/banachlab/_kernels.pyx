# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Fused cell scans over blocks of pairwise norm tables.

Every table has shape (b+1, W+1): row r and column c hold the value for the
node pair (i0 + r, j0 + c).  Cell (r, c) is the product of arc i0+r and arc
j0+c, whose corners are (r..r+1) x (c..c+1).  Node scans use entry (r, c)
for r < b, c < W.  Ties keep the first hit in row-major order, which the
numpy fallback reproduces exactly.
"""

from libc.math cimport INFINITY


cdef inline double max2(double a, double b) nogil:
    return a if a >= b else b


cdef inline double min2(double a, double b) nogil:
    return a if a <= b else b


cdef inline double max4(const double[:, :] M, Py_ssize_t r, Py_ssize_t c) nogil:
    return max2(max2(M[r, c], M[r, c + 1]), max2(M[r + 1, c], M[r + 1, c + 1]))


cdef inline double min4r(const double[:, :] F, const double[:, :] G, Py_ssize_t r, Py_ssize_t c) nogil:
    return min2(min2(F[r, c], F[r, c + 1]), min2(G[r, c], G[r, c + 1]))


def scan_delta_x(const double[:, :] Shi, const double[:, :] Dhi, const double[:, :] Slo,
                 const double[:, :] Dlo, const double[:] dr, const double[:] dc,
                 const double[:] pr, const double[:] pc, double eps):
    cdef Py_ssize_t b = Shi.shape[0] - 1, W = Shi.shape[1] - 1, r, c
    cdef double best = INFINITY, nbest = INFINITY, m, v
    cdef Py_ssize_t br = -1, bc = -1, nr = -1, nc = -1
    with nogil:
        for r in range(b):
            for c in range(W):
                m = (max4(Dhi, r, c) + dr[r]) + dc[c]
                if m >= eps:
                    v = 1.0 - 0.5 * ((max4(Shi, r, c) + dr[r]) + dc[c])
                    if v < best:
                        best = v; br = r; bc = c
                m = (Dlo[r, c] - pr[r]) - pc[c]
                if m >= eps:
                    v = 1.0 - 0.5 * ((Slo[r, c] - pr[r]) - pc[c])
                    if v < nbest:
                        nbest = v; nr = r; nc = c
    return best, br, bc, nbest, nr, nc


def scan_rho(const double[:, :] Qhi, const double[:, :] Qlo, const double[:, :] Shi,
             const double[:, :] Slo, const double[:] dr, const double[:] dc,
             const double[:] pr, const double[:] pc, double tau, double thr, bint constrained):
    cdef Py_ssize_t b = Qhi.shape[0] - 1, W = Qhi.shape[1] - 1, r, c
    cdef double best = -INFINITY, nbest = -INFINITY, m, v
    cdef Py_ssize_t br = -1, bc = -1, nr = -1, nc = -1
    with nogil:
        for r in range(b):
            for c in range(W):
                if (not constrained) or ((max4(Shi, r, c) + dr[r]) + dc[c]) >= thr:
                    v = ((0.5 * max4(Qhi, r, c) - 1.0) + dr[r]) + tau * dc[c]
                    if v > best:
                        best = v; br = r; bc = c
                if (not constrained) or ((Slo[r, c] - pr[r]) - pc[c]) >= thr:
                    v = ((0.5 * Qlo[r, c] - 1.0) - pr[r]) - tau * pc[c]
                    if v > nbest:
                        nbest = v; nr = r; nc = c
    return best, br, bc, nbest, nr, nc


def scan_ns(const double[:, :] Shi, const double[:, :] Dhi, const double[:, :] Slo,
            const double[:, :] Dlo, const double[:] dr, const double[:] dc,
            const double[:] pr, const double[:] pc):
    cdef Py_ssize_t b = Shi.shape[0] - 1, W = Shi.shape[1] - 1, r, c
    cdef double best = -INFINITY, nbest = -INFINITY, v
    cdef Py_ssize_t br = -1, bc = -1, nr = -1, nc = -1
    with nogil:
        for r in range(b):
            for c in range(W):
                v = 0.5 * ((min2(max4(Shi, r, c), max4(Dhi, r, c)) + dr[r]) + dc[c])
                if v > best:
                    best = v; br = r; bc = c
                v = 0.5 * ((min2(Slo[r, c], Dlo[r, c]) - pr[r]) - pc[c])
                if v > nbest:
                    nbest = v; nr = r; nc = c
    return best, br, bc, nbest, nr, nc


def scan_uacs(const double[:, :] Shi, const double[:, :] Slo,
              const double[:, :] FA, const double[:, :] FB,
              const double[:, :] GA, const double[:, :] GB, const double[:] K,
              const double[:] dr, const double[:] dc, const double[:] pr, const double[:] pc,
              double eps,
              const double[:, :] XA0, const double[:, :] XB0,
              const double[:, :] XA1, const double[:, :] XB1,
              const double[:, :] XK, bint has_ext):
    cdef Py_ssize_t b = Shi.shape[0] - 1, W = Shi.shape[1] - 1, r, c
    cdef double c1 = 1.0 - eps
    cdef double best = INFINITY, nbest = INFINITY, u, w, v, fy
    cdef Py_ssize_t br = -1, bc = -1, bt = -1, nr = -1, nc = -1, nf = -1
    with nogil:
        for r in range(b):
            for c in range(W):
                # x at node r, y anywhere on arc c
                u = min4r(FA, FB, r, c) - dc[c]
                if has_ext:
                    if XK[r, 0] > 0.0:
                        w = min4r(XA0, XB0, r, c) - dc[c]
                        if w < 0.0:
                            w = XK[r, 0] * w
                        u = min2(u, w)
                    if XK[r, 1] > 0.0:
                        w = min4r(XA1, XB1, r, c) - dc[c]
                        if w < 0.0:
                            w = XK[r, 1] * w
                        u = min2(u, w)
                if u <= c1:
                    v = 1.0 - 0.5 * ((max2(Shi[r, c], Shi[r, c + 1]) + pr[r]) + dc[c])
                    if v < best:
                        best = v; br = r; bc = c; bt = 0
                # x inside arc r
                w = min4r(GA, GB, r, c) - dc[c]
                if w < 0.0:
                    w = K[r] * w
                if w <= c1:
                    v = 1.0 - 0.5 * ((max4(Shi, r, c) + dr[r]) + dc[c])
                    if v < best:
                        best = v; br = r; bc = c; bt = 1
                # attained pairs of nodes
                fy = FA[r, c]
                fy = fy / (1.0 - pc[c]) if fy >= 0.0 else fy / (1.0 + pc[c])
                if fy <= c1:
                    v = 1.0 - 0.5 * ((Slo[r, c] - pr[r]) - pc[c])
                    if v < nbest:
                        nbest = v; nr = r; nc = c; nf = 0
                fy = FB[r, c]
                fy = fy / (1.0 - pc[c]) if fy >= 0.0 else fy / (1.0 + pc[c])
                if fy <= c1:
                    v = 1.0 - 0.5 * ((Slo[r, c] - pr[r]) - pc[c])
                    if v < nbest:
                        nbest = v; nr = r; nc = c; nf = 1
    return best, br, bc, bt, nbest, nr, nc, nf
