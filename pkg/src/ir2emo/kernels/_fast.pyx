# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: non-dominated sorting, scalarized association, exact
hypervolume, and CART tree build/predict.

Floating-point operation order mirrors kernels/_pure.py exactly (sequential
accumulation over dimensions, stable sorts, first-wins ties) so both
backends return bit-identical results.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, sqrt

cnp.import_array()

ASF, PDM, PBI = 0, 1, 2


# ---------------------------------------------------------------------------
# stable merge sort of an index array by a double key
# ---------------------------------------------------------------------------

cdef void _msort(double* key, cnp.int32_t* idx, cnp.int32_t* tmp, int lo, int hi) noexcept nogil:
    cdef int mid, i, j, k
    if hi - lo < 2:
        return
    mid = (lo + hi) // 2
    _msort(key, idx, tmp, lo, mid)
    _msort(key, idx, tmp, mid, hi)
    i = lo
    j = mid
    k = lo
    while i < mid and j < hi:
        if key[idx[j]] < key[idx[i]]:  # strict: ties take left block = stable
            tmp[k] = idx[j]
            j += 1
        else:
            tmp[k] = idx[i]
            i += 1
        k += 1
    while i < mid:
        tmp[k] = idx[i]
        i += 1
        k += 1
    while j < hi:
        tmp[k] = idx[j]
        j += 1
        k += 1
    for i in range(lo, hi):
        idx[i] = tmp[i]


# ---------------------------------------------------------------------------
# non-dominated sorting
# ---------------------------------------------------------------------------

def nd_ranks(F):
    """Non-dominated sorting ranks (0 = first front) for an (n, M) matrix."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] Fc = \
        np.ascontiguousarray(F, dtype=np.float64)
    cdef int n = Fc.shape[0]
    cdef int M = Fc.shape[1]
    cdef cnp.ndarray[cnp.int32_t, ndim=1] ranks = np.full(n, -1, dtype=np.int32)
    if n == 0:
        return ranks
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] dom = \
        np.zeros((n, n), dtype=np.uint8)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] n_dom = np.zeros(n, dtype=np.int64)
    cdef int i, j, k, r
    cdef bint le, lt
    cdef double a, b
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            le = True
            lt = False
            for k in range(M):
                a = Fc[i, k]
                b = Fc[j, k]
                if a > b:
                    le = False
                    break
                if a < b:
                    lt = True
            if le and lt:
                dom[i, j] = 1
                n_dom[j] += 1
    cdef int remaining = n
    cdef list front = []
    r = 0
    while remaining > 0:
        front = []
        for j in range(n):
            if ranks[j] < 0 and n_dom[j] == 0:
                front.append(j)
        for j in front:
            ranks[j] = r
        for i in front:
            for j in range(n):
                if dom[i, j]:
                    n_dom[j] -= 1
        remaining -= len(front)
        r += 1
    return ranks


# ---------------------------------------------------------------------------
# scalarized association
# ---------------------------------------------------------------------------

def scalarize_argmin(FB, Z, int kind, double theta):
    """Per row of FB, the argmin reference index and scalar value."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] FBc = \
        np.ascontiguousarray(FB, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] Zc = \
        np.ascontiguousarray(Z, dtype=np.float64)
    cdef int n = FBc.shape[0]
    cdef int M = FBc.shape[1]
    cdef int R = Zc.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] idx = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] val = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] Zn
    cdef cnp.ndarray[cnp.float64_t, ndim=1] nrm
    cdef int i, j, k
    cdef double v, t, best, proj, d2, resid
    if kind != 0:
        nrm = np.zeros(R, dtype=np.float64)
        for k in range(M):
            for j in range(R):
                nrm[j] = nrm[j] + Zc[j, k] * Zc[j, k]
        for j in range(R):
            nrm[j] = sqrt(nrm[j])
        Zn = Zc / nrm[:, None]
    for i in range(n):
        best = INFINITY
        for j in range(R):
            if kind == 0:
                v = -INFINITY
                for k in range(M):
                    t = FBc[i, k] - Zc[j, k]
                    if t > v:
                        v = t
            else:
                proj = 0.0
                for k in range(M):
                    proj = proj + FBc[i, k] * Zn[j, k]
                d2 = 0.0
                for k in range(M):
                    resid = FBc[i, k] - proj * Zn[j, k]
                    d2 = d2 + resid * resid
                if kind == 1:
                    v = sqrt(d2)
                else:
                    v = proj + theta * sqrt(d2)
            if v < best:
                best = v
                idx[i] = j
        val[i] = best
    return idx, val


# ---------------------------------------------------------------------------
# exact hypervolume (objective-sorted recursive slicing)
# ---------------------------------------------------------------------------

cdef double _hv_2d(double* P, int n, double r0, double r1,
                   double* key, cnp.int32_t* idx, cnp.int32_t* tmp) noexcept nogil:
    cdef int i, ii
    cdef double vol = 0.0
    cdef double y_prev = r1
    cdef double y
    for i in range(n):
        key[i] = P[2 * i]
        idx[i] = i
    _msort(key, idx, tmp, 0, n)
    for ii in range(n):
        i = idx[ii]
        y = P[2 * i + 1]
        if y < y_prev:
            vol = vol + (r0 - P[2 * i]) * (y_prev - y)
            y_prev = y
    return vol


cdef double _hso(double* P, int n, int M, double* ref,
                 double* work, cnp.int32_t* iwork, int n_cap, int m_cap) noexcept nogil:
    # work/iwork point at this recursion level's slabs.
    cdef int i, j, jj, k, n_sub, kept
    cdef double vol, depth, hi, mn, a, b
    cdef bint le, lt, dominated
    cdef double* sorted_p
    cdef double* sub
    cdef cnp.int32_t* idx
    cdef cnp.int32_t* tmp
    cdef double* key
    if n == 0:
        return 0.0
    if M == 1:
        mn = P[0]
        for i in range(1, n):
            if P[i] < mn:
                mn = P[i]
        return ref[0] - mn
    idx = iwork
    tmp = iwork + n_cap
    key = work
    if M == 2:
        return _hv_2d(P, n, ref[0], ref[1], key, idx, tmp)
    # stable sort rows by column 0
    for i in range(n):
        key[i] = P[i * M]
        idx[i] = i
    _msort(key, idx, tmp, 0, n)
    sorted_p = work + n_cap
    for i in range(n):
        for k in range(M):
            sorted_p[i * M + k] = P[idx[i] * M + k]
    sub = sorted_p + n_cap * m_cap
    vol = 0.0
    for i in range(n):
        if i == n - 1:
            hi = ref[0]
        else:
            hi = sorted_p[(i + 1) * M]
        depth = hi - sorted_p[i * M]
        if depth > 0.0:
            # nondominated filter of rows 0..i projected onto columns 1..M-1
            n_sub = 0
            for j in range(i + 1):
                dominated = False
                for jj in range(i + 1):
                    if jj == j:
                        continue
                    le = True
                    lt = False
                    for k in range(1, M):
                        a = sorted_p[jj * M + k]
                        b = sorted_p[j * M + k]
                        if a > b:
                            le = False
                            break
                        if a < b:
                            lt = True
                    if le and lt:
                        dominated = True
                        break
                if not dominated:
                    for k in range(1, M):
                        sub[n_sub * (M - 1) + (k - 1)] = sorted_p[j * M + k]
                    n_sub += 1
            vol = vol + depth * _hso(sub, n_sub, M - 1, ref + 1,
                                     work + n_cap * (1 + 2 * m_cap),
                                     iwork + 2 * n_cap, n_cap, m_cap)
    return vol


def hv_exact(points, ref):
    """Exact hypervolume of mutually nondominated points strictly inside ref."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] P = \
        np.ascontiguousarray(points, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] r = \
        np.ascontiguousarray(ref, dtype=np.float64)
    cdef int n = P.shape[0]
    cdef int M = P.shape[1]
    if n == 0:
        return 0.0
    # per-level slabs: key (n) + sorted copy (n*M) + sub buffer (n*M)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] work = \
        np.empty((M + 1) * n * (1 + 2 * M), dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] iwork = \
        np.empty(2 * n * (M + 1), dtype=np.int32)
    return _hso(&P[0, 0], n, M, &r[0], &work[0], &iwork[0], n, M)


# ---------------------------------------------------------------------------
# CART regression tree (multi-target, MSE criterion)
# ---------------------------------------------------------------------------

cdef int _grow(double[:, ::1] X, double[:, ::1] Y, cnp.int32_t[:, ::1] idx,
               int start, int end, int depth,
               int min_split, int min_leaf, int max_depth,
               cnp.int32_t[::1] feature, double[::1] thresh,
               cnp.int32_t[::1] left, cnp.int32_t[::1] right, double[:, ::1] values,
               int* n_nodes, cnp.int32_t* tmp, double* sl, double* totals,
               double* xs, cnp.uint8_t* lmask) noexcept nogil:
    cdef int node = n_nodes[0]
    n_nodes[0] += 1
    cdef int m = end - start
    cdef int p = X.shape[1]
    cdef int q = Y.shape[1]
    cdef int i, ii, d, f, pp, row, nl_cnt, nr_cnt, jj, mid
    cdef double parent_score, best_score, best_thr, a, score
    cdef double tot2, A, C, B
    cdef const double* yrow
    for d in range(q):
        totals[d] = 0.0
    for ii in range(start, end):
        row = idx[0, ii]
        for d in range(q):
            totals[d] = totals[d] + Y[row, d]
    tot2 = 0.0
    for d in range(q):
        tot2 = tot2 + totals[d] * totals[d]
    parent_score = tot2 / m

    best_score = parent_score
    cdef int best_f = -1
    best_thr = 0.0
    if m >= min_split and not (0 <= max_depth <= depth):
        for f in range(p):
            for pp in range(m):
                xs[pp] = X[idx[f, start + pp], f]
            for d in range(q):
                sl[d] = 0.0
            for pp in range(m - 1):
                row = idx[f, start + pp]
                yrow = &Y[row, 0]
                d = 0
                while d + 4 <= q:
                    sl[d] = sl[d] + yrow[d]
                    sl[d + 1] = sl[d + 1] + yrow[d + 1]
                    sl[d + 2] = sl[d + 2] + yrow[d + 2]
                    sl[d + 3] = sl[d + 3] + yrow[d + 3]
                    d += 4
                while d < q:
                    sl[d] = sl[d] + yrow[d]
                    d += 1
                if xs[pp] < xs[pp + 1] and (pp + 1) >= min_leaf \
                        and (m - pp - 1) >= min_leaf:
                    A = 0.0
                    C = 0.0
                    d = 0
                    while d + 4 <= q:
                        A = A + ((sl[d] * sl[d] + sl[d + 1] * sl[d + 1])
                                 + (sl[d + 2] * sl[d + 2] + sl[d + 3] * sl[d + 3]))
                        C = C + ((totals[d] * sl[d] + totals[d + 1] * sl[d + 1])
                                 + (totals[d + 2] * sl[d + 2] + totals[d + 3] * sl[d + 3]))
                        d += 4
                    while d < q:
                        A = A + sl[d] * sl[d]
                        C = C + totals[d] * sl[d]
                        d += 1
                    B = (tot2 - 2.0 * C) + A
                    score = A / (<double>(pp + 1)) + B / (<double>(m - pp - 1))
                    if score > best_score:
                        best_score = score
                        best_f = f
                        best_thr = 0.5 * (xs[pp] + xs[pp + 1])

    if best_f < 0:
        for d in range(q):
            values[node, d] = totals[d] / m
        return node
    feature[node] = best_f
    thresh[node] = best_thr
    for ii in range(start, end):
        row = idx[0, ii]
        lmask[row] = X[row, best_f] <= best_thr
    for f in range(p):
        nl_cnt = 0
        nr_cnt = 0
        for ii in range(start, end):
            row = idx[f, ii]
            if lmask[row]:
                idx[f, start + nl_cnt] = row
                nl_cnt += 1
            else:
                tmp[nr_cnt] = row
                nr_cnt += 1
        for jj in range(nr_cnt):
            idx[f, start + nl_cnt + jj] = tmp[jj]
    mid = start + nl_cnt
    left[node] = _grow(X, Y, idx, start, mid, depth + 1,
                       min_split, min_leaf, max_depth,
                       feature, thresh, left, right, values,
                       n_nodes, tmp, sl, totals, xs, lmask)
    right[node] = _grow(X, Y, idx, mid, end, depth + 1,
                        min_split, min_leaf, max_depth,
                        feature, thresh, left, right, values,
                        n_nodes, tmp, sl, totals, xs, lmask)
    return node


def build_tree(X, Y, order, int min_split, int min_leaf, int max_depth):
    """Grow one CART regression tree on presorted bootstrap data.

    Same contract as the pure backend: X (n, p), Y (n, q), order (p, n)
    stable per-feature argsort of X's columns.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] Xc = \
        np.ascontiguousarray(X, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] Yc = \
        np.ascontiguousarray(Y, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=2, mode="c"] idx = \
        np.array(order, dtype=np.int32, order="C", copy=True)
    cdef int n = Xc.shape[0]
    cdef int q = Yc.shape[1]
    cdef int cap = 2 * n + 1
    cdef cnp.ndarray[cnp.int32_t, ndim=1] feature = np.full(cap, -1, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] thresh = np.zeros(cap)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] left = np.full(cap, -1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] right = np.full(cap, -1, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] values = np.zeros((cap, q))
    cdef cnp.ndarray[cnp.int32_t, ndim=1] tmp = np.empty(n, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sl = np.empty(q)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] totals = np.empty(q)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.empty(n)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] lmask = np.empty(n, dtype=np.uint8)
    cdef int n_nodes = 0
    _grow(Xc, Yc, idx, 0, n, 0, min_split, min_leaf, max_depth,
          feature, thresh, left, right, values,
          &n_nodes, <cnp.int32_t*>tmp.data, <double*>sl.data,
          <double*>totals.data, <double*>xs.data, <cnp.uint8_t*>lmask.data)
    return (feature[:n_nodes].copy(), thresh[:n_nodes].copy(),
            left[:n_nodes].copy(), right[:n_nodes].copy(),
            values[:n_nodes].copy())


def tree_predict(Xq, feature, thresh, left, right, values):
    """Route query rows down one tree and gather leaf mean vectors."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] Xc = \
        np.ascontiguousarray(Xq, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] ft = np.ascontiguousarray(feature, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] th = np.ascontiguousarray(thresh, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] lf = np.ascontiguousarray(left, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] rt = np.ascontiguousarray(right, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] vl = \
        np.ascontiguousarray(values, dtype=np.float64)
    cdef int nq = Xc.shape[0]
    cdef int q = vl.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((nq, q))
    cdef int i, d, node
    for i in range(nq):
        node = 0
        while ft[node] >= 0:
            if Xc[i, ft[node]] <= th[node]:
                node = lf[node]
            else:
                node = rt[node]
        for d in range(q):
            out[i, d] = vl[node, d]
    return out
