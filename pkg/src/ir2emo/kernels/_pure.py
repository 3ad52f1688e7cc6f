"""Pure-Python/numpy fallback for the hot kernels.

Semantics reference for the compiled backend: both implementations perform
floating-point operations in the same order (sequential accumulation over
output dimensions, stable sorts, first-wins tie breaking), so results are
bit-identical whichever backend is selected at import.
"""

from __future__ import annotations

import numpy as np

ASF, PDM, PBI = 0, 1, 2


def nd_ranks(F: np.ndarray) -> np.ndarray:
    """Non-dominated sorting ranks (0 = first front) for an (n, M) matrix."""
    F = np.asarray(F, dtype=np.float64)
    n = F.shape[0]
    ranks = np.full(n, -1, dtype=np.int32)
    if n == 0:
        return ranks
    le = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    dom = le & lt  # dom[i, j]: i dominates j
    n_dom = dom.sum(axis=0).astype(np.int64)
    r = 0
    remaining = np.ones(n, dtype=bool)
    while remaining.any():
        front = remaining & (n_dom == 0)
        if not front.any():  # cannot happen for finite inputs
            front = remaining
        ranks[front] = r
        remaining &= ~front
        n_dom = n_dom - dom[front].sum(axis=0)
        r += 1
    return ranks


def scalarize_argmin(FB: np.ndarray, Z: np.ndarray, kind: int,
                     theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Per row of FB, the argmin reference index and scalar value.

    kind 0: ASF max_k(fbar_k - z_k); kind 1: perpendicular distance to the
    ray through z; kind 2: PBI d1 + theta*d2. Ties pick the lowest index.
    """
    FB = np.asarray(FB, dtype=np.float64)
    Z = np.asarray(Z, dtype=np.float64)
    n, M = FB.shape
    if kind == ASF:
        V = (FB[:, None, :] - Z[None, :, :]).max(axis=2)
    else:
        R = Z.shape[0]
        nrm = np.zeros(R)
        for k in range(M):
            nrm = nrm + Z[:, k] * Z[:, k]
        nrm = np.sqrt(nrm)
        Zn = Z / nrm[:, None]
        proj = np.zeros((n, R))
        for k in range(M):
            proj = proj + FB[:, k, None] * Zn[None, :, k]
        d2sq = np.zeros((n, R))
        for k in range(M):
            resid = FB[:, k, None] - proj * Zn[None, :, k]
            d2sq = d2sq + resid * resid
        if kind == PDM:
            V = np.sqrt(d2sq)
        else:
            V = proj + theta * np.sqrt(d2sq)
    idx = np.argmin(V, axis=1)
    return idx.astype(np.int64), V[np.arange(n), idx]


def _nd_filter(P: np.ndarray) -> np.ndarray:
    """Drop dominated rows, preserving order (duplicates are kept)."""
    n = P.shape[0]
    le = np.all(P[:, None, :] <= P[None, :, :], axis=2)
    lt = np.any(P[:, None, :] < P[None, :, :], axis=2)
    dominated = (le & lt).any(axis=0)
    return P[~dominated]


def _hv_2d(P: np.ndarray, r0: float, r1: float) -> float:
    order = np.argsort(P[:, 0], kind="stable")
    vol = 0.0
    y_prev = r1
    for i in order:
        y = P[i, 1]
        if y < y_prev:
            vol = vol + (r0 - P[i, 0]) * (y_prev - y)
            y_prev = y
    return vol


def _hso(P: np.ndarray, ref: np.ndarray) -> float:
    n, M = P.shape
    if n == 0:
        return 0.0
    if M == 1:
        return float(ref[0] - P[:, 0].min())
    if M == 2:
        return _hv_2d(P, float(ref[0]), float(ref[1]))
    order = np.argsort(P[:, 0], kind="stable")
    P = P[order]
    vol = 0.0
    for i in range(n):
        hi = float(ref[0]) if i == n - 1 else float(P[i + 1, 0])
        depth = hi - float(P[i, 0])
        if depth > 0.0:
            sub = _nd_filter(P[: i + 1, 1:])
            vol = vol + depth * _hso(sub, ref[1:])
    return vol


def hv_exact(points: np.ndarray, ref: np.ndarray) -> float:
    """Exact hypervolume of mutually nondominated points strictly inside ref.

    Recursive objective-sorted slicing; the caller is responsible for
    discarding points that do not dominate the reference.
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    ref = np.asarray(ref, dtype=np.float64)
    return float(_hso(points, ref))


def build_tree(X: np.ndarray, Y: np.ndarray, order: np.ndarray,
               min_split: int, min_leaf: int, max_depth: int):
    """Grow one CART regression tree on presorted bootstrap data.

    X: (n, p) inputs, Y: (n, q) targets, order: (p, n) per-feature stable
    argsort of X's columns. Splits minimize total MSE summed over all q
    output dimensions, scanning every feature and every midpoint threshold;
    first-wins on ties. Returns (feature, thresh, left, right, values)
    arrays; feature == -1 marks a leaf.
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    n, p = X.shape
    q = Y.shape[1]
    cap = 2 * n + 1
    feature = np.full(cap, -1, dtype=np.int32)
    thresh = np.zeros(cap)
    left = np.full(cap, -1, dtype=np.int32)
    right = np.full(cap, -1, dtype=np.int32)
    values = np.zeros((cap, q))
    n_nodes = 0

    root_lists = [np.asarray(order[f], dtype=np.int64) for f in range(p)]
    stack: list[tuple[list[np.ndarray], int, int, bool]] = [
        (root_lists, 0, -1, False)]
    while stack:
        lists, depth, parent, is_left = stack.pop()
        node = n_nodes
        n_nodes += 1
        if parent >= 0:
            if is_left:
                left[parent] = node
            else:
                right[parent] = node
        rows0 = lists[0]
        m = rows0.shape[0]
        totals = np.cumsum(Y[rows0], axis=0)[-1] if m else np.zeros(q)
        tot2 = 0.0
        for d in range(q):
            tot2 = tot2 + totals[d] * totals[d]
        parent_score = tot2 / m

        best_score = parent_score
        best_f = -1
        best_pos = -1
        best_thr = 0.0
        splittable = m >= min_split and not (0 <= max_depth <= depth)
        if splittable:
            nl = np.arange(1, m, dtype=np.float64)
            nr = np.float64(m) - nl
            for f in range(p):
                rows = lists[f]
                xs = X[rows, f]
                valid = (xs[:-1] < xs[1:]) & (nl >= min_leaf) & (nr >= min_leaf)
                if not valid.any():
                    continue
                cum = np.cumsum(Y[rows], axis=0)
                A = np.zeros(m - 1)
                C = np.zeros(m - 1)
                # block-of-4 accumulation; the compiled backend mirrors this
                # association order exactly
                d = 0
                while d + 4 <= q:
                    s0 = cum[:-1, d]
                    s1 = cum[:-1, d + 1]
                    s2 = cum[:-1, d + 2]
                    s3 = cum[:-1, d + 3]
                    A = A + ((s0 * s0 + s1 * s1) + (s2 * s2 + s3 * s3))
                    C = C + ((totals[d] * s0 + totals[d + 1] * s1)
                             + (totals[d + 2] * s2 + totals[d + 3] * s3))
                    d += 4
                while d < q:
                    s0 = cum[:-1, d]
                    A = A + s0 * s0
                    C = C + totals[d] * s0
                    d += 1
                B = (tot2 - 2.0 * C) + A
                scores = A / nl + B / nr
                scores = np.where(valid, scores, -np.inf)
                pos = int(np.argmax(scores))
                if scores[pos] > best_score:
                    best_score = scores[pos]
                    best_f = f
                    best_pos = pos
                    best_thr = 0.5 * (xs[pos] + xs[pos + 1])

        if best_f < 0:
            values[node] = totals / m
            continue
        feature[node] = best_f
        thresh[node] = best_thr
        mask = X[:, best_f] <= best_thr
        left_lists = [rows[mask[rows]] for rows in lists]
        right_lists = [rows[~mask[rows]] for rows in lists]
        stack.append((right_lists, depth + 1, node, False))
        stack.append((left_lists, depth + 1, node, True))

    return (feature[:n_nodes].copy(), thresh[:n_nodes].copy(),
            left[:n_nodes].copy(), right[:n_nodes].copy(),
            values[:n_nodes].copy())


def tree_predict(Xq: np.ndarray, feature: np.ndarray, thresh: np.ndarray,
                 left: np.ndarray, right: np.ndarray,
                 values: np.ndarray) -> np.ndarray:
    """Route query rows down one tree and gather leaf mean vectors."""
    Xq = np.asarray(Xq, dtype=np.float64)
    out = np.empty((Xq.shape[0], values.shape[1]))
    for i in range(Xq.shape[0]):
        node = 0
        while feature[node] >= 0:
            if Xq[i, feature[node]] <= thresh[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = values[node]
    return out
