"""WFG1-9 for M = 3,4 with 24 variables and k = 2(M-1) position parameters.

Implements the standard transformation/shape pipeline (bias, shift,
reduction transformations feeding convex/concave/linear/mixed/disc shapes).
Variable i has domain [0, 2i]; distance-optimal solutions reach f_m in
[0, 2m]. WFG4's multimodal shift and WFG7's bias expose their (A, B, C)
parameters so the hardened variants (WFG4 with (70, 5, 0.35), WFG7 with
C = 100) are plain parameterizations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ir2emo.core import ConfigurationError

N_VAR = 24
_EPS = 1e-10

# (A, B, C) defaults of the parameter-dependent transformation:
# WFG4 -> multimodal shift, WFG7 -> position bias.
PARAM_DEFAULTS = {
    "WFG4": (30.0, 10.0, 0.35),
    "WFG7": (0.98 / 49.98, 0.02, 50.0),
}


@dataclass(frozen=True)
class WfgParams:
    """Overrides for the parameter-dependent transformation; None = default."""

    A: float | None = None
    B: float | None = None
    C: float | None = None

    def resolve(self, base: str) -> tuple[float, float, float]:
        if base not in PARAM_DEFAULTS:
            raise ConfigurationError(
                f"{base} has no exposed shape parameters (only WFG4/WFG7 do)")
        dA, dB, dC = PARAM_DEFAULTS[base]
        return (dA if self.A is None else float(self.A),
                dB if self.B is None else float(self.B),
                dC if self.C is None else float(self.C))


def _correct01(v: np.ndarray) -> np.ndarray:
    v = np.where((v <= 0.0) & (v >= -_EPS), 0.0, v)
    v = np.where((v >= 1.0) & (v <= 1.0 + _EPS), 1.0, v)
    return v


# -- transformations (elementwise on columns in [0, 1]) ---------------------

def _b_poly(y, alpha):
    return _correct01(y ** alpha)


def _b_flat(y, A, B, C):
    v = (A + np.minimum(0.0, np.floor(y - B)) * A * (B - y) / B
         - np.minimum(0.0, np.floor(C - y)) * (1.0 - A) * (y - C) / (1.0 - C))
    return _correct01(v)


def _b_param(y, u, A, B, C):
    v = A - (1.0 - 2.0 * u) * np.abs(np.floor(0.5 - u) + A)
    return _correct01(y ** (B + (C - B) * v))


def _s_linear(y, A):
    return _correct01(np.abs(y - A) / np.abs(np.floor(A - y) + A))


def _s_decept(y, A, B, C):
    tmp1 = np.floor(y - A + B) * (1.0 - C + (A - B) / B) / (A - B)
    tmp2 = np.floor(A + B - y) * (1.0 - C + (1.0 - A - B) / B) / (1.0 - A - B)
    return _correct01(1.0 + (np.abs(y - A) - B) * (tmp1 + tmp2 + 1.0 / B))


def _s_multi(y, A, B, C):
    tmp1 = np.abs(y - C) / (2.0 * (np.floor(C - y) + C))
    tmp2 = (4.0 * A + 2.0) * np.pi * (0.5 - tmp1)
    return _correct01((1.0 + np.cos(tmp2) + 4.0 * B * tmp1 ** 2) / (B + 2.0))


def _r_sum(Y, w):
    return _correct01(Y @ w / np.sum(w))


def _r_nonsep(Y, A):
    n, size = Y.shape
    num = np.zeros(n)
    for j in range(size):
        num += Y[:, j]
        for k in range(A - 1):
            num += np.abs(Y[:, j] - Y[:, (j + k + 1) % size])
    denom = (size / A) * np.ceil(A / 2.0) * (1.0 + 2.0 * A - 2.0 * np.ceil(A / 2.0))
    return _correct01(num / denom)


# -- shape functions (on underlying parameters x_1..x_{M-1}) ----------------

def _shape_linear(Xp, m, M):
    h = np.ones(Xp.shape[0])
    for i in range(M - 1 - m):
        h = h * Xp[:, i]
    if m > 0:
        h = h * (1.0 - Xp[:, M - 1 - m])
    return h


def _shape_convex(Xp, m, M):
    h = np.ones(Xp.shape[0])
    for i in range(M - 1 - m):
        h = h * (1.0 - np.cos(Xp[:, i] * np.pi / 2.0))
    if m > 0:
        h = h * (1.0 - np.sin(Xp[:, M - 1 - m] * np.pi / 2.0))
    return h


def _shape_concave(Xp, m, M):
    h = np.ones(Xp.shape[0])
    for i in range(M - 1 - m):
        h = h * np.sin(Xp[:, i] * np.pi / 2.0)
    if m > 0:
        h = h * np.cos(Xp[:, M - 1 - m] * np.pi / 2.0)
    return h


def _shape_mixed(x1, alpha, A):
    return (1.0 - x1 - np.cos(2.0 * A * np.pi * x1 + np.pi / 2.0)
            / (2.0 * A * np.pi)) ** alpha


def _shape_disc(x1, alpha, beta, A):
    return 1.0 - x1 ** alpha * np.cos(A * x1 ** beta * np.pi) ** 2


def _finalize(T, M, shapes, degenerate=False):
    """Map the reduced vector T (n, M) through the shape functions."""
    xM = T[:, -1]
    A = np.zeros(M - 1) if degenerate else np.ones(M - 1)
    if degenerate:
        A[0] = 1.0
    Xp = np.empty((T.shape[0], M - 1))
    for i in range(M - 1):
        Xp[:, i] = np.maximum(xM, A[i]) * (T[:, i] - 0.5) + 0.5
    F = np.empty((T.shape[0], M))
    for m in range(M):
        F[:, m] = xM + 2.0 * (m + 1) * shapes(Xp, m)
    return F


def _position_groups(k: int, M: int) -> list[np.ndarray]:
    size = k // (M - 1)
    return [np.arange(m * size, (m + 1) * size) for m in range(M - 1)]


class WfgProblem:
    """One WFG instance; call evaluate(Z) with rows in [0, 2i]."""

    def __init__(self, base: str, M: int, n_var: int = N_VAR,
                 params: WfgParams | None = None):
        if M < 2:
            raise ConfigurationError("WFG needs M >= 2")
        self.base = base
        self.M = M
        self.n = n_var
        self.k = 2 * (M - 1)
        self.l = self.n - self.k
        if self.k % (M - 1) != 0 or self.l <= 0:
            raise ConfigurationError("invalid WFG position/distance split")
        if base in ("WFG2", "WFG3") and self.l % 2 != 0:
            raise ConfigurationError(f"{base} needs an even distance count")
        if params is not None and base not in PARAM_DEFAULTS:
            params.resolve(base)  # raises: no knobs on this problem
        self.params = (params or WfgParams()).resolve(base) \
            if base in PARAM_DEFAULTS else None
        self.upper = 2.0 * np.arange(1, self.n + 1)

    def evaluate(self, Z: np.ndarray) -> np.ndarray:
        Y = _correct01(np.asarray(Z, dtype=np.float64) / self.upper)
        k, l, n, M = self.k, self.l, self.n, self.M
        groups = _position_groups(k, M)

        if self.base == "WFG1":
            Y = Y.copy()
            Y[:, k:] = _s_linear(Y[:, k:], 0.35)
            Y[:, k:] = _b_flat(Y[:, k:], 0.8, 0.75, 0.85)
            Y = _b_poly(Y, 0.02)
            w = 2.0 * np.arange(1, n + 1)
            T = np.column_stack(
                [_r_sum(Y[:, g], w[g]) for g in groups]
                + [_r_sum(Y[:, k:], w[k:])])
            conv = lambda Xp, m: (_shape_convex(Xp, m, M) if m < M - 1
                                  else _shape_mixed(Xp[:, 0], 1.0, 5.0))
            return _finalize(T, M, conv)

        if self.base in ("WFG2", "WFG3"):
            Y = Y.copy()
            Y[:, k:] = _s_linear(Y[:, k:], 0.35)
            pairs = [_r_nonsep(Y[:, [k + 2 * j, k + 2 * j + 1]], 2)
                     for j in range(l // 2)]
            Yd = np.column_stack(pairs)
            T = np.column_stack(
                [_r_sum(Y[:, g], np.ones(len(g))) for g in groups]
                + [_r_sum(Yd, np.ones(l // 2))])
            if self.base == "WFG2":
                shape = lambda Xp, m: (_shape_convex(Xp, m, M) if m < M - 1
                                       else _shape_disc(Xp[:, 0], 1.0, 1.0, 5.0))
                return _finalize(T, M, shape)
            shape = lambda Xp, m: _shape_linear(Xp, m, M)
            return _finalize(T, M, shape, degenerate=True)

        if self.base == "WFG4":
            A, B, C = self.params
            Y = _s_multi(Y, A, B, C)
            T = self._rsum_reduce(Y, groups)
            return _finalize(T, M, lambda Xp, m: _shape_concave(Xp, m, M))

        if self.base == "WFG5":
            Y = _s_decept(Y, 0.35, 0.001, 0.05)
            T = self._rsum_reduce(Y, groups)
            return _finalize(T, M, lambda Xp, m: _shape_concave(Xp, m, M))

        if self.base == "WFG6":
            Y = Y.copy()
            Y[:, k:] = _s_linear(Y[:, k:], 0.35)
            T = self._nonsep_reduce(Y, groups)
            return _finalize(T, M, lambda Xp, m: _shape_concave(Xp, m, M))

        if self.base == "WFG7":
            A, B, C = self.params
            Y = Y.copy()
            for i in range(k):
                u = _r_sum(Y[:, i + 1:], np.ones(n - i - 1))
                Y[:, i] = _b_param(Y[:, i], u, A, B, C)
            Y[:, k:] = _s_linear(Y[:, k:], 0.35)
            T = self._rsum_reduce(Y, groups)
            return _finalize(T, M, lambda Xp, m: _shape_concave(Xp, m, M))

        if self.base == "WFG8":
            Yin = Y  # bias parameter reads the stage input, not outputs
            Y = Y.copy()
            for i in range(k, n):
                u = _r_sum(Yin[:, :i], np.ones(i))
                Y[:, i] = _b_param(Yin[:, i], u, 0.98 / 49.98, 0.02, 50.0)
            Y[:, k:] = _s_linear(Y[:, k:], 0.35)
            T = self._rsum_reduce(Y, groups)
            return _finalize(T, M, lambda Xp, m: _shape_concave(Xp, m, M))

        if self.base == "WFG9":
            Y = Y.copy()
            for i in range(n - 1):
                u = _r_sum(Y[:, i + 1:], np.ones(n - i - 1))
                Y[:, i] = _b_param(Y[:, i], u, 0.98 / 49.98, 0.02, 50.0)
            Y[:, :k] = _s_decept(Y[:, :k], 0.35, 0.001, 0.05)
            Y[:, k:] = _s_multi(Y[:, k:], 30.0, 95.0, 0.35)
            T = self._nonsep_reduce(Y, groups)
            return _finalize(T, M, lambda Xp, m: _shape_concave(Xp, m, M))

        raise ConfigurationError(f"unknown WFG problem {self.base}")

    def _rsum_reduce(self, Y, groups):
        return np.column_stack(
            [_r_sum(Y[:, g], np.ones(len(g))) for g in groups]
            + [_r_sum(Y[:, self.k:], np.ones(self.l))])

    def _nonsep_reduce(self, Y, groups):
        size = self.k // (self.M - 1)
        return np.column_stack(
            [_r_nonsep(Y[:, g], size) for g in groups]
            + [_r_nonsep(Y[:, self.k:], self.l)])

    def distance_optimal(self, Ypos: np.ndarray) -> np.ndarray:
        """Decision vectors with optimal distance values for given position
        values (Ypos rows in [0, 1]); validation helper."""
        n, k = self.n, self.k
        Ypos = np.atleast_2d(np.asarray(Ypos, dtype=np.float64))
        Y = np.empty((Ypos.shape[0], n))
        Y[:, :k] = Ypos
        if self.base == "WFG8":
            for i in range(k, n):
                u = _r_sum(Y[:, :i], np.ones(i))
                v = 0.98 / 49.98 - (1.0 - 2.0 * u) * np.abs(
                    np.floor(0.5 - u) + 0.98 / 49.98)
                Y[:, i] = 0.35 ** (1.0 / (0.02 + (50.0 - 0.02) * v))
        elif self.base == "WFG9":
            Y[:, n - 1] = 0.35
            for i in range(n - 2, k - 1, -1):
                u = _r_sum(Y[:, i + 1:], np.ones(n - i - 1))
                v = 0.98 / 49.98 - (1.0 - 2.0 * u) * np.abs(
                    np.floor(0.5 - u) + 0.98 / 49.98)
                Y[:, i] = 0.35 ** (1.0 / (0.02 + (50.0 - 0.02) * v))
        else:
            Y[:, k:] = 0.35
        return Y * self.upper
