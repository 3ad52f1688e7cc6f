"""DTLZ1-4 for M = 3..5 objectives with 15 variables.

The last k = n_var - M + 1 variables are distance variables; optima sit at
x_i = 0.5 there. DTLZ1's front is the Sum(f) = 0.5 simplex, DTLZ2-4 fronts
are the unit sphere in the positive orthant.
"""

from __future__ import annotations

import numpy as np

N_VAR = 15


def _g_rastrigin(Xm: np.ndarray) -> np.ndarray:
    k = Xm.shape[1]
    y = Xm - 0.5
    return 100.0 * (k + np.sum(y * y - np.cos(20.0 * np.pi * y), axis=1))


def _g_sphere(Xm: np.ndarray) -> np.ndarray:
    y = Xm - 0.5
    return np.sum(y * y, axis=1)


def _linear_objectives(Xp: np.ndarray, g: np.ndarray, M: int) -> np.ndarray:
    n = Xp.shape[0]
    F = np.empty((n, M))
    for m in range(M):
        f = 0.5 * (1.0 + g)
        for i in range(M - 1 - m):
            f = f * Xp[:, i]
        if m > 0:
            f = f * (1.0 - Xp[:, M - 1 - m])
        F[:, m] = f
    return F


def _spherical_objectives(Xp: np.ndarray, g: np.ndarray, M: int) -> np.ndarray:
    n = Xp.shape[0]
    theta = Xp * (np.pi / 2.0)
    F = np.empty((n, M))
    for m in range(M):
        f = 1.0 + g
        for i in range(M - 1 - m):
            f = f * np.cos(theta[:, i])
        if m > 0:
            f = f * np.sin(theta[:, M - 1 - m])
        F[:, m] = f
    return F


def dtlz1(X: np.ndarray, M: int) -> np.ndarray:
    return _linear_objectives(X[:, : M - 1], _g_rastrigin(X[:, M - 1:]), M)


def dtlz2(X: np.ndarray, M: int) -> np.ndarray:
    return _spherical_objectives(X[:, : M - 1], _g_sphere(X[:, M - 1:]), M)


def dtlz3(X: np.ndarray, M: int) -> np.ndarray:
    return _spherical_objectives(X[:, : M - 1], _g_rastrigin(X[:, M - 1:]), M)


def dtlz4(X: np.ndarray, M: int, alpha: float = 100.0) -> np.ndarray:
    Xp = X[:, : M - 1] ** alpha
    return _spherical_objectives(Xp, _g_sphere(X[:, M - 1:]), M)
