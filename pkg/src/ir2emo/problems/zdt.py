"""Modified ZDT suite: two-objective problems with 30 variables whose
Pareto-optimal solutions sit at x_k = 0.5 for k = 2..30.

The distance functions replace each x_k term of the original suite with
(2*(x_k - 0.5))^2 (and the analogous substitution inside ZDT4's Rastrigin
term), keeping every g-function's original [1, 10] range so hypervolume
magnitudes stay comparable with the unmodified suite while moving the
optimum off the variable bounds.
"""

from __future__ import annotations

import math

import numpy as np

N_VAR = 30


def _g_shifted(X: np.ndarray) -> np.ndarray:
    n = X.shape[1]
    return 1.0 + 9.0 * np.sum((2.0 * (X[:, 1:] - 0.5)) ** 2, axis=1) / (n - 1)


def zdt1(X: np.ndarray) -> np.ndarray:
    f1 = X[:, 0]
    g = _g_shifted(X)
    f2 = g * (1.0 - np.sqrt(f1 / g))
    return np.column_stack([f1, f2])


def zdt2(X: np.ndarray) -> np.ndarray:
    f1 = X[:, 0]
    g = _g_shifted(X)
    f2 = g * (1.0 - (f1 / g) ** 2)
    return np.column_stack([f1, f2])


def zdt3(X: np.ndarray) -> np.ndarray:
    f1 = X[:, 0]
    g = _g_shifted(X)
    f2 = g * (1.0 - np.sqrt(f1 / g) - (f1 / g) * np.sin(10.0 * np.pi * f1))
    return np.column_stack([f1, f2])


def zdt4(X: np.ndarray) -> np.ndarray:
    n = X.shape[1]
    f1 = X[:, 0]
    y = X[:, 1:] - 0.5
    g = 1.0 + 10.0 * (n - 1) + np.sum(y * y - 10.0 * np.cos(4.0 * np.pi * y), axis=1)
    f2 = g * (1.0 - np.sqrt(f1 / g))
    return np.column_stack([f1, f2])


def zdt6(X: np.ndarray) -> np.ndarray:
    # quartic inner term: composed with the outer fourth root it keeps the
    # distance scaling linear near the optimum, like the original problem
    n = X.shape[1]
    x1 = X[:, 0]
    f1 = 1.0 - np.exp(-4.0 * x1) * np.sin(6.0 * np.pi * x1) ** 6
    g = 1.0 + 9.0 * (np.sum((2.0 * (X[:, 1:] - 0.5)) ** 4, axis=1) / (n - 1)) ** 0.25
    f2 = g * (1.0 - (f1 / g) ** 2)
    return np.column_stack([f1, f2])


# f1 of ZDT6's front starts where exp(-4*x1)*sin^6(6*pi*x1) peaks:
# tan(6*pi*x1) = 9*pi.
_ZDT6_X1_STAR = math.atan(9.0 * math.pi) / (6.0 * math.pi)
ZDT6_F1_MIN = 1.0 - math.exp(-4.0 * _ZDT6_X1_STAR) * math.sin(
    6.0 * math.pi * _ZDT6_X1_STAR) ** 6

# f1 intervals of ZDT3's disconnected Pareto-optimal segments (standard
# published boundaries).
ZDT3_SEGMENTS = (
    (0.0, 0.0830015349),
    (0.1822287280, 0.2577623634),
    (0.4093136748, 0.4538821041),
    (0.6183967944, 0.6525117038),
    (0.8233317983, 0.8518328654),
)


def front_zdt1(f1: np.ndarray) -> np.ndarray:
    return np.column_stack([f1, 1.0 - np.sqrt(f1)])


def front_zdt2(f1: np.ndarray) -> np.ndarray:
    return np.column_stack([f1, 1.0 - f1 ** 2])


def front_zdt3(f1: np.ndarray) -> np.ndarray:
    return np.column_stack(
        [f1, 1.0 - np.sqrt(f1) - f1 * np.sin(10.0 * np.pi * f1)])
