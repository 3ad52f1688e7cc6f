"""Reference-point generation, objective normalization, and scalarized
association of solutions with reference directions.

Association supports three scalarizers: the achievement function in its
uniform-weight difference form (max_k of fbar_k - z_k), perpendicular
distance to the reference ray, and penalty-based boundary intersection.
Ties always resolve to the lowest reference index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ir2emo import kernels
from ir2emo.core import ContractViolation

METRIC_KINDS = {"ASF": kernels.ASF, "PDM": kernels.PDM, "PBI": kernels.PBI}


@dataclass(frozen=True)
class ReferenceSet:
    """Unit-simplex direction points Z plus the lattice descriptor."""

    points: np.ndarray  # (R, M), rows sum to 1
    gaps: object = None  # int p, or list of per-layer gaps

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=np.float64)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def M(self) -> int:
        return self.points.shape[1]

    def boundary_fraction(self) -> float:
        """Share of points with at least one zero coordinate."""
        return float(np.mean(np.any(self.points <= 1e-12, axis=1)))


@dataclass(frozen=True)
class NormalizationFrame:
    ideal: np.ndarray
    nadir: np.ndarray


@dataclass(frozen=True)
class ScalarizingMetric:
    """Association metric: ASF (uniform weights), PDM, or PBI with penalty."""

    kind: str = "ASF"
    theta: float = 5.0
    weight: np.ndarray = field(default=None, repr=False)  # uniform; kept for clarity

    def __post_init__(self):
        if self.kind not in METRIC_KINDS:
            raise ContractViolation(f"unknown metric kind {self.kind!r}")
        if self.kind == "PBI" and not self.theta > 0:
            raise ContractViolation("PBI requires theta > 0")


def das_dennis(M: int, p: int) -> ReferenceSet:
    """Simplex-lattice reference points with p gaps per axis.

    Produces exactly C(p+M-1, M-1) points whose coordinates are multiples
    of 1/p.
    """
    if M < 2 or p < 1:
        raise ContractViolation("das_dennis requires M >= 2 and p >= 1")
    points = []
    part = np.zeros(M, dtype=np.int64)

    def rec(dim: int, left: int):
        if dim == M - 1:
            part[dim] = left
            points.append(part / p)
            return
        for v in range(left + 1):
            part[dim] = v
            rec(dim + 1, left - v)

    rec(0, p)
    return ReferenceSet(np.array(points), gaps=p)


def layered_points(M: int, layer_gaps: list[int],
                   shrink: list[float]) -> ReferenceSet:
    """Union of Das-Dennis layers contracted toward the simplex centroid.

    Layer i is das_dennis(M, layer_gaps[i]) mapped through
    c + shrink[i]*(x - c) with c the centroid; duplicates are removed
    (first occurrence kept). A single layer with shrink 1.0 reproduces
    plain das_dennis. Stand-in for energy-based layered generators: it
    trades boundary points for interior ones at a comparable total count.
    """
    if len(layer_gaps) != len(shrink):
        raise ContractViolation("layer_gaps and shrink must have equal length")
    s = np.asarray(shrink, dtype=np.float64)
    if np.any(s <= 0) or np.any(s > 1):
        raise ContractViolation("shrink values must lie in (0, 1]")
    if np.any(np.diff(s) >= 0):
        raise ContractViolation("shrink values must be strictly decreasing")
    centroid = np.full(M, 1.0 / M)
    layers = []
    for p, sf in zip(layer_gaps, s):
        pts = das_dennis(M, int(p)).points
        layers.append(centroid + sf * (pts - centroid))
    allpts = np.vstack(layers)
    _, first = np.unique(np.round(allpts, 12), axis=0, return_index=True)
    keep = np.sort(first)
    return ReferenceSet(allpts[keep], gaps=list(layer_gaps))


def normalize(F: np.ndarray) -> tuple[NormalizationFrame, np.ndarray]:
    """Min/max normalization of objective vectors into [0, 1] per dimension.

    ideal_k / nadir_k are the per-dimension min/max over F; degenerate
    dimensions use a safeguarded denominator so converged or single-point
    sets normalize to zero instead of faulting.
    """
    F = np.atleast_2d(np.asarray(F, dtype=np.float64))
    if F.shape[0] == 0:
        raise ContractViolation("normalize requires a non-empty set")
    ideal = F.min(axis=0)
    nadir = F.max(axis=0)
    denom = np.maximum(nadir - ideal, 1e-12)
    return NormalizationFrame(ideal, nadir), (F - ideal) / denom


def apply_frame(frame: NormalizationFrame, F: np.ndarray) -> np.ndarray:
    """Normalize F with an existing frame (same safeguard as normalize)."""
    F = np.atleast_2d(np.asarray(F, dtype=np.float64))
    denom = np.maximum(frame.nadir - frame.ideal, 1e-12)
    return (F - frame.ideal) / denom


def scalarize(metric: ScalarizingMetric, fbar: np.ndarray, z: np.ndarray) -> float:
    """Scalar value of one normalized point against one reference point."""
    fbar = np.asarray(fbar, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if metric.kind == "ASF":
        return float(np.max(fbar - z))
    nrm = 0.0
    for k in range(z.shape[0]):
        nrm = nrm + z[k] * z[k]
    nrm = math.sqrt(nrm)
    if nrm == 0.0:
        raise ContractViolation(f"{metric.kind} undefined for the zero reference")
    zn = z / nrm
    proj = 0.0
    for k in range(z.shape[0]):
        proj = proj + fbar[k] * zn[k]
    d2 = 0.0
    for k in range(z.shape[0]):
        resid = fbar[k] - proj * zn[k]
        d2 = d2 + resid * resid
    if metric.kind == "PDM":
        return math.sqrt(d2)
    return proj + metric.theta * math.sqrt(d2)


def associate(FB: np.ndarray, Z: ReferenceSet | np.ndarray,
              metric: ScalarizingMetric) -> tuple[np.ndarray, np.ndarray]:
    """Argmin reference index and scalar value for each normalized point.

    Returns (indices, values); ties break to the lowest reference index.
    """
    pts = Z.points if isinstance(Z, ReferenceSet) else np.asarray(Z, dtype=np.float64)
    FB = np.atleast_2d(np.asarray(FB, dtype=np.float64))
    if FB.shape[1] != pts.shape[1]:
        raise ContractViolation(
            f"dimension mismatch: points are {FB.shape[1]}-d, refs {pts.shape[1]}-d")
    if metric.kind != "ASF" and np.any(np.all(pts == 0.0, axis=1)):
        raise ContractViolation(f"{metric.kind} undefined for the zero reference")
    return kernels.scalarize_argmin(FB, pts, METRIC_KINDS[metric.kind], metric.theta)
