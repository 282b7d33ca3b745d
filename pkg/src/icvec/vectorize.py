"""Vectorizations of persistence diagrams.

Three feature vectors over the off-diagonal points of one homology
dimension, each sorted into non-increasing order:

* persistence vector: the lifetimes death - birth, optionally normalized by
  the largest entry;
* interconnectivity vector: for each point, the number of diagram points
  (itself included) inside the open disk centred at the point whose radius
  equals its persistence;
* stable interconnectivity vector: a Gaussian-smoothed variant. Point i
  carries an isotropic Gaussian with mean (b_i, d_i) and per-axis variance
  (d_i - b_i) + delta; entry i averages the N density values at the diagram
  points, so it stays continuous under small input perturbations.

Infinite-death points are excluded before vectorizing unless
``cap_at_max=True`` replaces their death with the diagram's max filtration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .homology import PersistenceDiagram

METHODS = ("persistence", "interconnectivity", "stable_interconnectivity")

DEFAULT_DELTA = 0.5


@dataclass(frozen=True)
class FeatureVector:
    values: tuple[float, ...]
    method: str
    dim: int
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if any(a < b for a, b in zip(self.values, self.values[1:])):
            raise ValueError("feature vector entries must be non-increasing")

    def __len__(self):
        return len(self.values)

    def asarray(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class GaussianParams:
    """Per-point Gaussian mixture behind the stable vector: means (b_i, d_i),
    isotropic variances (d_i - b_i) + delta, uniform weights 1/N."""

    means: tuple[tuple[float, float], ...]
    variances: tuple[float, ...]
    weight: float

    def __post_init__(self):
        if any(v <= 0 for v in self.variances):
            raise ValueError("singular covariance: some variance is not positive")
        n = len(self.means)
        if n == 0 or len(self.variances) != n:
            raise ValueError("means and variances must be non-empty and aligned")
        if not math.isclose(self.weight * n, 1.0, rel_tol=1e-12):
            raise ValueError("weights must sum to 1")


def _diagram_points(
    diagram: PersistenceDiagram, dim: int, cap_at_max: bool
) -> np.ndarray:
    pts = diagram.finite_points(dim, cap_at_max=cap_at_max)
    if pts.shape[0] == 0:
        raise ValueError(f"diagram has no usable points in dimension {dim}")
    return pts


def _descending(values: np.ndarray) -> tuple[float, ...]:
    return tuple(float(x) for x in np.sort(values)[::-1])


def persistence_vector(
    diagram: PersistenceDiagram,
    dim: int = 1,
    normalized: bool = False,
    cap_at_max: bool = False,
) -> FeatureVector:
    """Lifetimes d_i - b_i in non-increasing order; normalized divides by the max."""
    pts = _diagram_points(diagram, dim, cap_at_max)
    pers = pts[:, 1] - pts[:, 0]
    if normalized:
        top = pers.max()
        if top <= 0:
            raise ValueError("cannot normalize: largest persistence is zero")
        pers = pers / top
    return FeatureVector(
        _descending(pers), "persistence", dim, {"normalized": normalized}
    )


def interconnectivity_counts(points: np.ndarray) -> np.ndarray:
    """Unsorted disk counts: #{j : |x_j - x_i|^2 < (d_i - b_i)^2}, self included."""
    pts = np.asarray(points, dtype=float)
    radius2 = (pts[:, 1] - pts[:, 0]) ** 2
    diff = pts[None, :, :] - pts[:, None, :]
    dist2 = np.einsum("ijk,ijk->ij", diff, diff)
    return (dist2 < radius2[:, None]).sum(axis=1)


def interconnectivity_vector(
    diagram: PersistenceDiagram, dim: int = 1, cap_at_max: bool = False
) -> FeatureVector:
    """Disk-count vector over the off-diagonal points of one dimension.

    The disk of point i is open, centred at (b_i, d_i), with radius equal to
    the persistence d_i - b_i; overlapping points count with multiplicity.
    """
    pts = _diagram_points(diagram, dim, cap_at_max)
    counts = interconnectivity_counts(pts)
    return FeatureVector(_descending(counts), "interconnectivity", dim, {})


def interconnectivity_from_barcode(intervals, dim: int = 1) -> FeatureVector:
    """Same counts computed from bars: bar j lands in bar i's disk when
    (b_i - birth_j)^2 + (d_i - death_j)^2 < (d_i - b_i)^2."""
    arr = np.asarray([(float(b), float(d)) for b, d in intervals], dtype=float)
    if arr.size == 0:
        raise ValueError("empty barcode")
    if np.any(arr[:, 1] < arr[:, 0]):
        raise ValueError("barcode interval with death < birth")
    counts = interconnectivity_counts(arr)
    return FeatureVector(_descending(counts), "interconnectivity", dim, {})


def gaussian_mixture_params(
    points: np.ndarray, delta: float = DEFAULT_DELTA
) -> GaussianParams:
    pts = np.asarray(points, dtype=float)
    variances = pts[:, 1] - pts[:, 0] + delta
    return GaussianParams(
        means=tuple((float(b), float(d)) for b, d in pts),
        variances=tuple(float(v) for v in variances),
        weight=1.0 / len(pts),
    )


def stable_interconnectivity_values(
    points: np.ndarray, delta: float = DEFAULT_DELTA
) -> np.ndarray:
    """Unsorted stable entries: (1/N) sum_j pdf_i(x_j) with pdf_i the isotropic
    Gaussian at x_i of per-axis variance (d_i - b_i) + delta."""
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    variances = pts[:, 1] - pts[:, 0] + delta
    if np.any(variances <= 0):
        raise ValueError(
            "singular covariance: delta must be > 0 when a point has zero persistence"
        )
    diff = pts[None, :, :] - pts[:, None, :]
    dist2 = np.einsum("ijk,ijk->ij", diff, diff)
    dens = np.exp(-dist2 / (2.0 * variances[:, None])) / (2.0 * np.pi * variances[:, None])
    return dens.sum(axis=1) / n


def stable_interconnectivity_vector(
    diagram: PersistenceDiagram,
    dim: int = 1,
    delta: float = DEFAULT_DELTA,
    cap_at_max: bool = False,
) -> FeatureVector:
    if delta < 0:
        raise ValueError("delta must be >= 0")
    pts = _diagram_points(diagram, dim, cap_at_max)
    values = stable_interconnectivity_values(pts, delta)
    return FeatureVector(
        _descending(values), "stable_interconnectivity", dim, {"delta": delta}
    )


def vector_distance_inf(v1: FeatureVector, v2: FeatureVector) -> float:
    """Sup-norm distance; the shorter vector is zero-padded on the right."""
    if v1.method != v2.method:
        raise ValueError(f"method mismatch: {v1.method} vs {v2.method}")
    if v1.dim != v2.dim:
        raise ValueError(f"dimension mismatch: {v1.dim} vs {v2.dim}")
    a, b = v1.asarray(), v2.asarray()
    m = max(len(a), len(b))
    a = np.pad(a, (0, m - len(a)))
    b = np.pad(b, (0, m - len(b)))
    return float(np.abs(a - b).max()) if m else 0.0


def save_vector_csv(
    vec: FeatureVector, path: str | Path, source_hash: str | None = None
) -> None:
    """index,value rows plus a JSON sidecar recording method and parameters."""
    path = Path(path)
    lines = ["index,value"]
    for i, x in enumerate(vec.values):
        lines.append(f"{i},{x!r}")
    path.write_text("\n".join(lines) + "\n")
    meta = {
        "method": vec.method,
        "dim": vec.dim,
        "params": dict(vec.params),
        "length": len(vec),
        "source_diagram_sha256": source_hash,
    }
    path.with_suffix(path.suffix + ".json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n"
    )


def load_vector_csv(path: str | Path) -> FeatureVector:
    path = Path(path)
    lines = path.read_text().strip().splitlines()
    if not lines or lines[0] != "index,value":
        raise ValueError(f"{path}: expected header index,value")
    values = tuple(float(line.split(",")[1]) for line in lines[1:])
    meta_path = path.with_suffix(path.suffix + ".json")
    method, dim, params = "persistence", 1, {}
    if meta_path.exists():
        meta = json.loads(meta_path.read_text())
        method, dim, params = meta["method"], meta["dim"], meta.get("params", {})
    return FeatureVector(values, method, dim, params)
