"""Point-cloud generation, ingestion and transforms.

Every generator is a pure function of its parameters and a seed. Random
draws use numpy's PCG64 generator (``np.random.default_rng``), so a given
seed reproduces the same cloud on every platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

GENERATOR_KINDS = ("uniform", "normal", "lattice", "sierpinski")

PROVENANCES = GENERATOR_KINDS + (
    "linked_twist",
    "sliding_window",
    "image",
    "file",
)

# chaos-game triangle: equilateral, already inside the unit square
SIERPINSKI_VERTICES = ((0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3.0) / 2.0))
SIERPINSKI_BURN_IN = 100


@dataclass(frozen=True)
class PointCloud:
    """A finite list of points in R^n plus provenance metadata."""

    points: tuple[tuple[float, ...], ...]
    ambient_dim: int
    provenance: str
    params: Mapping = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if len(self.points) == 0:
            raise ValueError("point cloud must be non-empty")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        for p in self.points:
            if len(p) != self.ambient_dim:
                raise ValueError(
                    f"point {p} has dimension {len(p)}, expected {self.ambient_dim}"
                )

    @property
    def n(self) -> int:
        return len(self.points)

    def asarray(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)


def _cloud_from_array(arr, provenance, params, seed=None) -> PointCloud:
    arr = np.asarray(arr, dtype=float)
    if arr.ndim != 2:
        raise ValueError("expected an (n, dim) array of points")
    return PointCloud(
        points=tuple(tuple(float(x) for x in row) for row in arr),
        ambient_dim=arr.shape[1],
        provenance=provenance,
        params=dict(params),
        seed=seed,
    )


def generate(kind: str, n: int, seed: int | None = None, dim: int = 2) -> PointCloud:
    """Generate one of the four basic cloud types, all inside [0,1]^dim.

    ``lattice`` requires n to be a perfect square (2D grid) and ignores the
    seed; ``sierpinski`` runs the chaos game with a 100-iterate burn-in.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if kind not in GENERATOR_KINDS:
        raise ValueError(f"kind must be one of {GENERATOR_KINDS}, got {kind!r}")

    params = {"n": n, "dim": dim}
    if kind == "uniform":
        rng = np.random.default_rng(seed)
        pts = rng.random((n, dim))
    elif kind == "normal":
        # N(0.5, 1) per coordinate, then min-max rescaled back into the box
        rng = np.random.default_rng(seed)
        pts = rng.normal(loc=0.5, scale=1.0, size=(n, dim))
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
        span = np.where(hi > lo, hi - lo, 1.0)
        pts = (pts - lo) / span
    elif kind == "lattice":
        side = math.isqrt(n)
        if side * side != n:
            raise ValueError(f"lattice size must be a perfect square, got {n}")
        if side == 1:
            pts = np.zeros((1, 2))
        else:
            axis = np.arange(side) / (side - 1)
            gx, gy = np.meshgrid(axis, axis, indexing="ij")
            pts = np.column_stack([gx.ravel(), gy.ravel()])
        params["dim"] = 2
    else:  # sierpinski
        rng = np.random.default_rng(seed)
        verts = np.asarray(SIERPINSKI_VERTICES)
        choices = rng.integers(0, 3, size=SIERPINSKI_BURN_IN + n)
        pts = np.empty((n, 2))
        p = verts[0].copy()
        for i, c in enumerate(choices):
            p = (p + verts[c]) / 2.0
            if i >= SIERPINSKI_BURN_IN:
                pts[i - SIERPINSKI_BURN_IN] = p
        params["dim"] = 2

    return _cloud_from_array(pts, kind, params, seed)


def linked_twist_orbit(r: float, x0: float, y0: float, n: int) -> PointCloud:
    """Orbit of the mod-1 linked-twist recurrence.

    x_{k+1} = x_k + r*y_k*(1-y_k) mod 1, then y_{k+1} = y_k + r*x_{k+1}*(1-x_{k+1})
    mod 1; the y update sees the already-updated x. Returns the n iterates
    after (x0, y0).
    """
    if r <= 0:
        raise ValueError("r must be > 0")
    if not (0.0 <= x0 <= 1.0 and 0.0 <= y0 <= 1.0):
        raise ValueError("(x0, y0) must lie in [0,1]^2")
    if n < 1:
        raise ValueError("n must be >= 1")
    pts = np.empty((n, 2))
    x, y = float(x0), float(y0)
    for k in range(n):
        x = (x + r * y * (1.0 - y)) % 1.0
        y = (y + r * x * (1.0 - x)) % 1.0
        pts[k, 0] = x
        pts[k, 1] = y
    return _cloud_from_array(
        pts, "linked_twist", {"r": r, "x0": x0, "y0": y0, "n": n}
    )


def sliding_window_embed(
    samples: Sequence[tuple[float, float]] | np.ndarray,
    m: int,
    tau: float,
    starts: Sequence[float] | None = None,
) -> PointCloud:
    """Delay embedding: each window start t maps to (f(t), f(t+tau), ..., f(t+m*tau)).

    ``samples`` is an (N, 2) array of (t, f(t)) rows with strictly increasing t;
    values at shifted times are linearly interpolated. By default every sample
    time whose full window fits inside the sampled domain is a window start.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if tau <= 0:
        raise ValueError("tau must be > 0")
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 2:
        raise ValueError("samples must be an (N>=2, 2) array of (t, f(t))")
    times, values = arr[:, 0], arr[:, 1]
    if np.any(np.diff(times) <= 0):
        raise ValueError("sample times must be strictly increasing")

    span = m * tau
    if starts is None:
        start_arr = times[times + span <= times[-1]]
        if start_arr.size == 0:
            raise ValueError("window extends past the sampled domain")
    else:
        start_arr = np.asarray(starts, dtype=float)
        if start_arr.size == 0:
            raise ValueError("no window starts given")
        if np.any(start_arr < times[0]) or np.any(start_arr + span > times[-1]):
            raise ValueError("window extends past the sampled domain")

    shifts = np.arange(m + 1) * tau
    pts = np.interp(start_arr[:, None] + shifts[None, :], times, values)
    return _cloud_from_array(
        pts, "sliding_window", {"m": m, "tau": tau, "n_windows": len(start_arr)}
    )


def image_to_point_cloud(
    image: np.ndarray,
    threshold: float = 128.0,
    include_intensity: bool = False,
) -> PointCloud:
    """One point per pixel darker than ``threshold``.

    Pixel (row, col) of an (h, w) grid maps to (col/w, 1 - row/h): unit box,
    y axis up so the image renders upright. With ``include_intensity`` the
    intensity/255 is appended as a third coordinate.
    """
    img = np.asarray(image, dtype=float)
    if img.ndim != 2:
        raise ValueError("image must be a 2D grayscale intensity grid")
    if not (0.0 <= threshold <= 255.0):
        raise ValueError("threshold must lie in [0, 255]")
    h, w = img.shape
    rows, cols = np.nonzero(img < threshold)
    if rows.size == 0:
        raise ValueError("no pixel below threshold: empty point cloud")
    xs = cols / w
    ys = 1.0 - rows / h
    if include_intensity:
        pts = np.column_stack([xs, ys, img[rows, cols] / 255.0])
    else:
        pts = np.column_stack([xs, ys])
    return _cloud_from_array(
        pts,
        "image",
        {"threshold": threshold, "shape": (h, w), "include_intensity": include_intensity},
    )


def load_image(path: str | Path) -> np.ndarray:
    """Read an 8-bit grayscale PNG or PGM file into an intensity grid."""
    from PIL import Image

    with Image.open(path) as im:
        return np.asarray(im.convert("L"), dtype=float)


def distance_matrix(cloud: PointCloud | np.ndarray) -> np.ndarray:
    """Symmetric Euclidean distance matrix with a zero diagonal."""
    pts = cloud.asarray() if isinstance(cloud, PointCloud) else np.asarray(cloud, float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("non-empty (n, dim) point array required")
    diff = pts[:, None, :] - pts[None, :, :]
    dmat = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    # enforce exact symmetry and zero diagonal against rounding
    dmat = np.maximum(dmat, dmat.T)
    np.fill_diagonal(dmat, 0.0)
    return dmat


def perturb(
    cloud: PointCloud,
    eps: float,
    mode: str = "one_point",
    seed: int | None = None,
) -> PointCloud:
    """Add eps to one random coordinate, or to a uniformly random subset of them."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    if mode not in ("one_point", "random_many"):
        raise ValueError(f"mode must be one_point or random_many, got {mode!r}")
    pts = cloud.asarray()
    rng = np.random.default_rng(seed)
    if mode == "one_point":
        i = int(rng.integers(0, pts.shape[0]))
        j = int(rng.integers(0, pts.shape[1]))
        if eps > 0:
            pts[i, j] += eps
    else:
        mask = rng.integers(0, 2, size=pts.shape).astype(bool)
        if eps > 0:
            pts[mask] += eps
    params = dict(cloud.params)
    params.update({"perturb_eps": eps, "perturb_mode": mode, "perturb_seed": seed})
    return PointCloud(
        points=tuple(tuple(float(x) for x in row) for row in pts),
        ambient_dim=cloud.ambient_dim,
        provenance=cloud.provenance,
        params=params,
        seed=cloud.seed,
    )


def save_points_csv(cloud: PointCloud | np.ndarray, path: str | Path) -> None:
    pts = cloud.asarray() if isinstance(cloud, PointCloud) else np.asarray(cloud, float)
    header = ",".join(f"x{k}" for k in range(pts.shape[1]))
    lines = [header]
    for row in pts:
        lines.append(",".join(repr(float(x)) for x in row))
    Path(path).write_text("\n".join(lines) + "\n")


def load_points_csv(path: str | Path) -> PointCloud:
    text = Path(path).read_text().strip().splitlines()
    if len(text) < 2:
        raise ValueError(f"{path}: no points found")
    pts = [tuple(float(tok) for tok in line.split(",")) for line in text[1:]]
    return PointCloud(
        points=tuple(pts),
        ambient_dim=len(pts[0]),
        provenance="file",
        params={"path": str(path)},
    )
