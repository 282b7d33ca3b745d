"""Vietoris-Rips filtered complexes of dimension <= 2.

Convention: an edge enters the filtration at its length d(i,j) and a
triangle at the maximum of its three edge lengths (the convention used by
standard Rips software). Passing double_scale=True halves all entry values,
recovering the reading where a simplex is present at scale t when all its
pairwise distances are <= 2t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class Simplex:
    vertices: tuple[int, ...]
    filtration: float

    def __post_init__(self):
        if not 1 <= len(self.vertices) <= 3:
            raise ValueError("only simplices of dimension 0-2 are supported")
        if any(b <= a for a, b in zip(self.vertices, self.vertices[1:])):
            raise ValueError("vertices must be strictly increasing")
        if self.filtration < 0:
            raise ValueError("filtration value must be non-negative")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def faces(self):
        if self.dim == 0:
            return ()
        return tuple(
            tuple(v for k, v in enumerate(self.vertices) if k != drop)
            for drop in range(len(self.vertices))
        )


def simplex_sort_key(s: Simplex):
    return (s.filtration, s.dim, s.vertices)


@dataclass
class Filtration:
    """Simplices sorted by (filtration, dim, lexicographic vertices)."""

    simplices: list[Simplex]
    max_filtration: float
    max_dim: int
    n_vertices: int

    def __len__(self):
        return len(self.simplices)

    def validate(self, canonical: bool = True) -> None:
        """Check the order is a valid filtration order (faces first, monotone
        filtration values); with canonical=True also enforce the
        (filtration, dim, lexicographic) tie-break."""
        seen: dict[tuple[int, ...], int] = {}
        last_key = None
        last_filtration = -math.inf
        for idx, s in enumerate(self.simplices):
            if s.filtration < last_filtration:
                raise ValueError(f"filtration decreases at position {idx}")
            last_filtration = s.filtration
            if canonical:
                key = simplex_sort_key(s)
                if last_key is not None and key < last_key:
                    raise ValueError(f"simplices out of order at position {idx}")
                last_key = key
            for face in s.faces():
                if face not in seen:
                    raise ValueError(f"face {face} of {s.vertices} missing or later")
                if self.simplices[seen[face]].filtration > s.filtration:
                    raise ValueError(f"face {face} enters after {s.vertices}")
            if s.vertices in seen:
                raise ValueError(f"duplicate simplex {s.vertices}")
            seen[s.vertices] = idx

    def prefix(self, tau: float) -> "Filtration":
        """Sub-filtration of all simplices with entry value <= tau."""
        kept = [s for s in self.simplices if s.filtration <= tau]
        return Filtration(kept, tau, self.max_dim, self.n_vertices)


def build_rips(
    dmat: np.ndarray,
    max_filtration: float,
    max_dim: int = 2,
    double_scale: bool = False,
) -> Filtration:
    """Build the Rips filtration of a distance matrix up to dimension max_dim."""
    dmat = np.asarray(dmat, dtype=float)
    if dmat.ndim != 2 or dmat.shape[0] != dmat.shape[1] or dmat.shape[0] == 0:
        raise ValueError("distance matrix must be square and non-empty")
    if max_filtration <= 0:
        raise ValueError("max_filtration must be > 0")
    if max_dim not in (1, 2):
        raise ValueError("max_dim must be 1 or 2")

    scale = 0.5 if double_scale else 1.0
    n = dmat.shape[0]
    simplices = [Simplex((v,), 0.0) for v in range(n)]
    for i, j in combinations(range(n), 2):
        val = dmat[i, j] * scale
        if val <= max_filtration:
            simplices.append(Simplex((i, j), float(val)))
    if max_dim == 2:
        for i, j, k in combinations(range(n), 3):
            val = max(dmat[i, j], dmat[i, k], dmat[j, k]) * scale
            if val <= max_filtration:
                simplices.append(Simplex((i, j, k), float(val)))
    simplices.sort(key=simplex_sort_key)
    return Filtration(simplices, float(max_filtration), max_dim, n)


def save_filtration_csv(filtration: Filtration, path: str | Path) -> None:
    """Debug dump: one row per simplex, empty cells for absent vertices."""
    lines = ["filtration,dim,v0,v1,v2"]
    for s in filtration.simplices:
        verts = [str(v) for v in s.vertices] + [""] * (3 - len(s.vertices))
        lines.append(f"{s.filtration!r},{s.dim}," + ",".join(verts))
    Path(path).write_text("\n".join(lines) + "\n")
