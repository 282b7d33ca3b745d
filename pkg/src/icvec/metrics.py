"""Distances between persistence diagrams.

All metrics use the L-infinity ground distance between diagram points and
charge an unmatched point the distance to its diagonal projection,
(death - birth) / 2. Infinite-death points are excluded (with a warning) or
capped at the diagram's max filtration; the chosen policy applies to both
arguments.

``wasserstein`` solves the diagonally-augmented assignment problem exactly
(scipy's LAP solver); ``wasserstein_bruteforce`` enumerates every partial
matching of small diagrams and is the oracle the solver is tested against.
``bottleneck`` binary-searches the candidate costs with a Kuhn feasibility
matching. ``sliced_wasserstein`` averages 1D transport costs of projections
onto evenly spaced directions through the origin.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .homology import PersistenceDiagram

INFINITE_POLICIES = ("exclude", "cap")


@dataclass(frozen=True)
class MatchingResult:
    """Optimal partial matching: pairs of point indices, None marking the
    diagonal; costs are the unpowered L-infinity ground distances."""

    pairs: tuple[tuple[int | None, int | None], ...]
    costs: tuple[float, ...]
    total: float
    p: float

    @property
    def max_cost(self) -> float:
        return max(self.costs, default=0.0)


def _usable_points(diagram: PersistenceDiagram, dim: int, infinite: str) -> np.ndarray:
    if infinite not in INFINITE_POLICIES:
        raise ValueError(f"infinite policy must be one of {INFINITE_POLICIES}")
    if infinite == "cap":
        if not math.isfinite(diagram.max_filtration):
            raise ValueError("cannot cap infinite points: max filtration is not finite")
        return diagram.finite_points(dim, cap_at_max=True)
    n_inf = sum(1 for p in diagram.points_in(dim) if p.is_infinite)
    if n_inf:
        warnings.warn(
            f"excluding {n_inf} infinite-death point(s) in dimension {dim}",
            stacklevel=3,
        )
    return diagram.finite_points(dim, cap_at_max=False)


def _cross_costs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((a.shape[0], b.shape[0]))
    return np.abs(a[:, None, :] - b[None, :, :]).max(axis=2)


def _diag_costs(a: np.ndarray) -> np.ndarray:
    return (a[:, 1] - a[:, 0]) / 2.0


def _augmented_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(n1+n2) square cost matrix; each point may only use its own diagonal slot."""
    n1, n2 = a.shape[0], b.shape[0]
    full = np.zeros((n1 + n2, n1 + n2))
    full[:n1, :n2] = _cross_costs(a, b)
    ur = np.full((n1, n1), np.inf)
    np.fill_diagonal(ur, _diag_costs(a))
    full[:n1, n2:] = ur
    ll = np.full((n2, n2), np.inf)
    np.fill_diagonal(ll, _diag_costs(b))
    full[n1:, :n2] = ll
    return full


def wasserstein(
    d1: PersistenceDiagram,
    d2: PersistenceDiagram,
    p: float = 1.0,
    dim: int = 1,
    infinite: str = "exclude",
) -> MatchingResult:
    """Exact p-Wasserstein matching between two diagrams in one dimension."""
    if p < 1:
        raise ValueError("p must be >= 1")
    a = _usable_points(d1, dim, infinite)
    b = _usable_points(d2, dim, infinite)
    n1, n2 = a.shape[0], b.shape[0]
    if n1 == 0 and n2 == 0:
        return MatchingResult((), (), 0.0, float(p))
    cost = _augmented_matrix(a, b)
    finite = cost[np.isfinite(cost)]
    scale = float(finite.max(initial=0.0))
    powered = (cost / scale) ** p if scale > 0 else np.zeros_like(cost)
    rows, cols = linear_sum_assignment(powered)
    pairs = []
    costs = []
    for i, j in zip(rows, cols):
        if i < n1 and j < n2:
            pairs.append((int(i), int(j)))
            costs.append(float(cost[i, j]))
        elif i < n1:
            pairs.append((int(i), None))
            costs.append(float(cost[i, j]))
        elif j < n2:
            pairs.append((None, int(j)))
            costs.append(float(cost[i, j]))
    total = 0.0
    if scale > 0:
        total = scale * float(sum((c / scale) ** p for c in costs)) ** (1.0 / p)
    return MatchingResult(tuple(pairs), tuple(costs), total, float(p))


def _kuhn_feasible(allowed: np.ndarray) -> bool:
    """Perfect matching test on a square boolean matrix (augmenting paths)."""
    n = allowed.shape[0]
    match_right = [-1] * n
    adjacency = [np.flatnonzero(allowed[i]).tolist() for i in range(n)]

    def augment(i: int, seen: list[bool]) -> bool:
        for j in adjacency[i]:
            if not seen[j]:
                seen[j] = True
                if match_right[j] == -1 or augment(match_right[j], seen):
                    match_right[j] = i
                    return True
        return False

    for i in range(n):
        if not augment(i, [False] * n):
            return False
    return True


def bottleneck(
    d1: PersistenceDiagram,
    d2: PersistenceDiagram,
    dim: int = 1,
    infinite: str = "exclude",
) -> float:
    """Smallest c so that a perfect matching using only costs <= c exists."""
    a = _usable_points(d1, dim, infinite)
    b = _usable_points(d2, dim, infinite)
    n1, n2 = a.shape[0], b.shape[0]
    if n1 == 0 and n2 == 0:
        return 0.0
    cross = _cross_costs(a, b)
    da, db = _diag_costs(a), _diag_costs(b)
    candidates = np.unique(np.concatenate([cross.ravel(), da, db, [0.0]]))

    def feasible(c: float) -> bool:
        allowed = np.zeros((n1 + n2, n1 + n2), dtype=bool)
        allowed[:n1, :n2] = cross <= c
        allowed[:n1, n2:][np.diag_indices(n1)] = da <= c
        allowed[n1:, :n2][np.diag_indices(n2)] = db <= c
        allowed[n1:, n2:] = True
        return _kuhn_feasible(allowed)

    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def sliced_wasserstein(
    d1: PersistenceDiagram,
    d2: PersistenceDiagram,
    n_directions: int = 50,
    dim: int = 1,
    infinite: str = "exclude",
) -> float:
    """Mean 1D transport cost over evenly spaced projection directions.

    Directions are theta_k = pi/4 + k*pi/M (mod pi), so the diagonal
    direction itself is always on the grid and is the whole grid when M=1.
    Each diagram is augmented with the other's diagonal projections so both
    sides project equally many points.
    """
    if n_directions < 1:
        raise ValueError("n_directions must be >= 1")
    a = _usable_points(d1, dim, infinite)
    b = _usable_points(d2, dim, infinite)
    if a.shape[0] == 0 and b.shape[0] == 0:
        return 0.0

    def diag_proj(x: np.ndarray) -> np.ndarray:
        mid = (x[:, 0] + x[:, 1]) / 2.0
        return np.column_stack([mid, mid])

    side1 = np.vstack([a, diag_proj(b)])
    side2 = np.vstack([b, diag_proj(a)])
    thetas = (np.pi / 4.0 + np.arange(n_directions) * np.pi / n_directions) % np.pi
    total = 0.0
    for theta in thetas:
        u = np.array([math.cos(theta), math.sin(theta)])
        p1 = np.sort(side1 @ u)
        p2 = np.sort(side2 @ u)
        total += float(np.abs(p1 - p2).sum())
    return total / n_directions


def wasserstein_bruteforce(
    d1: PersistenceDiagram,
    d2: PersistenceDiagram,
    p: float = 1.0,
    dim: int = 1,
    infinite: str = "exclude",
    size_limit: int = 6,
) -> float:
    """Exhaustive optimum over all partial matchings of two small diagrams."""
    if p < 1:
        raise ValueError("p must be >= 1")
    a = _usable_points(d1, dim, infinite)
    b = _usable_points(d2, dim, infinite)
    n1, n2 = a.shape[0], b.shape[0]
    if n1 > size_limit or n2 > size_limit:
        raise ValueError(f"brute force limited to {size_limit} points per diagram")
    if n1 == 0 and n2 == 0:
        return 0.0
    cross = _cross_costs(a, b)
    da = _diag_costs(a) ** p
    db = _diag_costs(b) ** p
    cross_p = cross**p
    best = math.inf

    def recurse(i: int, used: int, acc: float) -> None:
        nonlocal best
        if acc >= best:
            return
        if i == n1:
            rest = acc
            for j in range(n2):
                if not used >> j & 1:
                    rest += db[j]
            best = min(best, rest)
            return
        recurse(i + 1, used, acc + da[i])  # point i pays its diagonal cost
        for j in range(n2):
            if not used >> j & 1:
                recurse(i + 1, used | 1 << j, acc + cross_p[i, j])

    recurse(0, 0, 0.0)
    return float(best) ** (1.0 / p)
