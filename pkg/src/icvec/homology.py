"""Persistent homology of filtered complexes (H0 and H1, Z/2 coefficients).

Two routes compute diagrams:

* ``compute_persistence`` runs the standard boundary-matrix column reduction
  over an explicit :class:`~icvec.rips.Filtration`, either plainly or with the
  clearing (twist) optimization. Both variants produce identical diagrams.
* ``rips_persistence`` computes the same diagram for a Rips filtration
  directly from the distance matrix, without enumerating triangles: H0 by
  union-find over edges, H1 by reducing edge-indexed coboundary columns with
  an apparent-pair shortcut and lazily materialized columns. This is the path
  used at experiment scale (hundreds of points, large max filtration).

``betti_numbers`` is an independent oracle (union-find plus Z/2 ranks of the
boundary matrices) used to cross-check both routes.

Zero-persistence pairs (birth == death) are kept out of the public point list
but retained, flagged, in ``PersistenceDiagram.zero_pairs``.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .rips import Filtration

INF = math.inf


@dataclass(frozen=True)
class PersistencePoint:
    dim: int
    birth: float
    death: float

    def __post_init__(self):
        if self.death < self.birth:
            raise ValueError(f"death {self.death} < birth {self.birth}")

    @property
    def persistence(self) -> float:
        return self.death - self.birth

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.death)


_EMPTY_ZEROS = np.empty((0, 3), dtype=float)


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    """Multiset of (dim, birth, death) points; death may be +inf.

    ``zero_pairs`` holds the flagged birth==death pairs as a (k, 3) array of
    (dim, birth, death) rows; they are excluded from ``points``.
    """

    points: tuple[PersistencePoint, ...]
    max_filtration: float
    zero_pairs: np.ndarray = field(default_factory=lambda: _EMPTY_ZEROS)

    def n_points(self, dim: int) -> int:
        return sum(1 for p in self.points if p.dim == dim)

    def points_in(self, dim: int) -> tuple[PersistencePoint, ...]:
        return tuple(p for p in self.points if p.dim == dim)

    def finite_points(self, dim: int, cap_at_max: bool = False) -> np.ndarray:
        """(m, 2) array of (birth, death); capping replaces inf with max_filtration."""
        rows = []
        for p in self.points:
            if p.dim != dim:
                continue
            if p.is_infinite:
                if cap_at_max:
                    rows.append((p.birth, self.max_filtration))
            else:
                rows.append((p.birth, p.death))
        return np.asarray(rows, dtype=float).reshape(-1, 2)

    def as_multiset(self) -> tuple:
        """Canonical sorted form, for exact diagram comparison in tests."""
        return tuple(sorted((p.dim, p.birth, p.death) for p in self.points))

    def zeros_multiset(self) -> tuple:
        return tuple(sorted((int(r[0]), r[1], r[2]) for r in self.zero_pairs))


def _assemble(pairs, essentials, max_filtration, zero_blocks=()) -> PersistenceDiagram:
    pts = []
    zeros = []
    for dim, b, d in pairs:
        if b == d:
            zeros.append((float(dim), b, d))
        else:
            pts.append(PersistencePoint(dim, b, d))
    for dim, b in essentials:
        pts.append(PersistencePoint(dim, b, INF))
    pts.sort(key=lambda p: (p.dim, p.birth, p.death))
    blocks = [np.asarray(zeros, dtype=float).reshape(-1, 3)]
    blocks.extend(zero_blocks)
    zarr = np.concatenate(blocks, axis=0)
    zarr = zarr[np.lexsort((zarr[:, 2], zarr[:, 1], zarr[:, 0]))]
    return PersistenceDiagram(tuple(pts), float(max_filtration), zarr)


# ---------------------------------------------------------------------------
# standard column reduction over an explicit filtration
# ---------------------------------------------------------------------------

def _boundary_columns(filtration: Filtration):
    index = {s.vertices: i for i, s in enumerate(filtration.simplices)}
    cols = []
    for s in filtration.simplices:
        try:
            cols.append({index[f] for f in s.faces()})
        except KeyError as missing:
            raise ValueError(f"malformed filtration: missing face {missing}") from None
    return cols


def compute_persistence(
    filtration: Filtration, variant: str = "plain"
) -> PersistenceDiagram:
    """Birth-death pairs of the filtration by Z/2 column reduction.

    variant="plain" reduces columns left to right; variant="clearing"
    processes dimensions top-down and clears columns of paired creators.
    The resulting diagrams are identical.
    """
    if variant not in ("plain", "clearing"):
        raise ValueError(f"unknown variant {variant!r}")
    simplices = filtration.simplices
    cols = _boundary_columns(filtration)
    filt = [s.filtration for s in simplices]
    dims = [s.dim for s in simplices]
    m = len(simplices)

    lookup: dict[int, int] = {}  # low index -> column owning it
    reduced: dict[int, set[int]] = {}
    cleared = [False] * m

    def reduce_column(j: int) -> None:
        col = cols[j]
        while col:
            low = max(col)
            other = lookup.get(low)
            if other is None:
                lookup[low] = j
                reduced[j] = col
                return
            col = col ^ reduced[other]
        reduced[j] = col

    if variant == "plain":
        for j in range(m):
            reduce_column(j)
    else:
        for d in (2, 1):
            for j in range(m):
                if dims[j] != d or cleared[j]:
                    continue
                reduce_column(j)
                col = reduced[j]
                if col:
                    creator = max(col)
                    cleared[creator] = True
                    reduced[creator] = set()
        for j in range(m):
            if dims[j] == 0:
                reduced[j] = set()

    pairs = []
    destroyed = set()
    for j in range(m):
        col = reduced.get(j)
        if col:
            i = max(col)
            destroyed.add(i)
            pairs.append((dims[i], filt[i], filt[j]))
    essentials = [
        (dims[j], filt[j])
        for j in range(m)
        if dims[j] <= 1 and j not in destroyed and not reduced.get(j)
    ]
    return _assemble(pairs, essentials, filtration.max_filtration)


# ---------------------------------------------------------------------------
# independent Betti-number oracle
# ---------------------------------------------------------------------------

class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.n_components = n

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]  # path halving
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        self.n_components -= 1
        return True


def _gf2_rank(columns: list[int]) -> int:
    """Rank over Z/2 of a matrix given as bitmask columns."""
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            low = col.bit_length() - 1
            if low in pivots:
                col ^= pivots[low]
            else:
                pivots[low] = col
                rank += 1
                break
    return rank


def betti_numbers(filtration: Filtration, tau: float) -> tuple[int, int]:
    """(beta0, beta1) of the prefix complex at scale tau.

    Computed independently of the reduction: union-find for beta0, Z/2 ranks
    of the prefix boundary matrices for beta1.
    """
    if not 0 <= tau <= filtration.max_filtration:
        raise ValueError("tau must lie in [0, max_filtration]")
    vertices = []
    edges = []
    triangles = []
    for s in filtration.simplices:
        if s.filtration > tau:
            continue
        (vertices, edges, triangles)[s.dim].append(s.vertices)

    vindex = {v[0]: i for i, v in enumerate(vertices)}
    uf = UnionFind(len(vertices))
    for (a, b) in edges:
        uf.union(vindex[a], vindex[b])
    beta0 = uf.n_components

    eindex = {e: i for i, e in enumerate(edges)}
    d1 = [(1 << vindex[a]) | (1 << vindex[b]) for (a, b) in edges]
    d2 = [
        (1 << eindex[(a, b)]) | (1 << eindex[(a, c)]) | (1 << eindex[(b, c)])
        for (a, b, c) in triangles
    ]
    rank1 = _gf2_rank(d1)
    rank2 = _gf2_rank(d2)
    assert len(vertices) - rank1 == beta0, "union-find and rank oracle disagree"
    beta1 = (len(edges) - rank1) - rank2
    return beta0, beta1


# ---------------------------------------------------------------------------
# fast Rips path: union-find H0 + coboundary reduction H1
# ---------------------------------------------------------------------------

def _pop_pivot(heap):
    """Pop the minimal entry of a Z/2 heap column (equal pairs cancel)."""
    while heap:
        top = heapq.heappop(heap)
        if heap and heap[0] == top:
            heapq.heappop(heap)
            continue
        return top
    return None


def rips_persistence(
    dmat: np.ndarray,
    max_filtration: float,
    max_dim: int = 2,
    double_scale: bool = False,
) -> PersistenceDiagram:
    """Persistence diagram of the Rips filtration, straight from distances.

    Produces exactly the diagram of
    ``compute_persistence(build_rips(dmat, max_filtration, max_dim))``.
    """
    dm = np.asarray(dmat, dtype=float)
    if dm.ndim != 2 or dm.shape[0] != dm.shape[1] or dm.shape[0] == 0:
        raise ValueError("distance matrix must be square and non-empty")
    if max_filtration <= 0:
        raise ValueError("max_filtration must be > 0")
    if max_dim not in (1, 2):
        raise ValueError("max_dim must be 1 or 2")
    if double_scale:
        dm = dm * 0.5
    F = float(max_filtration)
    n = dm.shape[0]

    iu, ju = np.triu_indices(n, k=1)
    dvals = dm[iu, ju]
    keep = dvals <= F
    eu, ev, ed = iu[keep], ju[keep], dvals[keep]
    order = np.lexsort((ev, eu, ed))
    eu, ev, ed = eu[order], ev[order], ed[order]
    n_edges = len(ed)

    # H0 sweep (Kruskal over the sorted edges): merges are deaths,
    # surviving components are essential classes
    eu_l, ev_l, ed_l = eu.tolist(), ev.tolist(), ed.tolist()
    parent = list(range(n))
    pairs: list[tuple[int, float, float]] = []
    positive_l: list[int] = []
    n_components = n
    for k in range(n_edges):
        x = eu_l[k]
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        y = ev_l[k]
        while parent[y] != y:
            parent[y] = parent[parent[y]]
            y = parent[y]
        if x == y:
            positive_l.append(k)
        else:
            parent[y] = x
            n_components -= 1
            pairs.append((0, 0.0, ed_l[k]))
    essentials: list[tuple[int, float]] = [(0, 0.0)] * n_components

    pos = np.asarray(positive_l, dtype=np.int64)
    if max_dim == 1:
        for k in positive_l:
            essentials.append((1, ed_l[k]))
        return _assemble(pairs, essentials, F)
    if len(pos) == 0:
        return _assemble(pairs, essentials, F)

    erank = np.full((n, n), -1, dtype=np.int64)
    ar = np.arange(n_edges)
    erank[eu, ev] = ar
    erank[ev, eu] = ar

    # Apparent-pair sieve. The oldest cofacet of edge e=(u,v) enters at
    # filtration value ed[e] exactly when some apex w satisfies
    # max(d_uw, d_vw) <= d_uv; the oldest such cofacet is the smallest w.
    # The pair (e, uvw) is apparent when e is also the youngest facet,
    # i.e. both rank(u,w) and rank(v,w) precede rank(u,v). Without an
    # instant apex the oldest cofacet enters strictly later and its
    # youngest facet cannot be e, so e is never apparent.
    apparent = np.zeros(len(pos), dtype=bool)
    wstar = np.full(len(pos), -1, dtype=np.int64)
    chunk = max(1, (1 << 22) // max(n, 1))
    for s in range(0, len(pos), chunk):
        blk = pos[s : s + chunk]
        u, v, duv = eu[blk], ev[blk], ed[blk]
        cof = np.maximum(dm[u], dm[v])
        mask = cof <= duv[:, None]
        rows = np.arange(len(blk))
        mask[rows, u] = False
        mask[rows, v] = False
        w = mask.argmax(axis=1)  # first instant apex = oldest cofacet
        has = mask[rows, w]
        ok = has & (blk > erank[u, w]) & (blk > erank[v, w])
        apparent[s : s + chunk] = ok
        wstar[s : s + chunk] = np.where(has, w, -1)

    def tri_key(a: int, b: int, c: int) -> int:
        return (a * n + b) * n + c

    # apparent pairs are final; their deaths equal their births exactly
    app_idx = np.flatnonzero(apparent)
    app_edges = pos[app_idx]
    tri = np.sort(
        np.stack([eu[app_edges], ev[app_edges], wstar[app_idx]], axis=1), axis=1
    )
    app_keys = (tri[:, 0] * n + tri[:, 1]) * n + tri[:, 2]
    owner_app: dict[int, int] = dict(zip(app_keys.tolist(), app_edges.tolist()))
    ed_app = ed[app_edges]
    h1_zero_block = np.column_stack([np.ones(len(app_edges)), ed_app, ed_app])

    def materialize(e: int) -> list[tuple[float, int, int, int]]:
        u, v = int(eu[e]), int(ev[e])
        cof = np.maximum(dm[u], dm[v])
        np.maximum(cof, ed[e], out=cof)
        cof[u] = np.inf
        cof[v] = np.inf
        ws = np.flatnonzero(cof <= F)
        tri = np.sort(
            np.stack([np.full(len(ws), u), np.full(len(ws), v), ws], axis=1), axis=1
        )
        return list(
            zip(
                cof[ws].tolist(),
                tri[:, 0].tolist(),
                tri[:, 1].tolist(),
                tri[:, 2].tolist(),
            )
        )

    mat_cache: dict[int, list] = {}
    owner_red: dict[int, tuple[int, list]] = {}

    slow = [int(pos[i]) for i in np.flatnonzero(~apparent)]
    for e in reversed(slow):
        heap = materialize(e)
        heapq.heapify(heap)
        while True:
            pivot = _pop_pivot(heap)
            if pivot is None:
                essentials.append((1, float(ed[e])))
                break
            key = tri_key(pivot[1], pivot[2], pivot[3])
            if key in owner_app:
                other = owner_app[key]
                if other not in mat_cache:
                    mat_cache[other] = materialize(other)
                heapq.heappush(heap, pivot)
                for entry in mat_cache[other]:
                    heapq.heappush(heap, entry)
            elif key in owner_red:
                _, column = owner_red[key]
                heapq.heappush(heap, pivot)
                for entry in column:
                    heapq.heappush(heap, entry)
            else:
                owner_red[key] = (e, [pivot] + heap)
                pairs.append((1, float(ed[e]), float(pivot[0])))
                break

    return _assemble(pairs, essentials, F, zero_blocks=(h1_zero_block,))


# ---------------------------------------------------------------------------
# barcodes and diagram files
# ---------------------------------------------------------------------------

def to_barcode(diagram: PersistenceDiagram) -> list[tuple[int, float, float]]:
    """Interval list (dim, birth, death); lossless round trip with from_barcode."""
    return [(p.dim, p.birth, p.death) for p in diagram.points]


def from_barcode(
    intervals, dim: int = 1, max_filtration: float | None = None
) -> PersistenceDiagram:
    """Diagram from intervals given as (birth, death) or (dim, birth, death)."""
    points = []
    for item in intervals:
        if len(item) == 2:
            d, b, dth = dim, float(item[0]), float(item[1])
        elif len(item) == 3:
            d, b, dth = int(item[0]), float(item[1]), float(item[2])
        else:
            raise ValueError(f"interval {item!r} must have 2 or 3 entries")
        if dth < b:
            raise ValueError(f"interval [{b}, {dth}] has death < birth")
        points.append(PersistencePoint(d, b, dth))
    points.sort(key=lambda p: (p.dim, p.birth, p.death))
    if max_filtration is None:
        finite = [p.death for p in points if not p.is_infinite]
        max_filtration = max(finite + [p.birth for p in points], default=0.0)
    return PersistenceDiagram(tuple(points), float(max_filtration))


def save_diagram_csv(diagram: PersistenceDiagram, path: str | Path) -> None:
    lines = ["dim,birth,death"]
    for p in diagram.points:
        death = "inf" if p.is_infinite else repr(p.death)
        lines.append(f"{p.dim},{p.birth!r},{death}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_diagram_csv(path: str | Path, max_filtration: float | None = None) -> PersistenceDiagram:
    lines = Path(path).read_text().strip().splitlines()
    if not lines or lines[0] != "dim,birth,death":
        raise ValueError(f"{path}: expected header dim,birth,death")
    points = []
    for line in lines[1:]:
        dim_s, birth_s, death_s = line.split(",")
        death = INF if death_s == "inf" else float(death_s)
        points.append(PersistencePoint(int(dim_s), float(birth_s), death))
    points.sort(key=lambda p: (p.dim, p.birth, p.death))
    if max_filtration is None:
        finite = [p.death for p in points if not p.is_infinite]
        max_filtration = max(finite + [p.birth for p in points], default=0.0)
    return PersistenceDiagram(tuple(points), float(max_filtration))


