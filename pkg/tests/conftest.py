"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np

from icvec.homology import from_barcode


def random_cloud(rng, max_points=8, dim=None):
    n = int(rng.integers(2, max_points + 1))
    d = dim or int(rng.integers(1, 4))
    return rng.random((n, d))


def random_diagram(rng, max_points=6, dim=1, scale=1.0):
    """Diagram with positive-persistence points in one dimension."""
    n = int(rng.integers(0, max_points + 1))
    births = rng.random(n) * scale
    pers = (rng.random(n) * 0.6 + 0.01) * scale
    return from_barcode(
        [(float(b), float(b + p)) for b, p in zip(births, pers)], dim=dim
    )
