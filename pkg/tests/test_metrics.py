import itertools
import math

import numpy as np
import pytest

from conftest import random_diagram
from icvec.experiments import instability_diagrams
from icvec.homology import from_barcode
from icvec.metrics import (
    bottleneck,
    sliced_wasserstein,
    wasserstein,
    wasserstein_bruteforce,
)

SQRT2 = math.sqrt(2.0)


def bottleneck_bruteforce(d1, d2, dim=1):
    """Minimize the max pair cost over every partial matching (small only)."""
    a = d1.finite_points(dim)
    b = d2.finite_points(dim)
    n1, n2 = len(a), len(b)
    best = math.inf
    for k in range(0, min(n1, n2) + 1):
        for rows in itertools.combinations(range(n1), k):
            for cols in itertools.permutations(range(n2), k):
                cost = 0.0
                for i, j in zip(rows, cols):
                    cost = max(cost, float(np.abs(a[i] - b[j]).max()))
                for i in set(range(n1)) - set(rows):
                    cost = max(cost, (a[i, 1] - a[i, 0]) / 2.0)
                for j in set(range(n2)) - set(cols):
                    cost = max(cost, (b[j, 1] - b[j, 0]) / 2.0)
                best = min(best, cost)
    return 0.0 if best is math.inf else best


class TestWasserstein:
    def test_identical_diagrams(self):
        dg = from_barcode([(0.0, 1.0), (0.5, 2.0)], dim=1)
        result = wasserstein(dg, dg, p=1)
        assert result.total == 0.0

    def test_counterexample_distance(self):
        for eps in (0.25, 1.0, 1.5):
            b, bp = instability_diagrams(eps)
            assert wasserstein(b, bp, p=1).total == pytest.approx(
                SQRT2 * eps / 2.0, abs=1e-12
            )

    def test_single_point_vs_empty(self):
        one = from_barcode([(0.0, 2.0)], dim=1)
        empty = from_barcode([], dim=1)
        result = wasserstein(one, empty, p=1)
        assert result.total == 1.0
        assert result.pairs == ((0, None),)

    def test_small_pair_hand_value(self):
        a = from_barcode([(0.0, 1.0)], dim=1)
        b = from_barcode([(0.0, 1.0), (0.4, 0.5)], dim=1)
        assert wasserstein(a, b, p=1).total == pytest.approx(0.05)

    def test_matching_covers_every_point_once(self):
        rng = np.random.default_rng(0)
        d1 = random_diagram(rng, 5)
        d2 = random_diagram(rng, 5)
        result = wasserstein(d1, d2, p=2)
        left = [i for i, _ in result.pairs if i is not None]
        right = [j for _, j in result.pairs if j is not None]
        assert sorted(left) == list(range(len(d1.finite_points(1))))
        assert sorted(right) == list(range(len(d2.finite_points(1))))
        total = sum(c**2 for c in result.costs) ** 0.5
        assert result.total == pytest.approx(total)

    def test_agrees_with_bruteforce(self):
        rng = np.random.default_rng(1)
        for _ in range(40):
            d1 = random_diagram(rng, 5)
            d2 = random_diagram(rng, 5)
            for p in (1.0, 2.0):
                assert wasserstein(d1, d2, p=p).total == pytest.approx(
                    wasserstein_bruteforce(d1, d2, p=p), abs=1e-9
                )

    def test_metric_axioms_sampled(self):
        rng = np.random.default_rng(2)
        diagrams = [random_diagram(rng, 4) for _ in range(6)]
        for d1, d2 in itertools.combinations(diagrams, 2):
            ab = wasserstein(d1, d2, p=1).total
            ba = wasserstein(d2, d1, p=1).total
            assert ab == pytest.approx(ba, abs=1e-12)
            assert ab >= 0.0
        for d1, d2, d3 in itertools.combinations(diagrams, 3):
            assert (
                wasserstein(d1, d3, p=1).total
                <= wasserstein(d1, d2, p=1).total
                + wasserstein(d2, d3, p=1).total
                + 1e-9
            )

    def test_identity_of_indiscernibles(self):
        rng = np.random.default_rng(3)
        d1 = random_diagram(rng, 5)
        shuffled = from_barcode(
            [(p.birth, p.death) for p in reversed(d1.points_in(1))], dim=1
        )
        assert wasserstein(d1, shuffled, p=1).total == pytest.approx(0.0, abs=1e-12)

    def test_p_trend_toward_bottleneck(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            d1 = random_diagram(rng, 6)
            d2 = random_diagram(rng, 6)
            values = [wasserstein(d1, d2, p=p).total for p in (1, 2, 8, 32)]
            bot = bottleneck(d1, d2)
            for a, b in zip(values, values[1:]):
                assert b <= a + 1e-9
            assert values[-1] >= bot - 1e-9
            assert values[-1] <= values[0] + 1e-9

    def test_infinite_points_excluded_with_warning(self):
        d1 = from_barcode([(0.0, 1.0), (0.0, math.inf)], dim=1, max_filtration=2.0)
        d2 = from_barcode([(0.0, 1.0)], dim=1)
        with pytest.warns(UserWarning, match="excluding"):
            assert wasserstein(d1, d2, p=1).total == pytest.approx(0.0)

    def test_capped_infinite_points(self):
        d1 = from_barcode([(0.0, 1.0), (0.0, math.inf)], dim=1, max_filtration=2.0)
        d2 = from_barcode([(0.0, 1.0), (0.0, 2.0)], dim=1, max_filtration=2.0)
        assert wasserstein(d1, d2, p=1, infinite="cap").total == pytest.approx(0.0)

    def test_invalid_p(self):
        dg = from_barcode([(0.0, 1.0)], dim=1)
        with pytest.raises(ValueError):
            wasserstein(dg, dg, p=0.5)


class TestBottleneck:
    def test_identical(self):
        dg = from_barcode([(0.0, 1.0), (0.2, 0.7)], dim=1)
        assert bottleneck(dg, dg) == 0.0

    def test_single_vs_empty(self):
        one = from_barcode([(0.0, 2.0)], dim=1)
        assert bottleneck(one, from_barcode([], dim=1)) == 1.0

    def test_counterexample_single_displacement(self):
        for eps in (0.5, 1.0):
            b, bp = instability_diagrams(eps)
            assert bottleneck(b, bp) == pytest.approx(SQRT2 * eps / 2.0, abs=1e-12)

    def test_agrees_with_bruteforce(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            d1 = random_diagram(rng, 4)
            d2 = random_diagram(rng, 4)
            assert bottleneck(d1, d2) == pytest.approx(
                bottleneck_bruteforce(d1, d2), abs=1e-12
            )

    def test_below_wasserstein(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            d1 = random_diagram(rng, 5)
            d2 = random_diagram(rng, 5)
            assert bottleneck(d1, d2) <= wasserstein(d1, d2, p=1).total + 1e-9


def transport_1d_bruteforce(xs, ys):
    """Min-cost perfect matching of two equal-length 1D lists."""
    best = math.inf
    for perm in itertools.permutations(range(len(ys))):
        best = min(best, sum(abs(xs[i] - ys[j]) for i, j in enumerate(perm)))
    return best


class TestSlicedWasserstein:
    def test_identical(self):
        dg = from_barcode([(0.0, 1.0), (0.3, 0.9)], dim=1)
        assert sliced_wasserstein(dg, dg, 16) == pytest.approx(0.0, abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(7)
        d1 = random_diagram(rng, 6)
        d2 = random_diagram(rng, 6)
        assert sliced_wasserstein(d1, d2, 25) == pytest.approx(
            sliced_wasserstein(d2, d1, 25), abs=1e-12
        )

    def test_single_direction_is_diagonal_and_matches_oracle(self):
        # direction pi/4: both diagrams augmented with diagonal projections,
        # sorted matching is optimal for 1D transport
        d1 = from_barcode([(0.0, 1.0), (0.1, 0.6)], dim=1)
        d2 = from_barcode([(0.0, 1.2)], dim=1)
        a = d1.finite_points(1)
        b = d2.finite_points(1)
        u = np.array([math.cos(math.pi / 4), math.sin(math.pi / 4)])
        proj = lambda pts: [float(p @ u) for p in pts]
        mid = lambda pts: [((x + y) / 2.0, (x + y) / 2.0) for x, y in pts]
        xs = proj(a) + proj(np.array(mid(b)))
        ys = proj(b) + proj(np.array(mid(a)))
        assert sliced_wasserstein(d1, d2, 1) == pytest.approx(
            transport_1d_bruteforce(xs, ys), abs=1e-12
        )

    def test_sorted_matching_is_optimal_oracle(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            xs = rng.random(5).tolist()
            ys = rng.random(5).tolist()
            assert sum(abs(a - b) for a, b in zip(sorted(xs), sorted(ys))) == (
                pytest.approx(transport_1d_bruteforce(xs, ys), abs=1e-12)
            )

    def test_direction_count_stabilizes(self):
        rng = np.random.default_rng(9)
        d1 = random_diagram(rng, 20)
        d2 = random_diagram(rng, 20)
        v64 = sliced_wasserstein(d1, d2, 64)
        v128 = sliced_wasserstein(d1, d2, 128)
        assert abs(v128 - v64) < 0.05 * max(v64, 1e-12)

    def test_empty_both(self):
        empty = from_barcode([], dim=1)
        assert sliced_wasserstein(empty, empty, 4) == 0.0


class TestBruteforceOracle:
    def test_empty_vs_empty(self):
        empty = from_barcode([], dim=1)
        assert wasserstein_bruteforce(empty, empty, 1) == 0.0

    def test_size_limit_enforced(self):
        big = from_barcode([(0.0, 1.0)] * 7, dim=1)
        with pytest.raises(ValueError, match="limited"):
            wasserstein_bruteforce(big, big, 1)
