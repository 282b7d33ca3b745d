import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_diagram
from icvec.experiments import instability_diagrams, stable_closed_forms
from icvec.homology import from_barcode
from icvec.vectorize import (
    FeatureVector,
    gaussian_mixture_params,
    interconnectivity_from_barcode,
    interconnectivity_vector,
    load_vector_csv,
    persistence_vector,
    save_vector_csv,
    stable_interconnectivity_vector,
    vector_distance_inf,
)

SQRT2 = math.sqrt(2.0)


class TestPersistenceVector:
    def test_four_identical_points(self):
        dg = from_barcode([(0.01, 0.02)] * 4, dim=1)
        assert persistence_vector(dg).asarray() == pytest.approx([0.01] * 4)

    def test_uniform_and_staircase_families_agree(self):
        a = from_barcode([(0.01, 0.02)] * 4, dim=1)
        b = from_barcode([(0.01, 0.02), (0.02, 0.03), (0.03, 0.04), (0.04, 0.05)], dim=1)
        assert persistence_vector(a).asarray() == pytest.approx(
            persistence_vector(b).asarray()
        )

    def test_single_point_normalized(self):
        dg = from_barcode([(0.0, 1.0)], dim=1)
        assert persistence_vector(dg, normalized=True).values == (1.0,)

    def test_sorted_descending(self):
        dg = from_barcode([(0.0, 0.1), (0.0, 0.5), (0.0, 0.3)], dim=1)
        assert persistence_vector(dg).values == (0.5, 0.3, 0.1)

    def test_empty_dimension_is_an_error(self):
        dg = from_barcode([(0.0, 1.0)], dim=1)
        with pytest.raises(ValueError, match="no usable points"):
            persistence_vector(dg, dim=0)


class TestInterconnectivity:
    def test_counterexample_vectors(self):
        for eps in (0.25, 1.0, 1.75):
            b, bp = instability_diagrams(eps)
            assert interconnectivity_vector(b).values == (2.0, 2.0)
            assert interconnectivity_vector(bp).values == (2.0, 1.0)

    def test_barcode_overlap_asymmetry(self):
        # the short bar sits inside the long bar's disk but not conversely
        dg = from_barcode([(4.5, 8.0), (6.0, 6.5)], dim=1)
        assert interconnectivity_vector(dg).values == (2.0, 1.0)

    def test_single_point(self):
        dg = from_barcode([(0.0, 1.0)], dim=1)
        assert interconnectivity_vector(dg).values == (1.0,)

    def test_barcode_route_matches_diagram_route(self):
        rng = np.random.default_rng(0)
        for _ in range(25):
            dg = random_diagram(rng, max_points=12)
            if dg.n_points(1) == 0:
                continue
            intervals = [(p.birth, p.death) for p in dg.points_in(1)]
            assert (
                interconnectivity_from_barcode(intervals).values
                == interconnectivity_vector(dg).values
            )

    def test_strict_inequality_at_disk_boundary(self):
        # second point exactly on the boundary circle of the first: excluded
        dg = from_barcode([(0.0, 1.0), (1.0, 1.0 + math.sqrt(1.0 - 1.0))], dim=1)
        # distance from (0,1) to (1,1) is 1.0 == radius -> not inside
        assert interconnectivity_vector(dg).values[0] == 1.0

    def test_multiplicity_of_overlapping_points(self):
        dg = from_barcode([(0.0, 1.0)] * 3, dim=1)
        assert interconnectivity_vector(dg).values == (3.0, 3.0, 3.0)

    def test_self_membership_floor(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            dg = random_diagram(rng, max_points=15)
            if dg.n_points(1):
                assert min(interconnectivity_vector(dg).values) >= 1.0

    def test_disk_membership_implies_interval_overlap(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            dg = random_diagram(rng, max_points=10)
            pts = dg.finite_points(1)
            for i in range(len(pts)):
                r2 = (pts[i, 1] - pts[i, 0]) ** 2
                for j in range(len(pts)):
                    if ((pts[j] - pts[i]) ** 2).sum() < r2:
                        assert pts[j, 0] < pts[i, 1] and pts[i, 0] < pts[j, 1]

    def test_scale_invariance(self):
        rng = np.random.default_rng(3)
        for _ in range(15):
            dg = random_diagram(rng, max_points=12)
            if dg.n_points(1) == 0:
                continue
            base = interconnectivity_vector(dg).values
            for c in (0.1, 3.0, 10.0):
                scaled = from_barcode(
                    [(c * p.birth, c * p.death) for p in dg.points_in(1)], dim=1
                )
                assert interconnectivity_vector(scaled).values == base

    def test_permutation_invariance(self):
        rng = np.random.default_rng(4)
        intervals = [(float(b), float(b + p)) for b, p in
                     zip(rng.random(8), rng.random(8) * 0.5 + 0.01)]
        base = interconnectivity_from_barcode(intervals).values
        for _ in range(5):
            rng.shuffle(intervals)
            assert interconnectivity_from_barcode(intervals).values == base

    def test_brute_force_equivalence(self):
        # independent O(N^2) double loop, no vector tricks
        rng = np.random.default_rng(5)
        dg = random_diagram(rng, max_points=200)
        pts = dg.finite_points(1)
        counts = []
        for i in range(len(pts)):
            c = 0
            for j in range(len(pts)):
                dx = pts[j, 0] - pts[i, 0]
                dy = pts[j, 1] - pts[i, 1]
                if dx * dx + dy * dy < (pts[i, 1] - pts[i, 0]) ** 2:
                    c += 1
            counts.append(float(c))
        counts.sort(reverse=True)
        assert interconnectivity_vector(dg).values == tuple(counts)

    def test_empty_barcode_is_an_error(self):
        with pytest.raises(ValueError):
            interconnectivity_from_barcode([])


class TestStableVector:
    def test_single_point_closed_form(self):
        dg = from_barcode([(0.0, 1.0)], dim=1)
        v = stable_interconnectivity_vector(dg, delta=0.5)
        assert v.values[0] == pytest.approx(1.0 / (2.0 * math.pi * 1.5), abs=1e-15)
        assert v.values[0] == pytest.approx(0.106103, abs=1e-6)

    def test_counterexample_closed_forms_on_grid(self):
        # mini version of the acceptance sweep
        for eps in np.linspace(0.04, 1.96, 15):
            for delta in (0.1, 0.5, 2.0):
                b, bp = instability_diagrams(float(eps))
                cf_b, cf_bp = stable_closed_forms(float(eps), delta)
                got_b = stable_interconnectivity_vector(b, delta=delta).asarray()
                got_bp = stable_interconnectivity_vector(bp, delta=delta).asarray()
                assert np.abs(got_b - cf_b).max() < 1e-12
                assert np.abs(got_bp - cf_bp).max() < 1e-12

    def test_peak_bound(self):
        # each entry is at most its own Gaussian's peak height
        rng = np.random.default_rng(6)
        for delta in (0.1, 0.5):
            dg = random_diagram(rng, max_points=20)
            pts = dg.finite_points(1)
            if len(pts) == 0:
                continue
            peaks = 1.0 / (2.0 * math.pi * (pts[:, 1] - pts[:, 0] + delta))
            vals = stable_interconnectivity_vector(dg, delta=delta).asarray()
            assert np.all(vals > 0.0)
            assert vals.max() <= peaks.max() + 1e-15

    def test_singular_covariance_rejected(self):
        dg = from_barcode([(1.0, 1.0), (0.0, 2.0)], dim=1)
        with pytest.raises(ValueError, match="singular"):
            stable_interconnectivity_vector(dg, delta=0.0)
        with pytest.raises(ValueError):
            stable_interconnectivity_vector(dg, delta=-0.5)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(7)
        intervals = [(float(b), float(b + p)) for b, p in
                     zip(rng.random(9), rng.random(9) * 0.5 + 0.01)]
        base = stable_interconnectivity_vector(from_barcode(intervals, dim=1)).values
        rng.shuffle(intervals)
        again = stable_interconnectivity_vector(from_barcode(intervals, dim=1)).values
        assert base == pytest.approx(again, abs=1e-15)

    def test_gaussian_params_invariants(self):
        dg = from_barcode([(0.0, 1.0), (0.5, 0.8)], dim=1)
        params = gaussian_mixture_params(dg.finite_points(1), delta=0.25)
        assert params.weight == 0.5
        assert params.variances == (1.25, pytest.approx(0.55))
        with pytest.raises(ValueError, match="singular"):
            gaussian_mixture_params(np.array([[1.0, 1.0]]), delta=0.0)


class TestVectorDistance:
    def test_counterexample_gap(self):
        a = FeatureVector((2.0, 2.0), "interconnectivity", 1)
        b = FeatureVector((2.0, 1.0), "interconnectivity", 1)
        assert vector_distance_inf(a, b) == 1.0

    def test_identical(self):
        a = FeatureVector((3.0, 1.0), "interconnectivity", 1)
        assert vector_distance_inf(a, a) == 0.0

    def test_zero_padding(self):
        a = FeatureVector((3.0, 1.0), "interconnectivity", 1)
        b = FeatureVector((3.0,), "interconnectivity", 1)
        assert vector_distance_inf(a, b) == 1.0

    def test_method_mismatch(self):
        a = FeatureVector((1.0,), "interconnectivity", 1)
        b = FeatureVector((1.0,), "persistence", 1)
        with pytest.raises(ValueError, match="method mismatch"):
            vector_distance_inf(a, b)

    def test_dim_mismatch(self):
        a = FeatureVector((1.0,), "persistence", 0)
        b = FeatureVector((1.0,), "persistence", 1)
        with pytest.raises(ValueError, match="dimension mismatch"):
            vector_distance_inf(a, b)

    @given(st.lists(st.floats(0.0, 10.0), min_size=1, max_size=8),
           st.lists(st.floats(0.0, 10.0), min_size=1, max_size=8))
    @settings(max_examples=60, deadline=None)
    def test_symmetry_and_nonnegativity(self, xs, ys):
        a = FeatureVector(tuple(sorted(xs, reverse=True)), "persistence", 1)
        b = FeatureVector(tuple(sorted(ys, reverse=True)), "persistence", 1)
        assert vector_distance_inf(a, b) == vector_distance_inf(b, a) >= 0.0


def test_feature_vector_rejects_increasing_entries():
    with pytest.raises(ValueError):
        FeatureVector((1.0, 2.0), "persistence", 1)
    with pytest.raises(ValueError):
        FeatureVector((1.0,), "nope", 1)


def test_vector_csv_round_trip(tmp_path):
    dg = from_barcode([(0.0, 1.0), (0.2, 0.9)], dim=1)
    vec = stable_interconnectivity_vector(dg, delta=0.5)
    path = tmp_path / "vec.csv"
    save_vector_csv(vec, path, source_hash="abc123")
    assert (tmp_path / "vec.csv.json").exists()
    loaded = load_vector_csv(path)
    assert loaded.values == vec.values
    assert loaded.method == "stable_interconnectivity"
    assert loaded.params["delta"] == 0.5
