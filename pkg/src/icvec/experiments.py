"""Experiment harness: the counterexample, stability and data-set studies.

Every experiment writes its report into an output directory:

* ``config.json``  - the full parameter set, enough to re-derive the run
* ``*.csv``        - the result tables (byte-identical under a fixed seed)
* ``*.svg``        - plots rendered from the same tables

Timings go to stderr only, keeping report files deterministic. ``verify``
re-runs an experiment from its config.json and byte-compares the CSVs.
"""

from __future__ import annotations

import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import svgplot
from .homology import PersistenceDiagram, from_barcode, rips_persistence
from .metrics import wasserstein
from .pointcloud import (
    GENERATOR_KINDS,
    distance_matrix,
    generate,
    image_to_point_cloud,
    linked_twist_orbit,
    load_image,
    perturb,
    sliding_window_embed,
)
from .vectorize import (
    DEFAULT_DELTA,
    interconnectivity_vector,
    persistence_vector,
    stable_interconnectivity_vector,
    vector_distance_inf,
)

SQRT2 = math.sqrt(2.0)

RVL_CLASSES = GENERATOR_KINDS  # uniform, normal, lattice, sierpinski
LINKED_TWIST_R = (2.5, 3.5, 4.0, 4.1, 4.3)


class ExperimentAssertionError(AssertionError):
    """An invariant asserted inside an experiment run failed."""


@dataclass
class ExperimentReport:
    name: str
    config: dict
    tables: dict[str, tuple[list[str], list[list]]] = field(default_factory=dict)
    plots: list[tuple[str, dict]] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    def add_table(self, filename: str, header: list[str], rows: list[list]) -> None:
        self.tables[filename] = (header, rows)

    def add_plot(self, filename: str, **kwargs) -> None:
        self.plots.append((filename, kwargs))


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_report(report: ExperimentReport, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = dict(report.config)
    cfg["experiment"] = report.name
    (out / "config.json").write_text(json.dumps(cfg, indent=2, sort_keys=True) + "\n")
    for filename, (header, rows) in report.tables.items():
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(x) for x in row))
        (out / filename).write_text("\n".join(lines) + "\n")
    for filename, kwargs in report.plots:
        svgplot.line_plot_svg(out / filename, **kwargs)
    for phase, seconds in report.timings.items():
        print(f"[{report.name}] {phase}: {seconds:.2f}s", file=sys.stderr)
    return out


# ---------------------------------------------------------------------------
# the two-point diagrams of the instability construction and their
# closed-form stable vectors
# ---------------------------------------------------------------------------

def instability_diagrams(eps: float) -> tuple[PersistenceDiagram, PersistenceDiagram]:
    """The pair (B, B') driving the instability counterexample, 0 < eps < 2.

    B holds (1,2) and a second point at distance 1 - eps/2 along the diagonal
    direction; B' lifts that second point's death by sqrt(2)*eps/2.
    """
    if not 0.0 < eps < 2.0:
        raise ValueError("eps must lie in (0, 2)")
    s = SQRT2 * (0.5 - eps / 4.0)
    b = from_barcode([(1.0, 2.0), (s + 1.0, s + 2.0)], dim=1)
    bp = from_barcode([(1.0, 2.0), (s + 1.0, s + 2.0 + SQRT2 * eps / 2.0)], dim=1)
    return b, bp


def stable_closed_forms(eps: float, delta: float) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form stable-vector entries for B and B', in descending order."""
    q_minus = (0.5 - eps / 4.0) ** 2
    q_plus = (0.5 + eps / 4.0) ** 2
    v_b = (1.0 + math.exp(-2.0 / (delta + 1.0) * q_minus)) / (4.0 * math.pi * (delta + 1.0))
    v1 = (1.0 + math.exp(-(q_minus + q_plus) / (delta + 1.0))) / (4.0 * math.pi * (delta + 1.0))
    alpha = 1.0 / (2.0 + SQRT2 * eps + 2.0 * delta)
    v2 = alpha / (2.0 * math.pi) * (math.exp(-2.0 * alpha * (q_minus + q_plus)) + 1.0)
    return np.array([v_b, v_b]), np.array([max(v1, v2), min(v1, v2)])


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------

def run_instability(
    out_dir: str | Path,
    eps_min: float = 0.05,
    eps_max: float = 1.95,
    eps_count: int = 39,
    **_,
) -> ExperimentReport:
    """Sweep the counterexample: the sup-norm gap stays 1 while W1 -> 0 forces
    the would-be stability constant above sqrt(2)/eps."""
    config = {"eps_min": eps_min, "eps_max": eps_max, "eps_count": eps_count}
    report = ExperimentReport("instability", config)
    grid = np.linspace(eps_min, eps_max, eps_count)
    rows = []
    t0 = time.perf_counter()
    for eps in grid:
        b, bp = instability_diagrams(float(eps))
        v_b = interconnectivity_vector(b)
        v_bp = interconnectivity_vector(bp)
        if v_b.values != (2.0, 2.0):
            raise ExperimentAssertionError(f"v(B) != <2,2> at eps={eps}")
        if v_bp.values != (2.0, 1.0):
            raise ExperimentAssertionError(f"v(B') != <2,1> at eps={eps}")
        dv = vector_distance_inf(v_b, v_bp)
        w1 = wasserstein(b, bp, p=1).total
        rows.append(
            [float(eps), v_b.values[0], v_b.values[1], v_bp.values[0], v_bp.values[1],
             dv, w1, SQRT2 / float(eps)]
        )
    report.timings["sweep"] = time.perf_counter() - t0
    header = ["epsilon", "v_b_0", "v_b_1", "v_bprime_0", "v_bprime_1",
              "dv_inf", "w1", "c_lower_bound"]
    report.add_table("instability.csv", header, rows)
    report.add_plot(
        "c_lower_bound.svg",
        series=[("sqrt(2)/eps", [r[0] for r in rows], [r[7] for r in rows]),
                ("w1", [r[0] for r in rows], [r[6] for r in rows])],
        title="instability counterexample",
        xlabel="epsilon", ylabel="value",
    )
    write_report(report, out_dir)
    return report


def run_stability_curve(
    out_dir: str | Path,
    delta: float = DEFAULT_DELTA,
    eps_count: int = 10000,
    **_,
) -> ExperimentReport:
    """Ratio curves of the stable-vector change against W1 = sqrt(2)*eps/2.

    Emits the true sup-norm ratio and the per-entry ratios. The figure-8
    maximum printed in the source material corresponds to the leading-entry
    ratio (see summary.csv), not the sup-norm one.
    """
    config = {"delta": delta, "eps_count": eps_count}
    report = ExperimentReport("stability-curve", config)
    grid = np.linspace(0.0, 2.0, eps_count + 2)[1:-1]
    rows = []
    t0 = time.perf_counter()
    for eps in grid:
        b, bp = instability_diagrams(float(eps))
        vs_b = stable_interconnectivity_vector(b, delta=delta).asarray()
        vs_bp = stable_interconnectivity_vector(bp, delta=delta).asarray()
        diff = vs_b - vs_bp
        dv_inf = float(np.abs(diff).max())
        dv_lead = float(abs(diff[0]))
        dv_second = float(abs(diff[1]))
        cf_b, cf_bp = stable_closed_forms(float(eps), delta)
        closed_lead = float(abs(cf_b[0] - cf_bp[0]))
        closed_second = float(abs(cf_b[1] - cf_bp[1]))
        scale = SQRT2 / float(eps)
        rows.append(
            [float(eps), dv_inf, scale * dv_inf, dv_lead, scale * dv_lead,
             dv_second, scale * dv_second, closed_lead, closed_second]
        )
    report.timings["sweep"] = time.perf_counter() - t0

    header = ["epsilon", "dv_inf", "ratio_inf", "dv_lead", "ratio_lead",
              "dv_second", "ratio_second", "closed_dv_lead", "closed_dv_second"]
    report.add_table("stability_curve.csv", header, rows)
    arr = np.asarray(rows)
    summary = []
    for label, col in (("ratio_inf", 2), ("ratio_lead", 4), ("ratio_second", 6)):
        k = int(arr[:, col].argmax())
        summary.append([label, arr[k, 0], arr[k, col]])
    report.add_table("summary.csv", ["quantity", "argmax_epsilon", "max_value"], summary)
    report.add_plot(
        "stability_ratio.svg",
        series=[("ratio_inf", arr[:, 0].tolist(), arr[:, 2].tolist()),
                ("ratio_lead", arr[:, 0].tolist(), arr[:, 4].tolist())],
        title=f"stable-vector ratio curves (delta={delta})",
        xlabel="epsilon", ylabel="sqrt(2)/eps * |dv|",
    )
    write_report(report, out_dir)
    return report


def _vector_triple(diagram, delta, dim=1):
    return (
        persistence_vector(diagram, dim=dim).asarray(),
        interconnectivity_vector(diagram, dim=dim).asarray(),
        stable_interconnectivity_vector(diagram, dim=dim, delta=delta).asarray(),
    )


def run_perturb(
    out_dir: str | Path,
    mode: str = "one_point",
    n_points: int = 150,
    cloud_dim: int = 3,
    seed: int = 0,
    delta: float = DEFAULT_DELTA,
    max_filtration: float = 0.8,
    eps_max: float = 0.02,
    eps_count: int = 200,
    wide_eps_max: float = 0.5,
    wide_eps_count: int = 50,
    **_,
) -> ExperimentReport:
    """Perturbation response of unstable vs stable vectors (one cloud, H1).

    Every epsilon reuses the same perturbation seed, so in one_point mode the
    same coordinate moves by a growing amount and the curves are comparable
    across the grid.
    """
    config = {
        "mode": mode, "n_points": n_points, "cloud_dim": cloud_dim, "seed": seed,
        "delta": delta, "max_filtration": max_filtration, "eps_max": eps_max,
        "eps_count": eps_count, "wide_eps_max": wide_eps_max,
        "wide_eps_count": wide_eps_count,
    }
    report = ExperimentReport("perturb", config)
    cloud = generate("uniform", n_points, seed=seed, dim=cloud_dim)
    base = rips_persistence(distance_matrix(cloud), max_filtration)
    if base.n_points(1) == 0:
        raise ExperimentAssertionError("base cloud has an empty H1 diagram; change the seed")
    v_base = interconnectivity_vector(base)
    vs_base = stable_interconnectivity_vector(base, delta=delta)

    def sweep(eps_grid):
        rows = []
        prev_diag = None
        for eps in eps_grid:
            pert = perturb(cloud, float(eps), mode=mode, seed=seed + 1)
            diag = rips_persistence(distance_matrix(pert), max_filtration)
            dv = vector_distance_inf(v_base, interconnectivity_vector(diag))
            dvs = vector_distance_inf(
                vs_base, stable_interconnectivity_vector(diag, delta=delta)
            )
            w1 = wasserstein(base, diag, p=1).total
            w1_step = (
                0.0 if prev_diag is None else wasserstein(prev_diag, diag, p=1).total
            )
            rows.append([float(eps), dv, dvs, w1, w1_step])
            prev_diag = diag
        return rows

    t0 = time.perf_counter()
    narrow = sweep(np.linspace(0.0, eps_max, eps_count))
    report.timings["narrow sweep"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    wide = sweep(np.linspace(0.0, wide_eps_max, wide_eps_count))
    report.timings["wide sweep"] = time.perf_counter() - t0

    header = ["epsilon", "dv_unstable_inf", "dv_stable_inf", "w1_vs_base", "w1_step"]
    report.add_table("perturb_narrow.csv", header, narrow)
    report.add_table("perturb_wide.csv", header, wide)

    narrow_arr = np.asarray(narrow)
    wide_arr = np.asarray(wide)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(narrow_arr[:, 3] > 0, narrow_arr[:, 2] / narrow_arr[:, 3], 0.0)
    c_hat = float(ratios.max())
    jumps = np.abs(np.diff(narrow_arr[:, 2]))
    steps = narrow_arr[1:, 4]
    jump_ok = bool(np.all(jumps <= c_hat * steps + 1e-12))
    unstable_jumps = np.abs(np.diff(wide_arr[:, 1]))
    unit_jump = bool(unstable_jumps.max(initial=0.0) >= 1.0)
    report.add_table(
        "summary.csv",
        ["quantity", "value"],
        [
            ["lipschitz_constant_estimate", c_hat],
            ["stable_jump_bound_ok", jump_ok],
            ["unstable_has_unit_jump", unit_jump],
        ],
    )
    report.add_plot(
        "perturb_narrow.svg",
        series=[("unstable", narrow_arr[:, 0].tolist(), narrow_arr[:, 1].tolist()),
                ("stable", narrow_arr[:, 0].tolist(), narrow_arr[:, 2].tolist())],
        title=f"perturbation response ({mode})",
        xlabel="epsilon", ylabel="||dv||_inf",
    )
    report.add_plot(
        "perturb_wide.svg",
        series=[("unstable", wide_arr[:, 0].tolist(), wide_arr[:, 1].tolist()),
                ("stable", wide_arr[:, 0].tolist(), wide_arr[:, 2].tolist())],
        title=f"perturbation response, wide range ({mode})",
        xlabel="epsilon", ylabel="||dv||_inf",
    )
    write_report(report, out_dir)
    return report


def _average_padded(vectors: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Entrywise mean/std of descending vectors, zero-padded to equal length."""
    width = max(len(v) for v in vectors)
    stack = np.zeros((len(vectors), width))
    for i, v in enumerate(vectors):
        stack[i, : len(v)] = v
    ddof = 1 if len(vectors) > 1 else 0
    return stack.mean(axis=0), stack.std(axis=0, ddof=ddof)


def _emit_vector_tables(report, groups, delta, label_name):
    """groups: ordered {label: [(pv, iv, sv), ...]} across repetitions."""
    method_files = {
        "persistence": "vectors_persistence.csv",
        "interconnectivity": "vectors_interconnectivity.csv",
        "stable": "vectors_stable.csv",
    }
    lead_rows = []
    for m_idx, (method, filename) in enumerate(method_files.items()):
        rows = []
        series = []
        for label, triples in groups.items():
            vectors = [t[m_idx] for t in triples]
            mean, std = _average_padded(vectors)
            for i in range(len(mean)):
                rows.append([label, i, float(mean[i]), float(std[i])])
            positive = mean > 0
            series.append(
                (str(label),
                 (np.flatnonzero(positive) + 1).tolist(),
                 mean[positive].tolist())
            )
        report.add_table(filename, [label_name, "index", "mean_value", "std_value"], rows)
        report.add_plot(
            filename.replace(".csv", ".svg"),
            series=series,
            title=f"average {method} vector",
            xlabel="index", ylabel="value", log_x=True, log_y=True,
        )
    for label, triples in groups.items():
        for rep, (pv, iv, sv) in enumerate(triples):
            lead_rows.append([label, rep, float(pv[0]), float(iv[0]), float(sv[0])])
    report.add_table(
        "leading_entries.csv",
        [label_name, "repetition", "persistence_lead", "interconnectivity_lead", "stable_lead"],
        lead_rows,
    )


def run_rvl(
    out_dir: str | Path,
    n_points: int = 400,
    repetitions: int = 10,
    seed: int = 0,
    delta: float = DEFAULT_DELTA,
    max_filtration: float = SQRT2,
    **_,
) -> ExperimentReport:
    """Random vs normal vs lattice vs Sierpinski clouds: averaged H1 vectors."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    config = {
        "n_points": n_points, "repetitions": repetitions, "seed": seed,
        "delta": delta, "max_filtration": max_filtration,
    }
    report = ExperimentReport("rvl", config)
    groups = {}
    for c_idx, kind in enumerate(RVL_CLASSES):
        triples = []
        t0 = time.perf_counter()
        for rep in range(repetitions):
            rep_seed = int(np.random.default_rng([seed, c_idx, rep]).integers(2**63))
            cloud = generate(kind, n_points, seed=rep_seed)
            diag = rips_persistence(distance_matrix(cloud), max_filtration)
            triples.append(_vector_triple(diag, delta))
        report.timings[kind] = time.perf_counter() - t0
        groups[kind] = triples
    _emit_vector_tables(report, groups, delta, "class")
    write_report(report, out_dir)
    return report


def run_delta_sweep(
    out_dir: str | Path,
    n_points: int = 400,
    seed: int = 0,
    delta_min: float = 1e-3,
    delta_max: float = 10.0,
    delta_count: int = 13,
    max_filtration: float = SQRT2,
    **_,
) -> ExperimentReport:
    """Sup norm of the stable vector against the regularization term delta."""
    config = {
        "n_points": n_points, "seed": seed, "delta_min": delta_min,
        "delta_max": delta_max, "delta_count": delta_count,
        "max_filtration": max_filtration,
    }
    report = ExperimentReport("delta-sweep", config)
    deltas = np.logspace(math.log10(delta_min), math.log10(delta_max), delta_count)
    rows = []
    series = []
    t0 = time.perf_counter()
    for c_idx, kind in enumerate(RVL_CLASSES):
        rep_seed = int(np.random.default_rng([seed, c_idx]).integers(2**63))
        cloud = generate(kind, n_points, seed=rep_seed)
        diag = rips_persistence(distance_matrix(cloud), max_filtration)
        sups = []
        for d in deltas:
            v = stable_interconnectivity_vector(diag, delta=float(d))
            sups.append(v.values[0])
            rows.append([kind, float(d), v.values[0]])
        tail = [s for d, s in zip(deltas, sups) if d >= 1.0]
        if any(b >= a for a, b in zip(tail, tail[1:])):
            raise ExperimentAssertionError(
                f"stable sup norm not strictly decreasing for delta >= 1 on {kind}"
            )
        series.append((kind, deltas.tolist(), sups))
    report.timings["sweep"] = time.perf_counter() - t0
    report.add_table("delta_sweep.csv", ["class", "delta", "stable_sup_norm"], rows)
    report.add_plot(
        "delta_sweep.svg", series=series, title="stable vector sup norm vs delta",
        xlabel="delta", ylabel="sup norm", log_x=True, log_y=True,
    )
    write_report(report, out_dir)
    return report


def run_linked_twist(
    out_dir: str | Path,
    r_values: tuple[float, ...] = LINKED_TWIST_R,
    n_points: int = 1000,
    repetitions: int = 10,
    seed: int = 0,
    delta: float = DEFAULT_DELTA,
    max_filtration: float = SQRT2,
    **_,
) -> ExperimentReport:
    """Averaged H1 vectors of linked-twist orbits for several parameter values."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    config = {
        "r_values": list(r_values), "n_points": n_points, "repetitions": repetitions,
        "seed": seed, "delta": delta, "max_filtration": max_filtration,
    }
    report = ExperimentReport("linked-twist", config)
    groups = {}
    for r_idx, r in enumerate(r_values):
        triples = []
        t0 = time.perf_counter()
        for rep in range(repetitions):
            rng = np.random.default_rng([seed, r_idx, rep])
            x0, y0 = rng.random(2)
            orbit = linked_twist_orbit(float(r), float(x0), float(y0), n_points)
            diag = rips_persistence(distance_matrix(orbit), max_filtration)
            triples.append(_vector_triple(diag, delta))
        report.timings[f"r={r}"] = time.perf_counter() - t0
        groups[f"r={r:g}"] = triples
    _emit_vector_tables(report, groups, delta, "r_value")

    # reported, not asserted: how far the last r value's leading
    # interconnectivity entry sits from the other parameters'
    leads = {
        label: float(np.mean([t[1][0] for t in triples]))
        for label, triples in groups.items()
    }
    labels = list(leads)
    target = labels[-1]
    others = [leads[l] for l in labels[:-1]]
    separation = leads[target] - max(others) if others else 0.0
    report.add_table(
        "summary.csv",
        ["quantity", "value"],
        [[f"lead_separation_{target}_vs_rest", separation]],
    )
    write_report(report, out_dir)
    return report


def run_handwriting(
    out_dir: str | Path,
    image_dir: str | Path = "",
    threshold: float = 128.0,
    delta: float = DEFAULT_DELTA,
    max_filtration: float = SQRT2,
    include_intensity: bool = False,
    **_,
) -> ExperimentReport:
    """Averaged H1 vectors per label over a directory of grayscale images.

    Layout: image_dir/<label>/*.png|*.pgm; each label's vectors are averaged
    across its images.
    """
    image_root = Path(image_dir)
    if not image_root.is_dir():
        raise ValueError(f"image directory {image_dir!r} not found")
    config = {
        "image_dir": str(image_dir), "threshold": threshold, "delta": delta,
        "max_filtration": max_filtration, "include_intensity": include_intensity,
    }
    report = ExperimentReport("handwriting", config)
    labels = sorted(p.name for p in image_root.iterdir() if p.is_dir())
    if not labels:
        raise ValueError(f"no label subdirectories under {image_dir!r}")
    groups = {}
    t0 = time.perf_counter()
    for label in labels:
        triples = []
        files = sorted(
            f for f in (image_root / label).iterdir()
            if f.suffix.lower() in (".png", ".pgm")
        )
        if not files:
            raise ValueError(f"label {label!r} has no readable images")
        for f in files:
            try:
                cloud = image_to_point_cloud(
                    load_image(f), threshold, include_intensity=include_intensity
                )
                diag = rips_persistence(distance_matrix(cloud), max_filtration)
                triples.append(_vector_triple(diag, delta))
            except ValueError as exc:
                raise ValueError(f"{f}: {exc}") from exc
        groups[label] = triples
    report.timings["all labels"] = time.perf_counter() - t0
    _emit_vector_tables(report, groups, delta, "label")
    write_report(report, out_dir)
    return report


def cosine_window_clouds(
    n_windows: int = 100,
    m: int = 2,
    tau: float = 6.0,
    domain_end: float = 6.0 * math.pi,
    amplitude: float = 3.0,
):
    """Sliding-window clouds of cos and amplitude*cos on the same exact grid.

    The sample grid is the set of all evaluation times start + k*tau, so the
    linear interpolation inside the embedding is exact.
    """
    starts = np.linspace(0.0, domain_end, n_windows)
    times = np.unique(np.concatenate([starts + k * tau for k in range(m + 1)]))
    base = sliding_window_embed(
        np.column_stack([times, np.cos(times)]), m, tau, starts=starts
    )
    scaled = sliding_window_embed(
        np.column_stack([times, amplitude * np.cos(times)]), m, tau, starts=starts
    )
    return base, scaled


def run_sliding_window(
    out_dir: str | Path,
    n_windows: int = 100,
    m: int = 2,
    tau: float = 6.0,
    domain_end: float = 6.0 * math.pi,
    amplitude: float = 3.0,
    **_,
) -> ExperimentReport:
    """Delay-embed cos and amplitude*cos; assert equal interconnectivity vectors."""
    config = {
        "n_windows": n_windows, "m": m, "tau": tau,
        "domain_end": domain_end, "amplitude": amplitude,
    }
    report = ExperimentReport("sliding-window", config)
    t0 = time.perf_counter()
    base, scaled = cosine_window_clouds(n_windows, m, tau, domain_end, amplitude)
    d1 = rips_persistence(distance_matrix(base), float(distance_matrix(base).max()))
    dm2 = distance_matrix(scaled)
    d2 = rips_persistence(dm2, float(dm2.max()))
    v1 = interconnectivity_vector(d1)
    v2 = interconnectivity_vector(d2)
    report.timings["embed + persistence"] = time.perf_counter() - t0
    if v1.values != v2.values:
        raise ExperimentAssertionError(
            "interconnectivity vectors of the scaled clouds differ"
        )
    rows = [["cos", i, x] for i, x in enumerate(v1.values)]
    rows += [[f"{amplitude:g}cos", i, x] for i, x in enumerate(v2.values)]
    report.add_table("sliding_window.csv", ["function", "index", "value"], rows)
    report.add_table(
        "summary.csv", ["quantity", "value"], [["vectors_equal", True]]
    )
    write_report(report, out_dir)
    return report


EXPERIMENTS = {
    "instability": run_instability,
    "stability-curve": run_stability_curve,
    "perturb": run_perturb,
    "rvl": run_rvl,
    "delta-sweep": run_delta_sweep,
    "linked-twist": run_linked_twist,
    "handwriting": run_handwriting,
    "sliding-window": run_sliding_window,
}


def rerun_from_config(config_path: str | Path, out_dir: str | Path) -> ExperimentReport:
    cfg = json.loads(Path(config_path).read_text())
    name = cfg.pop("experiment")
    if name not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {name!r} in {config_path}")
    if "r_values" in cfg:
        cfg["r_values"] = tuple(cfg["r_values"])
    return EXPERIMENTS[name](out_dir, **cfg)


def verify_report(report_dir: str | Path) -> list[str]:
    """Re-derive a report from its config and byte-compare the CSV files.

    Returns the list of mismatching or missing file names (empty = verified).
    """
    import tempfile

    report_dir = Path(report_dir)
    config_path = report_dir / "config.json"
    if not config_path.exists():
        raise ValueError(f"{report_dir} has no config.json")
    mismatches = []
    with tempfile.TemporaryDirectory() as tmp:
        rerun_from_config(config_path, tmp)
        tmp = Path(tmp)
        fresh = sorted(p.name for p in tmp.glob("*.csv"))
        existing = sorted(p.name for p in report_dir.glob("*.csv"))
        for name in sorted(set(fresh) | set(existing)):
            a, b = report_dir / name, tmp / name
            if not (a.exists() and b.exists()):
                mismatches.append(name)
            elif a.read_bytes() != b.read_bytes():
                mismatches.append(name)
    return mismatches
