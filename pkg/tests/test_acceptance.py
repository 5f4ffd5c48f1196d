"""Acceptance suite: one test per primary criterion, at its stated tolerance.

Each test prints a single `[ACCEPTANCE] name: PASS/FAIL` line (run with -s to
see them on success; they also appear in captured output on failure).
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from otalign.alignment import AlignmentConfig, predict, score_class, vision_select
from otalign.core import SemanticSet, VisionSet
from otalign.cropplan import CropConfig, generate_crop_plan, sample_scales, validate_plan
from otalign.evaluate import ablation_configs, run_eval
from otalign.exact import exact_ot
from otalign.solver import SolverConfig, sinkhorn, transport_cost
from otalign.synth import SynthConfig, synth_benchmark

CLI = [sys.executable, "-m", "otalign"]


def _report(name: str, ok: bool, detail: str) -> None:
    print(f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'} — {detail}")
    assert ok, f"{name}: {detail}"


def _unit_rows(rng, n, d):
    rows = rng.normal(size=(n, d))
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def _cosine_cost(rng, n, m, dim):
    return 1.0 - _unit_rows(rng, n, dim) @ _unit_rows(rng, m, dim).T


def test_sinkhorn_feasibility():
    # 1,000 random instances (N<=90, M<=20, cosine-scale costs) at lambda=0.1:
    # every converged plan violates marginals by < 1e-6 in L1; >= 99% converge
    # within 100 iterations; < 30 s total.
    rng = np.random.default_rng(123)
    config = SolverConfig(lam=0.1, max_iters=100, tol=1e-6)
    converged = 0
    worst_violation = 0.0
    started = time.perf_counter()
    for t in range(1000):
        n = int(rng.integers(2, 91))
        m = int(rng.integers(2, 21))
        cost = _cosine_cost(rng, n, m, 32)
        if t % 2 == 0:
            r = np.full(n, 1.0 / n)
        else:
            keep = rng.random(n) < 0.5
            if not keep.any():
                keep[int(rng.integers(n))] = True
            r = np.where(keep, 1.0 / keep.sum(), 0.0)
        c = np.full(m, 1.0 / m)
        plan = sinkhorn(cost, r, c, config)
        if plan.converged:
            converged += 1
            violation = max(
                float(np.abs(plan.row_sums() - r).sum()),
                float(np.abs(plan.col_sums() - c).sum()),
            )
            worst_violation = max(worst_violation, violation)
    elapsed = time.perf_counter() - started
    ok = converged >= 990 and worst_violation < 1e-6 and elapsed < 30.0
    _report(
        "sinkhorn-feasibility",
        ok,
        f"{converged}/1000 converged <=100 iters, worst L1 violation "
        f"{worst_violation:.2e}, {elapsed:.1f}s",
    )


def test_exact_ot_agreement():
    # 200 random instances with N*M <= 25 at lambda=0.005 (log-domain):
    # transport cost within 1e-3 of the exact optimum and never below it by
    # more than 1e-9; < 60 s total.
    rng = np.random.default_rng(7)
    config = SolverConfig(lam=0.005, max_iters=200_000, tol=1e-10)
    worst_gap = 0.0
    most_negative = 0.0
    started = time.perf_counter()
    for _ in range(200):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(1, 6))
        cost = _cosine_cost(rng, n, m, 16)
        r = rng.dirichlet(np.ones(n))
        c = rng.dirichlet(np.ones(m))
        plan = sinkhorn(cost, r, c, config)
        gap = transport_cost(plan, cost) - exact_ot(cost, r, c)[1]
        worst_gap = max(worst_gap, abs(gap))
        most_negative = min(most_negative, gap)
    elapsed = time.perf_counter() - started
    ok = worst_gap <= 1e-3 and most_negative >= -1e-9 and elapsed < 60.0
    _report(
        "exact-ot-agreement",
        ok,
        f"worst |gap| {worst_gap:.2e}, most negative gap {most_negative:.2e}, "
        f"{elapsed:.1f}s",
    )


def test_theta_zero_collapse():
    # On 50 random multi-class problems the full pipeline at theta=0 scores
    # every class within 1e-5 of the global mean-similarity baseline and
    # predicts the same class.
    rng = np.random.default_rng(17)
    config = AlignmentConfig(theta=0.0)
    worst = 0.0
    mismatches = 0
    for _ in range(50):
        dim = int(rng.integers(8, 33))
        vision = VisionSet(
            "item", _unit_rows(rng, 1, dim)[0], _unit_rows(rng, int(rng.integers(4, 20)), dim)
        )
        semantics = []
        for k in range(int(rng.integers(2, 9))):
            m = int(rng.integers(2, 8))
            semantics.append(
                SemanticSet(
                    f"class-{k:02d}", f"class {k}",
                    tuple(f"a{j}" for j in range(m)), _unit_rows(rng, m, dim),
                )
            )
        pred = predict(vision, semantics, config)
        baseline = {
            s.class_id: float(np.mean(s.embeddings @ vision.global_embedding))
            for s in semantics
        }
        for score in pred.ranked:
            worst = max(worst, abs(score.psi - baseline[score.class_id]))
        baseline_winner = sorted(baseline, key=lambda k: (-baseline[k], k))[0]
        if pred.predicted_class != baseline_winner:
            mismatches += 1
    ok = worst < 1e-5 and mismatches == 0
    _report(
        "theta-zero-collapse",
        ok,
        f"worst |psi - global mean| {worst:.2e}, {mismatches} prediction mismatches",
    )


def test_ablation_ordering():
    # Pinned synthetic config: accuracy(baseline+OT) > accuracy(baseline) and
    # accuracy(full) >= accuracy(baseline+OT), each by more than 2 points;
    # < 2 min total.
    started = time.perf_counter()
    config = SynthConfig(
        n_classes=20, m_attributes=6, n_regions=16, dim=32,
        signal_regions_per_item=3, noise_sigma=0.35, n_items=200, seed=0,
    )
    vision, semantic, labels = synth_benchmark(config)
    report = run_eval(
        vision.to_vision_sets(), semantic.to_semantic_sets(), labels, ablation_configs()
    )
    elapsed = time.perf_counter() - started
    acc = {res.label: res.accuracy for res in report.results}
    ot_margin = acc["baseline+ot"] - acc["baseline"]
    full_margin = acc["full"] - acc["baseline+ot"]
    ok = ot_margin > 0.02 and full_margin > 0.02 and elapsed < 120.0
    _report(
        "ablation-ordering",
        ok,
        "accuracies "
        + " ".join(f"{label}={acc[label]:.3f}" for label, _ in ablation_configs())
        + f"; OT margin {ot_margin * 100:+.1f}pts, full margin {full_margin * 100:+.1f}pts, "
        f"{elapsed:.1f}s",
    )


def test_vision_selection_guarantees():
    # 1,000 random vision sets: at least one region selected, delta equals the
    # mean cosine within 1e-9, and unselected plan rows are exactly zero.
    rng = np.random.default_rng(29)
    worst_delta_err = 0.0
    empty_selections = 0
    nonzero_dropped_rows = 0
    for _ in range(1000):
        dim = int(rng.integers(4, 33))
        n = int(rng.integers(1, 24))
        vision = VisionSet("item", _unit_rows(rng, 1, dim)[0], _unit_rows(rng, n, dim))
        sel = vision_select(vision)
        if not sel.positive_mask.any():
            empty_selections += 1
        cos = vision.regions @ vision.global_embedding
        worst_delta_err = max(worst_delta_err, abs(sel.delta - float(np.mean(cos))))
        semantic = SemanticSet(
            "c", "c", tuple(f"a{j}" for j in range(4)), _unit_rows(rng, 4, dim)
        )
        score = score_class(vision, semantic, AlignmentConfig())
        dropped = ~sel.positive_mask
        if dropped.any() and (score.plan.entries[dropped] != 0.0).any():
            nonzero_dropped_rows += 1
    ok = empty_selections == 0 and worst_delta_err < 1e-9 and nonzero_dropped_rows == 0
    _report(
        "vision-selection",
        ok,
        f"empty selections {empty_selections}, worst delta error {worst_delta_err:.2e}, "
        f"plans with mass on dropped rows {nonzero_dropped_rows}",
    )


def test_crop_plan_law(tmp_path):
    # 10,000 sampled scales at alpha=0.6, beta=1.0 all in [0.6, 1.0]; every
    # rect in-bounds; identical seeds give byte-identical plans across two
    # separate processes.
    scales = sample_scales(0.6, 1.0, seed=31337, count=10_000)
    scales_ok = all(0.6 <= g <= 1.0 for g in scales)

    rects_ok = True
    for seed in range(20):
        config = CropConfig(alpha=0.6, beta=1.0, n_min=60, n_max=90, seed=seed)
        plan = generate_crop_plan(
            int(np.random.default_rng(seed).integers(64, 512)),
            int(np.random.default_rng(seed + 1).integers(64, 512)),
            config,
        )
        if validate_plan(plan, config):
            rects_ok = False

    args = [
        "cropplan", "--width", "224", "--height", "224", "--alpha", "0.6",
        "--beta", "1.0", "--seed", "424242",
    ]
    first = subprocess.run(CLI + args, capture_output=True, text=True)
    second = subprocess.run(CLI + args, capture_output=True, text=True)
    process_ok = (
        first.returncode == 0
        and second.returncode == 0
        and first.stdout == second.stdout
        and len(first.stdout) > 0
    )
    ok = scales_ok and rects_ok and process_ok
    _report(
        "crop-plan-law",
        ok,
        f"scales in bounds: {scales_ok}, plans validate: {rects_ok}, "
        f"cross-process identical: {process_ok}",
    )


def test_theta_sweep_shape(tmp_path):
    # The sweep CLI emits exactly one CSV row per theta in {0,...,1.0} and
    # accuracy(0.8) >= accuracy(0).
    bench = tmp_path / "bench"
    gen = subprocess.run(
        CLI + ["synth", "--seed", "0", "--out", str(bench)], capture_output=True, text=True
    )
    assert gen.returncode == 0, gen.stderr
    out = tmp_path / "sweep.csv"
    proc = subprocess.run(
        CLI + [
            "eval", "--vision", str(bench / "vision"), "--semantic",
            str(bench / "semantic"), "--labels", str(bench / "labels.json"),
            "--sweep-theta", "--out", str(out),
        ],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    lines = out.read_text().strip().split("\n")
    header_ok = lines[0] == "theta,accuracy"
    rows = [line.split(",") for line in lines[1:]]
    thetas = [float(t) for t, _ in rows]
    accs = {float(t): float(a) for t, a in rows}
    shape_ok = header_ok and thetas == [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
    hybrid_beats_global = accs.get(0.8, -1.0) >= accs.get(0.0, 2.0)
    ok = shape_ok and hybrid_beats_global
    _report(
        "theta-sweep-shape",
        ok,
        f"6 rows: {shape_ok}, acc(0.8)={accs.get(0.8):.3f} >= acc(0)={accs.get(0.0):.3f}: "
        f"{hybrid_beats_global}",
    )


def test_per_item_cost():
    # Scoring one synthetic item against 100 classes (N=90, M=10) stays under
    # 0.5 s single-threaded.
    rng = np.random.default_rng(41)
    dim = 32
    vision = VisionSet("item", _unit_rows(rng, 1, dim)[0], _unit_rows(rng, 90, dim))
    semantics = [
        SemanticSet(
            f"class-{k:03d}", f"class {k}",
            tuple(f"a{j}" for j in range(10)), _unit_rows(rng, 10, dim),
        )
        for k in range(100)
    ]
    predict(vision, semantics[:2], AlignmentConfig())  # warm any lazy paths
    started = time.perf_counter()
    predict(vision, semantics, AlignmentConfig())
    elapsed = time.perf_counter() - started
    ok = elapsed < 0.5
    _report("per-item-cost", ok, f"100 classes at N=90, M=10 in {elapsed * 1e3:.1f} ms")
