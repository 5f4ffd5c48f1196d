import json
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "otalign"]


def run_cli(*args, expect=0):
    proc = subprocess.run(
        CLI + [str(a) for a in args], capture_output=True, text=True
    )
    assert proc.returncode == expect, f"exit {proc.returncode}\n{proc.stderr}"
    return proc


@pytest.fixture(scope="module")
def bench_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("bench")
    run_cli(
        "synth", "--classes", 3, "--attributes", 3, "--regions", 8, "--dim", 16,
        "--signal", 3, "--sigma", 0.2, "--items", 12, "--seed", 4, "--out", out,
    )
    return out


def test_cropplan_stdout_and_determinism(tmp_path):
    args = ["cropplan", "--width", 224, "--height", 224, "--n-min", 4, "--n-max", 8, "--seed", 11]
    a = run_cli(*args)
    b = run_cli(*args)
    assert a.stdout == b.stdout
    doc = json.loads(a.stdout)
    assert doc["width"] == 224 and doc["seed"] == 11
    assert 4 <= len(doc["rects"]) <= 8
    for rect in doc["rects"]:
        assert rect["x"] + rect["side"] <= 224
        assert rect["y"] + rect["side"] <= 224


def test_cropplan_degenerate_image_is_format_error():
    proc = subprocess.run(
        CLI + ["cropplan", "--width", "1", "--height", "1"], capture_output=True, text=True
    )
    assert proc.returncode == 2
    assert "error" in proc.stderr


def test_synth_writes_bundles_and_labels(bench_dir):
    assert (bench_dir / "vision" / "manifest.json").is_file()
    assert (bench_dir / "semantic" / "manifest.json").is_file()
    labels = json.loads((bench_dir / "labels.json").read_text())
    assert len(labels) == 12


def test_score_emits_jsonl_with_contributions(bench_dir, tmp_path):
    out = tmp_path / "scores.jsonl"
    run_cli(
        "score", "--vision", bench_dir / "vision", "--semantic", bench_dir / "semantic",
        "--top-k", 2, "--out", out,
    )
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 12
    for line in lines:
        rec = json.loads(line)
        assert {"item_id", "predicted_class", "converged", "classes"} <= rec.keys()
        assert len(rec["classes"]) == 2
        top = rec["classes"][0]
        assert top["class_id"] == rec["predicted_class"]
        assert sum(top["per_attribute_contribution"]) == pytest.approx(top["psi"], abs=1e-9)
        assert sum(top["per_attribute_mass"]) == pytest.approx(1.0, abs=1e-6)


def test_score_flags_change_pipeline(bench_dir, tmp_path):
    base = run_cli("score", "--vision", bench_dir / "vision", "--semantic", bench_dir / "semantic")
    no_ot = run_cli(
        "score", "--vision", bench_dir / "vision", "--semantic", bench_dir / "semantic",
        "--no-ot", "--no-vs", "--no-hybrid",
    )
    psi_base = json.loads(base.stdout.split("\n")[0])["classes"][0]["psi"]
    psi_no_ot = json.loads(no_ot.stdout.split("\n")[0])["classes"][0]["psi"]
    assert psi_base != psi_no_ot


def test_eval_single_config_report(bench_dir, tmp_path):
    out = tmp_path / "report.json"
    run_cli(
        "eval", "--vision", bench_dir / "vision", "--semantic", bench_dir / "semantic",
        "--labels", bench_dir / "labels.json", "--out", out,
    )
    doc = json.loads(out.read_text())
    assert doc["n_items"] == 12
    assert len(doc["configs"]) == 1
    cfg = doc["configs"][0]
    assert 0.0 <= cfg["accuracy"] <= 1.0
    assert cfg["seconds_per_item"] > 0
    assert len(cfg["predictions"]) == 12


def test_eval_ablation_rows_in_order(bench_dir, tmp_path):
    out = tmp_path / "ablation.json"
    run_cli(
        "eval", "--vision", bench_dir / "vision", "--semantic", bench_dir / "semantic",
        "--labels", bench_dir / "labels.json", "--ablation", "--out", out,
    )
    doc = json.loads(out.read_text())
    assert [c["label"] for c in doc["configs"]] == [
        "baseline", "baseline+ot", "baseline+ot+vs", "baseline+ot+hybrid", "full",
    ]


def test_eval_sweep_csv(bench_dir, tmp_path):
    out = tmp_path / "sweep.csv"
    run_cli(
        "eval", "--vision", bench_dir / "vision", "--semantic", bench_dir / "semantic",
        "--labels", bench_dir / "labels.json", "--sweep-theta", "--out", out,
    )
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "theta,accuracy"
    assert len(lines) == 7
    thetas = [float(line.split(",")[0]) for line in lines[1:]]
    assert thetas == [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]


def test_ot_check_passes():
    proc = run_cli("ot-check", "--instances", 40, "--seed", 1)
    assert "ot-check" in proc.stdout
    assert "0 failures" in proc.stdout


def test_corrupt_bundle_exits_2(bench_dir, tmp_path):
    bad = tmp_path / "bad"
    bad.mkdir()
    (bad / "manifest.json").write_text("{broken")
    proc = subprocess.run(
        CLI + ["score", "--vision", str(bad), "--semantic", str(bench_dir / "semantic")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2


def test_numerical_failure_exits_3(bench_dir):
    proc = subprocess.run(
        CLI + [
            "score", "--vision", str(bench_dir / "vision"), "--semantic",
            str(bench_dir / "semantic"), "--lambda", "1e-320",
        ],
        capture_output=True, text=True,
    )
    assert proc.returncode == 3
    assert "numerical" in proc.stderr.lower()


def test_missing_labels_file_exits_2(bench_dir):
    proc = subprocess.run(
        CLI + [
            "eval", "--vision", str(bench_dir / "vision"), "--semantic",
            str(bench_dir / "semantic"), "--labels", "/nonexistent/labels.json",
        ],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
