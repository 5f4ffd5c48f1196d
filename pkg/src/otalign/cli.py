"""Command-line surface.

Subcommands: cropplan, synth, score, eval, ot-check. Every pipeline
hyperparameter is a flag so sweeps need no code changes. Exit codes:
0 success, 2 format error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .alignment import AlignmentConfig, predict
from .bundle import load_bundle, save_bundle
from .cropplan import CropConfig, generate_crop_plan, plan_to_dict
from .errors import FormatError, NumericalError
from .evaluate import ablation_configs, run_eval, sweep_theta, sweep_to_csv
from .exact import exact_ot
from .solver import SolverConfig, sinkhorn, transport_cost
from .synth import SynthConfig, synth_benchmark

THETA_GRID = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theta", type=float, default=0.8, help="hybrid coefficient (default 0.8)")
    p.add_argument("--lambda", dest="lam", type=float, default=0.1,
                   help="entropic regularizer (default 0.1)")
    p.add_argument("--iters", type=int, default=100, help="Sinkhorn iteration cap (default 100)")
    p.add_argument("--tol", type=float, default=1e-6,
                   help="marginal L1 stop threshold (default 1e-6)")
    p.add_argument("--no-vs", action="store_true", help="disable vision selection")
    p.add_argument("--no-hybrid", action="store_true", help="disable the global-prior hybrid")
    p.add_argument("--no-ot", action="store_true", help="disable OT (mean-similarity baseline)")


def _alignment_config(args) -> AlignmentConfig:
    return AlignmentConfig(
        theta=args.theta,
        solver=SolverConfig(lam=args.lam, max_iters=args.iters, tol=args.tol),
        selection_enabled=not args.no_vs,
        hybrid_enabled=not args.no_hybrid,
        ot_enabled=not args.no_ot,
    )


def _write_text(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_labels(path: str) -> dict[str, str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise FormatError(f"labels file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"labels file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in doc.items()
    ):
        raise FormatError("labels must be a JSON object mapping item_id to class_id")
    return doc


def _cmd_cropplan(args) -> int:
    config = CropConfig(
        alpha=args.alpha, beta=args.beta, n_min=args.n_min, n_max=args.n_max,
        seed=args.seed,
    )
    plan = generate_crop_plan(args.width, args.height, config)
    _write_text(json.dumps(plan_to_dict(plan), indent=2) + "\n", args.out)
    return 0


def _cmd_synth(args) -> int:
    config = SynthConfig(
        n_classes=args.classes, m_attributes=args.attributes, n_regions=args.regions,
        dim=args.dim, signal_regions_per_item=args.signal, noise_sigma=args.sigma,
        n_items=args.items, seed=args.seed,
    )
    vision, semantic, labels = synth_benchmark(config)
    import os

    os.makedirs(args.out, exist_ok=True)
    save_bundle(vision, os.path.join(args.out, "vision"))
    save_bundle(semantic, os.path.join(args.out, "semantic"))
    with open(os.path.join(args.out, "labels.json"), "w", encoding="utf-8") as fh:
        json.dump(labels, fh, indent=2)
        fh.write("\n")
    print(f"wrote {config.n_items} items / {config.n_classes} classes to {args.out}")
    return 0


def _cmd_score(args) -> int:
    vision_sets = load_bundle(args.vision).to_vision_sets()
    semantic_sets = load_bundle(args.semantic).to_semantic_sets()
    config = _alignment_config(args)
    lines = []
    for vision in vision_sets:
        pred = predict(vision, semantic_sets, config)
        top = pred.ranked[: args.top_k]
        record = {
            "item_id": pred.item_id,
            "predicted_class": pred.predicted_class,
            "converged": all(s.plan.converged for s in pred.ranked),
            "classes": [
                {
                    "class_id": s.class_id,
                    "psi": s.psi,
                    "per_attribute_mass": [float(x) for x in s.per_attribute_mass],
                    "per_attribute_contribution": [
                        float(x) for x in s.per_attribute_contribution
                    ],
                }
                for s in top
            ],
        }
        lines.append(json.dumps(record))
    _write_text("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_eval(args) -> int:
    vision_sets = load_bundle(args.vision).to_vision_sets()
    semantic_sets = load_bundle(args.semantic).to_semantic_sets()
    labels = _load_labels(args.labels)
    solver = SolverConfig(lam=args.lam, max_iters=args.iters, tol=args.tol)

    if args.sweep_theta:
        rows = sweep_theta(vision_sets, semantic_sets, labels, THETA_GRID, solver)
        _write_text(sweep_to_csv(rows), args.out)
        return 0

    if args.ablation:
        configs = ablation_configs(theta=args.theta, solver=solver)
    else:
        configs = [("cli", _alignment_config(args))]
    report = run_eval(vision_sets, semantic_sets, labels, configs)
    _write_text(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    for res in report.results:
        print(
            f"{res.label}: accuracy {res.accuracy:.4f} "
            f"({res.seconds_per_item * 1e3:.2f} ms/item)",
            file=sys.stderr,
        )
    return 0


def _cmd_ot_check(args) -> int:
    """Compare Sinkhorn against the exact small-instance solver."""
    rng = np.random.default_rng(args.seed)
    config = SolverConfig(lam=args.lam, max_iters=args.iters, tol=args.tol)
    worst_gap = 0.0
    failures = 0
    for _ in range(args.instances):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(1, 6))
        a = rng.normal(size=(n, 8))
        b = rng.normal(size=(m, 8))
        a /= np.linalg.norm(a, axis=1, keepdims=True)
        b /= np.linalg.norm(b, axis=1, keepdims=True)
        cost = 1.0 - a @ b.T
        # Generic random marginals: uniform ones tie the LP vertices on square
        # instances, where small-lambda Sinkhorn provably stalls.
        r = rng.dirichlet(np.ones(n))
        c = rng.dirichlet(np.ones(m))
        plan = sinkhorn(cost, r, c, config)
        approx = transport_cost(plan, cost)
        _, exact_value = exact_ot(cost, r, c)
        gap = approx - exact_value
        worst_gap = max(worst_gap, abs(gap))
        if abs(gap) > args.gap_tol or gap < -1e-9:
            failures += 1
    print(
        f"ot-check: {args.instances} instances, worst |gap| {worst_gap:.3e}, "
        f"{failures} failures at gap tolerance {args.gap_tol:g}"
    )
    if failures:
        raise NumericalError(f"{failures} instances exceeded the Sinkhorn/exact gap tolerance")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="otalign",
        description="Zero-shot classification by OT alignment of embedding sets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cropplan", help="generate a deterministic crop plan JSON")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.6)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--n-min", type=int, default=60)
    p.add_argument("--n-max", type=int, default=90)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_cropplan)

    p = sub.add_parser("synth", help="generate a synthetic benchmark directory")
    p.add_argument("--classes", type=int, default=20)
    p.add_argument("--attributes", type=int, default=6)
    p.add_argument("--regions", type=int, default=16)
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--signal", type=int, default=3)
    p.add_argument("--sigma", type=float, default=0.35)
    p.add_argument("--items", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("score", help="score a vision bundle against a semantic bundle")
    p.add_argument("--vision", required=True)
    p.add_argument("--semantic", required=True)
    p.add_argument("--top-k", type=int, default=5)
    _add_solver_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("eval", help="accuracy evaluation (single config, ablation, or theta sweep)")
    p.add_argument("--vision", required=True)
    p.add_argument("--semantic", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--ablation", action="store_true", help="run the 5-row component study")
    p.add_argument("--sweep-theta", action="store_true",
                   help="emit theta,accuracy CSV over the standard grid")
    _add_solver_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("ot-check", help="Sinkhorn-vs-exact oracle suite on random instances")
    p.add_argument("--instances", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lambda", dest="lam", type=float, default=0.005)
    p.add_argument("--iters", type=int, default=20000)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--gap-tol", type=float, default=1e-3)
    p.set_defaults(func=_cmd_ot_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
