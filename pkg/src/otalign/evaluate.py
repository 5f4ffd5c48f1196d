"""Evaluation harness: accuracy per alignment config, ablations, theta sweep."""

from __future__ import annotations

import time
import tracemalloc
from dataclasses import dataclass, replace
from typing import Sequence

from .alignment import AlignmentConfig, predict
from .core import SemanticSet, VisionSet
from .errors import IdMismatch
from .solver import SolverConfig


@dataclass(frozen=True)
class ItemOutcome:
    item_id: str
    true_class: str
    predicted_class: str


@dataclass(frozen=True)
class ConfigResult:
    label: str
    config: AlignmentConfig
    accuracy: float
    seconds_per_item: float
    outcomes: tuple[ItemOutcome, ...]


@dataclass(frozen=True)
class EvalReport:
    results: tuple[ConfigResult, ...]
    n_items: int
    peak_memory_bytes: int

    def to_dict(self) -> dict:
        return {
            "n_items": self.n_items,
            "peak_memory_bytes": self.peak_memory_bytes,
            "configs": [
                {
                    "label": res.label,
                    "theta": res.config.theta,
                    "lambda": res.config.solver.lam,
                    "iters": res.config.solver.max_iters,
                    "tol": res.config.solver.tol,
                    "selection": res.config.selection_enabled,
                    "hybrid": res.config.hybrid_enabled,
                    "ot": res.config.ot_enabled,
                    "accuracy": res.accuracy,
                    "seconds_per_item": res.seconds_per_item,
                    "predictions": [
                        {
                            "item_id": o.item_id,
                            "true_class": o.true_class,
                            "predicted_class": o.predicted_class,
                            "correct": o.true_class == o.predicted_class,
                        }
                        for o in res.outcomes
                    ],
                }
                for res in self.results
            ],
        }


def ablation_configs(
    theta: float = 0.8, solver: SolverConfig | None = None
) -> list[tuple[str, AlignmentConfig]]:
    """The five component-study rows, in study order."""
    s = solver if solver is not None else SolverConfig()
    base = AlignmentConfig(theta=theta, solver=s)
    return [
        ("baseline", replace(base, ot_enabled=False, selection_enabled=False, hybrid_enabled=False)),
        ("baseline+ot", replace(base, ot_enabled=True, selection_enabled=False, hybrid_enabled=False)),
        ("baseline+ot+vs", replace(base, ot_enabled=True, selection_enabled=True, hybrid_enabled=False)),
        ("baseline+ot+hybrid", replace(base, ot_enabled=True, selection_enabled=False, hybrid_enabled=True)),
        ("full", replace(base, ot_enabled=True, selection_enabled=True, hybrid_enabled=True)),
    ]


def run_eval(
    vision_sets: Sequence[VisionSet],
    semantic_sets: Sequence[SemanticSet],
    labels: dict[str, str],
    configs: Sequence[tuple[str, AlignmentConfig]],
) -> EvalReport:
    """Score every labeled item under every config; item order is preserved."""
    known_items = {v.item_id for v in vision_sets}
    known_classes = {s.class_id for s in semantic_sets}
    missing_items = sorted(set(labels) - known_items)
    if missing_items:
        raise IdMismatch(f"labels reference unknown items: {missing_items[:5]}")
    missing_classes = sorted(set(labels.values()) - known_classes)
    if missing_classes:
        raise IdMismatch(f"labels reference unknown classes: {missing_classes[:5]}")

    items = [v for v in vision_sets if v.item_id in labels]
    if not items:
        raise IdMismatch("no labeled items to evaluate")

    tracemalloc.start()
    results = []
    for label, config in configs:
        outcomes = []
        correct = 0
        started = time.perf_counter()
        for vision in items:
            pred = predict(vision, semantic_sets, config)
            true_class = labels[vision.item_id]
            outcomes.append(
                ItemOutcome(
                    item_id=vision.item_id,
                    true_class=true_class,
                    predicted_class=pred.predicted_class,
                )
            )
            if pred.predicted_class == true_class:
                correct += 1
        elapsed = time.perf_counter() - started
        results.append(
            ConfigResult(
                label=label,
                config=config,
                accuracy=correct / len(items),
                seconds_per_item=elapsed / len(items),
                outcomes=tuple(outcomes),
            )
        )
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    return EvalReport(
        results=tuple(results), n_items=len(items), peak_memory_bytes=int(peak)
    )


def sweep_theta(
    vision_sets: Sequence[VisionSet],
    semantic_sets: Sequence[SemanticSet],
    labels: dict[str, str],
    thetas: Sequence[float],
    solver: SolverConfig | None = None,
) -> list[tuple[float, float]]:
    """Full-pipeline accuracy at each theta, in the given order."""
    configs = [
        (f"theta={t:g}", AlignmentConfig(theta=t, solver=solver or SolverConfig()))
        for t in thetas
    ]
    report = run_eval(vision_sets, semantic_sets, labels, configs)
    return [(cfg.config.theta, cfg.accuracy) for cfg in report.results]


def sweep_to_csv(rows: Sequence[tuple[float, float]]) -> str:
    lines = ["theta,accuracy"]
    lines.extend(f"{theta:g},{accuracy:.6f}" for theta, accuracy in rows)
    return "\n".join(lines) + "\n"
