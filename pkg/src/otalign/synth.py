"""Synthetic embedding benchmark for ablation and sweep studies.

Generates a desk-scale stand-in for a real encoder export. Per-class
attribute prototypes are drawn around a class center (attributes of one class
describe one object, so they correlate). Each item of class y gets
``signal_regions_per_item`` regions that are noisy copies of randomly chosen
attributes of y; the remaining regions are clutter — a mix of uniform random
unit vectors and "confuser" crops resembling attributes of random classes,
the way real crop clutter contains other object-like parts. The global
embedding is the normalized mean of the regions, so it leans toward the
mutually-correlated signal cluster; that is what makes vision selection and
the global-prior hybrid informative here, mirroring the real-data mechanism.

Everything is deterministic in the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bundle import EmbeddingBundle, SemanticRecord, VisionRecord

# Within-class attribute dispersion around the class center; larger values
# decorrelate a class's attributes and weaken the selection signal.
ATTRIBUTE_SPREAD = 0.7
# Fraction of clutter regions that resemble a random class's attribute
# instead of being direction-free noise.
CONFUSER_RATE = 0.45


@dataclass(frozen=True)
class SynthConfig:
    n_classes: int = 20
    m_attributes: int = 6
    n_regions: int = 16
    dim: int = 32
    signal_regions_per_item: int = 3
    noise_sigma: float = 0.35
    n_items: int = 200
    seed: int = 0

    def __post_init__(self):
        if min(self.n_classes, self.m_attributes, self.n_regions, self.n_items) < 1:
            raise ValueError("counts must be positive")
        if self.dim < 2:
            raise ValueError("dim must be at least 2")
        if not (0 <= self.signal_regions_per_item <= self.n_regions):
            raise ValueError("signal_regions_per_item must lie in [0, n_regions]")
        if self.noise_sigma < 0.0:
            raise ValueError("noise_sigma must be nonnegative")


def _unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim)
    return v / np.linalg.norm(v)


def synth_benchmark(
    config: SynthConfig,
) -> tuple[EmbeddingBundle, EmbeddingBundle, dict[str, str]]:
    """Build (vision bundle, semantic bundle, item_id -> class_id labels)."""
    rng = np.random.default_rng(config.seed)
    d = config.dim
    sigma = config.noise_sigma

    class_ids = [f"class-{k:03d}" for k in range(config.n_classes)]
    prototypes = np.empty((config.n_classes, config.m_attributes, d))
    semantic_records = []
    for k, class_id in enumerate(class_ids):
        center = _unit(rng, d)
        for j in range(config.m_attributes):
            a = center + ATTRIBUTE_SPREAD * _unit(rng, d)
            prototypes[k, j] = a / np.linalg.norm(a)
        semantic_records.append(
            SemanticRecord(
                class_id=class_id,
                class_name=f"synthetic {class_id}",
                attribute_texts=tuple(
                    f"{class_id} attribute {j:02d}" for j in range(config.m_attributes)
                ),
                tensor=prototypes[k].astype(np.float32),
            )
        )

    vision_records = []
    labels: dict[str, str] = {}
    for t in range(config.n_items):
        k = t % config.n_classes
        item_id = f"item-{t:05d}"
        labels[item_id] = class_ids[k]

        regions = np.empty((config.n_regions, d))
        signal_slots = set(
            rng.permutation(config.n_regions)[: config.signal_regions_per_item].tolist()
        )
        for s in range(config.n_regions):
            if s in signal_slots:
                attr = prototypes[k, rng.integers(config.m_attributes)]
                if sigma == 0.0:
                    regions[s] = attr
                else:
                    w = attr + sigma * _unit(rng, d)
                    regions[s] = w / np.linalg.norm(w)
            elif rng.random() < CONFUSER_RATE:
                attr = prototypes[rng.integers(config.n_classes), rng.integers(config.m_attributes)]
                w = attr + sigma * _unit(rng, d)
                regions[s] = w / np.linalg.norm(w)
            else:
                regions[s] = _unit(rng, d)
        global_vec = regions.mean(axis=0)
        global_vec = global_vec / np.linalg.norm(global_vec)

        tensor = np.concatenate([global_vec[None, :], regions]).astype(np.float32)
        vision_records.append(VisionRecord(item_id=item_id, tensor=tensor))

    vision_bundle = EmbeddingBundle(role="vision", dim=d, records=tuple(vision_records))
    semantic_bundle = EmbeddingBundle(
        role="semantic", dim=d, records=tuple(semantic_records)
    )
    return vision_bundle, semantic_bundle, labels
