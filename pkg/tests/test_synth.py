import numpy as np
import pytest

from otalign.alignment import AlignmentConfig
from otalign.evaluate import run_eval
from otalign.synth import SynthConfig, synth_benchmark


def test_zero_noise_all_signal_regions_copy_attributes():
    config = SynthConfig(
        n_classes=3, m_attributes=4, n_regions=5, dim=8,
        signal_regions_per_item=5, noise_sigma=0.0, n_items=6, seed=2,
    )
    vision, semantic, labels = synth_benchmark(config)
    attr_rows = {
        rec.class_id: {row.tobytes() for row in rec.tensor} for rec in semantic.records
    }
    for rec in vision.records:
        rows = attr_rows[labels[rec.item_id]]
        for region in rec.tensor[1:]:
            assert region.tobytes() in rows


def test_same_seed_identical_bundles():
    config = SynthConfig(n_classes=4, n_items=12, seed=99)
    v1, s1, l1 = synth_benchmark(config)
    v2, s2, l2 = synth_benchmark(config)
    assert l1 == l2
    for a, b in zip(v1.records + s1.records, v2.records + s2.records):
        assert a.tensor.tobytes() == b.tensor.tobytes()


def test_different_seed_differs():
    v1, _, _ = synth_benchmark(SynthConfig(n_items=4, seed=1))
    v2, _, _ = synth_benchmark(SynthConfig(n_items=4, seed=2))
    assert v1.records[0].tensor.tobytes() != v2.records[0].tensor.tobytes()


def test_shapes_labels_and_balance():
    config = SynthConfig(n_classes=5, m_attributes=3, n_regions=7, dim=16, n_items=20, seed=0)
    vision, semantic, labels = synth_benchmark(config)
    assert len(vision.records) == 20 and len(semantic.records) == 5
    assert all(rec.tensor.shape == (8, 16) for rec in vision.records)
    assert all(rec.tensor.shape == (3, 16) for rec in semantic.records)
    counts = {}
    for cid in labels.values():
        counts[cid] = counts.get(cid, 0) + 1
    assert set(counts.values()) == {4}  # balanced classes


def test_unit_norm_rows():
    vision, semantic, _ = synth_benchmark(SynthConfig(n_items=4, seed=5))
    for rec in list(vision.records) + list(semantic.records):
        norms = np.linalg.norm(rec.tensor.astype(np.float64), axis=1)
        np.testing.assert_allclose(norms, 1.0, atol=1e-6)


def test_full_pipeline_beats_no_ot_baseline():
    # The property under test, not a frozen number: with sparse signal the
    # full pipeline must separate classes better than plain mean similarity.
    config = SynthConfig(
        n_classes=2, m_attributes=4, n_regions=8, dim=16,
        signal_regions_per_item=2, noise_sigma=0.3, n_items=200, seed=7,
    )
    vision, semantic, labels = synth_benchmark(config)
    vs, ss = vision.to_vision_sets(), semantic.to_semantic_sets()
    report = run_eval(
        vs, ss, labels,
        [
            ("baseline", AlignmentConfig(ot_enabled=False, selection_enabled=False, hybrid_enabled=False)),
            ("full", AlignmentConfig()),
        ],
    )
    baseline, full = report.results
    assert full.accuracy > baseline.accuracy


def test_config_validation():
    with pytest.raises(ValueError):
        SynthConfig(dim=1)
    with pytest.raises(ValueError):
        SynthConfig(signal_regions_per_item=99, n_regions=4)
    with pytest.raises(ValueError):
        SynthConfig(noise_sigma=-0.1)
