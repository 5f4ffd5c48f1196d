"""Training-free zero-shot classification by entropic optimal-transport
alignment of per-item region embeddings with per-class attribute embeddings."""

from .alignment import (
    AlignmentConfig,
    ClassScore,
    Prediction,
    SelectionResult,
    hybrid_cost,
    hybrid_similarity,
    predict,
    score_class,
    vision_select,
)
from .bundle import EmbeddingBundle, SemanticRecord, VisionRecord, load_bundle, save_bundle
from .core import SemanticSet, VisionSet, cosine, normalize, similarity_matrix
from .cropplan import CropConfig, CropPlan, CropRect, generate_crop_plan, validate_plan
from .evaluate import EvalReport, ablation_configs, run_eval, sweep_theta
from .exact import exact_ot
from .solver import SolverConfig, TransportPlan, sinkhorn, transport_cost
from .synth import SynthConfig, synth_benchmark

__all__ = [
    "AlignmentConfig",
    "ClassScore",
    "CropConfig",
    "CropPlan",
    "CropRect",
    "EmbeddingBundle",
    "EvalReport",
    "Prediction",
    "SelectionResult",
    "SemanticRecord",
    "SemanticSet",
    "SolverConfig",
    "SynthConfig",
    "TransportPlan",
    "VisionRecord",
    "VisionSet",
    "ablation_configs",
    "cosine",
    "exact_ot",
    "generate_crop_plan",
    "hybrid_cost",
    "hybrid_similarity",
    "load_bundle",
    "normalize",
    "predict",
    "run_eval",
    "save_bundle",
    "score_class",
    "similarity_matrix",
    "sinkhorn",
    "sweep_theta",
    "synth_benchmark",
    "transport_cost",
    "validate_plan",
    "vision_select",
]

__version__ = "0.1.0"
