"""Embedding primitives: normalization, cosine kernels, and set containers.

All arithmetic is float64; bundle files store float32 and are re-normalized
on load. Containers are frozen and their arrays marked read-only, so every
operation here is safe to call concurrently on distinct inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ZeroVector

UNIT_NORM_ATOL = 1e-6


def _as_float64(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def normalize(v) -> np.ndarray:
    """Scale a vector to unit L2 norm.

    Raises ZeroVector if every entry is zero or the norm underflows.
    """
    arr = _as_float64(v, "vector")
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {arr.shape}")
    nrm = float(np.linalg.norm(arr))
    if nrm == 0.0 or not np.isfinite(nrm):
        raise ZeroVector("cannot normalize a zero-norm vector")
    return arr / nrm


def normalize_rows(matrix, name: str = "matrix") -> np.ndarray:
    """Normalize each row of a 2-D array to unit L2 norm."""
    arr = _as_float64(matrix, name)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D array for {name}, got shape {arr.shape}")
    norms = np.linalg.norm(arr, axis=1)
    bad = np.flatnonzero(norms == 0.0)
    if bad.size:
        raise ZeroVector(f"{name} row {bad[0]} has zero norm")
    return arr / norms[:, None]


def cosine(a, b) -> float:
    """Cosine similarity dot(a,b)/(|a||b|) of two nonzero vectors."""
    va = _as_float64(a, "a")
    vb = _as_float64(b, "b")
    if va.shape != vb.shape or va.ndim != 1:
        raise DimensionMismatch(f"cosine needs equal 1-D shapes, got {va.shape} and {vb.shape}")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine undefined for zero vectors")
    return float(np.dot(va, vb) / (na * nb))


def similarity_matrix(regions, attributes) -> np.ndarray:
    """Pairwise cosine matrix: entry (i, j) = cosine(regions[i], attributes[j]).

    Accepts (N, D) and (M, D) arrays (or nested sequences); returns (N, M).
    """
    r = _as_float64(regions, "regions")
    a = _as_float64(attributes, "attributes")
    if r.ndim != 2 or a.ndim != 2 or r.shape[0] == 0 or a.shape[0] == 0:
        raise ValueError("similarity_matrix needs nonempty 2-D inputs")
    if r.shape[1] != a.shape[1]:
        raise DimensionMismatch(
            f"region dim {r.shape[1]} != attribute dim {a.shape[1]}"
        )
    rn = normalize_rows(r, "regions")
    an = normalize_rows(a, "attributes")
    return rn @ an.T


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.float64)
    out.flags.writeable = False
    return out


def _check_unit_rows(arr: np.ndarray, what: str) -> None:
    norms = np.linalg.norm(arr, axis=1)
    if not np.allclose(norms, 1.0, rtol=0.0, atol=UNIT_NORM_ATOL):
        worst = float(np.abs(norms - 1.0).max())
        raise ValueError(f"{what} must be unit-norm within {UNIT_NORM_ATOL}, worst deviation {worst:.3e}")


@dataclass(frozen=True)
class VisionSet:
    """One item's global embedding plus its N region embeddings (all unit-norm)."""

    item_id: str
    global_embedding: np.ndarray  # (D,)
    regions: np.ndarray  # (N, D)

    def __post_init__(self):
        g = _freeze(np.atleast_1d(np.asarray(self.global_embedding, dtype=np.float64)))
        r = _freeze(np.atleast_2d(np.asarray(self.regions, dtype=np.float64)))
        if g.ndim != 1:
            raise ValueError("global embedding must be 1-D")
        if r.shape[0] < 1:
            raise ValueError("a vision set needs at least one region")
        if r.shape[1] != g.shape[0]:
            raise DimensionMismatch(
                f"region dim {r.shape[1]} != global dim {g.shape[0]}"
            )
        if not (np.isfinite(g).all() and np.isfinite(r).all()):
            raise ValueError("vision embeddings must be finite")
        _check_unit_rows(g[None, :], "global embedding")
        _check_unit_rows(r, "region embeddings")
        object.__setattr__(self, "global_embedding", g)
        object.__setattr__(self, "regions", r)

    @property
    def n_regions(self) -> int:
        return self.regions.shape[0]

    @property
    def dim(self) -> int:
        return self.regions.shape[1]


@dataclass(frozen=True)
class SemanticSet:
    """One class's attribute texts and their embeddings (all unit-norm)."""

    class_id: str
    class_name: str
    attribute_texts: tuple[str, ...]
    embeddings: np.ndarray  # (M, D)

    def __post_init__(self):
        e = _freeze(np.atleast_2d(np.asarray(self.embeddings, dtype=np.float64)))
        texts = tuple(str(t) for t in self.attribute_texts)
        if e.shape[0] < 1:
            raise ValueError("a semantic set needs at least one attribute")
        if len(texts) != e.shape[0]:
            raise ValueError(
                f"{len(texts)} attribute texts for {e.shape[0]} embeddings"
            )
        if not np.isfinite(e).all():
            raise ValueError("attribute embeddings must be finite")
        _check_unit_rows(e, "attribute embeddings")
        object.__setattr__(self, "attribute_texts", texts)
        object.__setattr__(self, "embeddings", e)

    @property
    def n_attributes(self) -> int:
        return self.embeddings.shape[0]

    @property
    def dim(self) -> int:
        return self.embeddings.shape[1]

    @property
    def attributes(self) -> tuple[tuple[str, np.ndarray], ...]:
        """(text, embedding) pairs in attribute order."""
        return tuple(zip(self.attribute_texts, self.embeddings))
