"""Embedding-bundle interchange format.

A bundle is a directory holding ``manifest.json`` plus one raw tensor file
per set. Tensor files are headerless little-endian float32, row-major,
``rows x dim`` — trivially writable from any encoder ecosystem. The manifest
binds ids, names, and attribute texts to tensor files:

    {
      "format": "embedding-bundle", "version": 1,
      "role": "vision" | "semantic",
      "dim": 512, "dtype": "f32", "endianness": "little",
      "sets": [
        {"item_id": "...", "regions": N, "tensor": "file.f32"}          # vision
        {"class_id": "...", "class_name": "...",
         "attributes": ["...", ...], "tensor": "file.f32"}              # semantic
      ]
    }

Vision tensors have N+1 rows: the whole-item (global) embedding first, then
the N regions in crop-plan order. Semantic tensors have one row per attribute
text, in text order. Raw bytes round-trip losslessly; embeddings are
re-normalized to unit float64 only when converted into VisionSet/SemanticSet.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass

import numpy as np

from .core import SemanticSet, VisionSet, normalize, normalize_rows
from .errors import (
    CorruptManifest,
    MissingTensorFile,
    ShapeMismatch,
    UnsupportedDtype,
)

MANIFEST_NAME = "manifest.json"
FORMAT_NAME = "embedding-bundle"
FORMAT_VERSION = 1
DTYPE_TAG = "f32"
ENDIANNESS_TAG = "little"


@dataclass(frozen=True)
class VisionRecord:
    """Raw float32 rows for one item: global embedding first, then regions."""

    item_id: str
    tensor: np.ndarray  # (N+1, D) float32

    @property
    def n_regions(self) -> int:
        return self.tensor.shape[0] - 1


@dataclass(frozen=True)
class SemanticRecord:
    """Raw float32 rows for one class, one row per attribute text."""

    class_id: str
    class_name: str
    attribute_texts: tuple[str, ...]
    tensor: np.ndarray  # (M, D) float32


@dataclass(frozen=True)
class EmbeddingBundle:
    role: str  # "vision" | "semantic"
    dim: int
    records: tuple

    def __post_init__(self):
        if self.role not in ("vision", "semantic"):
            raise ValueError(f"unknown bundle role {self.role!r}")
        for rec in self.records:
            t = rec.tensor
            if t.ndim != 2 or t.shape[1] != self.dim:
                raise ShapeMismatch(
                    f"tensor shape {t.shape} does not match bundle dim {self.dim}"
                )
            if self.role == "vision" and t.shape[0] < 2:
                raise ShapeMismatch("vision tensors need a global row plus >= 1 region")
            if self.role == "semantic" and t.shape[0] != len(rec.attribute_texts):
                raise ShapeMismatch(
                    f"{len(rec.attribute_texts)} attribute texts for {t.shape[0]} rows"
                )

    def to_vision_sets(self) -> list[VisionSet]:
        if self.role != "vision":
            raise ValueError("not a vision bundle")
        out = []
        for rec in self.records:
            rows = rec.tensor.astype(np.float64)
            out.append(
                VisionSet(
                    item_id=rec.item_id,
                    global_embedding=normalize(rows[0]),
                    regions=normalize_rows(rows[1:], f"regions of {rec.item_id}"),
                )
            )
        return out

    def to_semantic_sets(self) -> list[SemanticSet]:
        if self.role != "semantic":
            raise ValueError("not a semantic bundle")
        return [
            SemanticSet(
                class_id=rec.class_id,
                class_name=rec.class_name,
                attribute_texts=rec.attribute_texts,
                embeddings=normalize_rows(
                    rec.tensor.astype(np.float64), f"attributes of {rec.class_id}"
                ),
            )
            for rec in self.records
        ]


def _tensor_filename(identifier: str, index: int) -> str:
    slug = re.sub(r"[^A-Za-z0-9._-]+", "_", identifier)[:48] or "set"
    return f"{index:05d}_{slug}.f32"


def save_bundle(bundle: EmbeddingBundle, path) -> None:
    """Write manifest.json plus one .f32 file per set into a directory."""
    os.makedirs(path, exist_ok=True)
    sets = []
    for idx, rec in enumerate(bundle.records):
        if bundle.role == "vision":
            fname = _tensor_filename(rec.item_id, idx)
            sets.append(
                {"item_id": rec.item_id, "regions": rec.n_regions, "tensor": fname}
            )
        else:
            fname = _tensor_filename(rec.class_id, idx)
            sets.append(
                {
                    "class_id": rec.class_id,
                    "class_name": rec.class_name,
                    "attributes": list(rec.attribute_texts),
                    "tensor": fname,
                }
            )
        tensor = np.ascontiguousarray(rec.tensor, dtype="<f4")
        tensor.tofile(os.path.join(path, fname))
    manifest = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "role": bundle.role,
        "dim": bundle.dim,
        "dtype": DTYPE_TAG,
        "endianness": ENDIANNESS_TAG,
        "sets": sets,
    }
    with open(os.path.join(path, MANIFEST_NAME), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def _manifest_field(doc: dict, key: str):
    if key not in doc:
        raise CorruptManifest(f"manifest is missing {key!r}")
    return doc[key]


def load_bundle(path) -> EmbeddingBundle:
    """Load a bundle directory; raw tensor bytes are preserved exactly."""
    manifest_path = os.path.join(path, MANIFEST_NAME)
    if not os.path.isfile(manifest_path):
        raise CorruptManifest(f"no {MANIFEST_NAME} in {path}")
    try:
        with open(manifest_path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CorruptManifest(f"manifest is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CorruptManifest("manifest must be a JSON object")
    if _manifest_field(doc, "format") != FORMAT_NAME:
        raise CorruptManifest(f"unknown format tag {doc.get('format')!r}")
    dtype = _manifest_field(doc, "dtype")
    if dtype != DTYPE_TAG:
        raise UnsupportedDtype(f"unsupported dtype tag {dtype!r} (only {DTYPE_TAG!r})")
    endianness = _manifest_field(doc, "endianness")
    if endianness != ENDIANNESS_TAG:
        raise CorruptManifest(f"unsupported endianness {endianness!r}")
    role = _manifest_field(doc, "role")
    if role not in ("vision", "semantic"):
        raise CorruptManifest(f"unknown role {role!r}")
    dim = _manifest_field(doc, "dim")
    if not isinstance(dim, int) or dim < 1:
        raise CorruptManifest(f"dim must be a positive integer, got {dim!r}")
    sets = _manifest_field(doc, "sets")
    if not isinstance(sets, list):
        raise CorruptManifest("sets must be a list")

    records = []
    for entry in sets:
        if not isinstance(entry, dict):
            raise CorruptManifest("each set entry must be a JSON object")
        tensor_name = entry.get("tensor")
        if not isinstance(tensor_name, str):
            raise CorruptManifest("set entry is missing its tensor path")
        tensor_path = os.path.join(path, tensor_name)
        if not os.path.isfile(tensor_path):
            raise MissingTensorFile(f"tensor file {tensor_name!r} not found in {path}")
        if role == "vision":
            if "item_id" not in entry or "regions" not in entry:
                raise CorruptManifest("vision set entry needs item_id and regions")
            rows = int(entry["regions"]) + 1
        else:
            if "class_id" not in entry or "attributes" not in entry:
                raise CorruptManifest("semantic set entry needs class_id and attributes")
            if not isinstance(entry["attributes"], list) or not entry["attributes"]:
                raise CorruptManifest("attributes must be a nonempty list of texts")
            rows = len(entry["attributes"])
        expected = rows * dim * 4
        actual = os.path.getsize(tensor_path)
        if actual != expected:
            raise ShapeMismatch(
                f"tensor {tensor_name!r} is {actual} bytes, expected {expected} "
                f"({rows}x{dim} f32)"
            )
        tensor = np.fromfile(tensor_path, dtype="<f4").reshape(rows, dim)
        if role == "vision":
            records.append(VisionRecord(item_id=str(entry["item_id"]), tensor=tensor))
        else:
            records.append(
                SemanticRecord(
                    class_id=str(entry["class_id"]),
                    class_name=str(entry.get("class_name", entry["class_id"])),
                    attribute_texts=tuple(str(t) for t in entry["attributes"]),
                    tensor=tensor,
                )
            )
    return EmbeddingBundle(role=role, dim=dim, records=tuple(records))
