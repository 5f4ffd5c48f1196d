/**
 * Embedding-bundle writer matching the engine's interchange format:
 * a directory with manifest.json plus one headerless little-endian float32
 * tensor file per set. Writes are atomic (temp directory, then rename).
 */

import { mkdirSync, renameSync, rmSync, writeFileSync } from "fs";
import { dirname, join } from "path";

export interface VisionSetOut {
  itemId: string;
  /** (N+1) x dim rows: global embedding first, then regions in plan order. */
  rows: Float32Array[];
}

export interface SemanticSetOut {
  classId: string;
  className: string;
  attributes: string[];
  /** One row per attribute text, in order. */
  rows: Float32Array[];
}

function tensorFileName(identifier: string, index: number): string {
  const slug = identifier.replace(/[^A-Za-z0-9._-]+/g, "_").slice(0, 48) || "set";
  return `${String(index).padStart(5, "0")}_${slug}.f32`;
}

function rowBytes(rows: Float32Array[], dim: number): Buffer {
  const buf = Buffer.alloc(rows.length * dim * 4);
  rows.forEach((row, r) => {
    if (row.length !== dim) {
      throw new RangeError(`row ${r} has dim ${row.length}, expected ${dim}`);
    }
    for (let k = 0; k < dim; k++) {
      buf.writeFloatLE(row[k], (r * dim + k) * 4);
    }
  });
  return buf;
}

function writeBundleDir(path: string, manifest: object, tensors: Map<string, Buffer>): void {
  const tmp = `${path}.tmp-${process.pid}`;
  rmSync(tmp, { recursive: true, force: true });
  mkdirSync(tmp, { recursive: true });
  for (const [name, bytes] of tensors) {
    writeFileSync(join(tmp, name), bytes);
  }
  writeFileSync(join(tmp, "manifest.json"), JSON.stringify(manifest, null, 2) + "\n");
  mkdirSync(dirname(path), { recursive: true });
  rmSync(path, { recursive: true, force: true });
  renameSync(tmp, path);
}

export function writeVisionBundle(path: string, dim: number, sets: VisionSetOut[]): void {
  const tensors = new Map<string, Buffer>();
  const entries = sets.map((set, idx) => {
    const name = tensorFileName(set.itemId, idx);
    tensors.set(name, rowBytes(set.rows, dim));
    return { item_id: set.itemId, regions: set.rows.length - 1, tensor: name };
  });
  writeBundleDir(
    path,
    {
      format: "embedding-bundle",
      version: 1,
      role: "vision",
      dim,
      dtype: "f32",
      endianness: "little",
      sets: entries,
    },
    tensors,
  );
}

export function writeSemanticBundle(path: string, dim: number, sets: SemanticSetOut[]): void {
  const tensors = new Map<string, Buffer>();
  const entries = sets.map((set, idx) => {
    if (set.rows.length !== set.attributes.length) {
      throw new RangeError(
        `${set.classId}: ${set.rows.length} rows for ${set.attributes.length} attributes`,
      );
    }
    const name = tensorFileName(set.classId, idx);
    tensors.set(name, rowBytes(set.rows, dim));
    return {
      class_id: set.classId,
      class_name: set.className,
      attributes: set.attributes,
      tensor: name,
    };
  });
  writeBundleDir(
    path,
    {
      format: "embedding-bundle",
      version: 1,
      role: "semantic",
      dim,
      dtype: "f32",
      endianness: "little",
      sets: entries,
    },
    tensors,
  );
}
