/**
 * Image/text encoder interface with a deterministic seeded implementation.
 *
 * The seeded encoder is offline and reproducible: the checkpoint name seeds
 * a fixed random projection from a hand-rolled feature extraction (pixel
 * grid for images, character trigram hashing for text) into the embedding
 * space. It produces well-formed unit embeddings with the right geometry for
 * interop testing; a real pretrained backend can be plugged in behind the
 * same interface.
 */

import { EncoderFailure } from "./errors.js";
import type { RgbImage } from "./image.js";
import { resizeBicubic } from "./image.js";
import { SplitMix64, fnv1a64 } from "./rng.js";

export interface Encoder {
  readonly name: string;
  readonly dim: number;
  /** Square input resolution crops are resized to before encoding. */
  readonly resolution: number;
  encodeImage(image: RgbImage): Float32Array;
  encodeText(text: string): Float32Array;
}

const GRID = 8; // pooled pixel grid: GRID*GRID*3 raw image features
const TEXT_BUCKETS = GRID * GRID * 3; // same raw width so one projection serves both

function normalize(vec: Float32Array): Float32Array {
  let sq = 0;
  for (const v of vec) sq += v * v;
  const norm = Math.sqrt(sq);
  if (!(norm > 0) || !Number.isFinite(norm)) {
    throw new EncoderFailure("encoder produced a zero or non-finite embedding");
  }
  for (let i = 0; i < vec.length; i++) vec[i] /= norm;
  return vec;
}

export class SeededEncoder implements Encoder {
  readonly name: string;
  readonly dim: number;
  readonly resolution: number;
  private readonly imageProjection: Float64Array; // (dim, RAW) row-major
  private readonly textProjection: Float64Array;

  constructor(checkpoint: string, dim = 64, resolution = 32) {
    this.name = checkpoint;
    this.dim = dim;
    this.resolution = resolution;
    const raw = GRID * GRID * 3;
    this.imageProjection = this.makeProjection(
      new SplitMix64(fnv1a64(`${checkpoint}:image`)),
      raw,
    );
    this.textProjection = this.makeProjection(
      new SplitMix64(fnv1a64(`${checkpoint}:text`)),
      raw,
    );
  }

  private makeProjection(rng: SplitMix64, raw: number): Float64Array {
    const proj = new Float64Array(this.dim * raw);
    for (let i = 0; i < proj.length; i++) {
      proj[i] = rng.nextGaussian() / Math.sqrt(raw);
    }
    return proj;
  }

  private project(features: Float64Array, projection: Float64Array): Float32Array {
    const out = new Float32Array(this.dim);
    for (let d = 0; d < this.dim; d++) {
      let s = 0;
      const row = d * features.length;
      for (let k = 0; k < features.length; k++) {
        s += projection[row + k] * features[k];
      }
      out[d] = s;
    }
    return normalize(out);
  }

  encodeImage(image: RgbImage): Float32Array {
    const pooled =
      image.width === GRID && image.height === GRID
        ? image
        : resizeBicubic(image, GRID);
    const features = new Float64Array(GRID * GRID * 3);
    for (let i = 0; i < features.length; i++) {
      features[i] = pooled.data[i] - 0.5; // center so flat images don't collapse
    }
    // keep a DC component so brightness still matters
    features[0] += 0.25;
    return this.project(features, this.imageProjection);
  }

  encodeText(text: string): Float32Array {
    const features = new Float64Array(TEXT_BUCKETS);
    const padded = `  ${text.toLowerCase()} `;
    for (let i = 0; i + 3 <= padded.length; i++) {
      const tri = padded.slice(i, i + 3);
      const h = fnv1a64(tri);
      const bucket = Number(h % BigInt(TEXT_BUCKETS));
      const sign = (h >> 62n) & 1n ? 1 : -1;
      features[bucket] += sign;
    }
    return this.project(features, this.textProjection);
  }
}

export function makeEncoder(checkpoint: string, dim = 64): Encoder {
  return new SeededEncoder(checkpoint, dim);
}
