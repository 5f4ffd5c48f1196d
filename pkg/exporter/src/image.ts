/** PNG decoding, square cropping, and bicubic resizing to RGB float planes. */

import { PNG } from "pngjs";
import { DecodeFailure } from "./errors.js";

export interface RgbImage {
  width: number;
  height: number;
  /** Row-major RGB triples in [0, 1], length = width * height * 3. */
  data: Float32Array;
}

export function decodePng(bytes: Buffer): RgbImage {
  let png: PNG;
  try {
    png = PNG.sync.read(bytes);
  } catch (err) {
    throw new DecodeFailure(`not a decodable PNG: ${(err as Error).message}`);
  }
  const out = new Float32Array(png.width * png.height * 3);
  for (let p = 0, q = 0; p < png.data.length; p += 4, q += 3) {
    out[q] = png.data[p] / 255;
    out[q + 1] = png.data[p + 1] / 255;
    out[q + 2] = png.data[p + 2] / 255;
  }
  return { width: png.width, height: png.height, data: out };
}

export function encodePng(image: RgbImage): Buffer {
  const png = new PNG({ width: image.width, height: image.height });
  for (let q = 0, p = 0; q < image.data.length; q += 3, p += 4) {
    png.data[p] = Math.round(image.data[q] * 255);
    png.data[p + 1] = Math.round(image.data[q + 1] * 255);
    png.data[p + 2] = Math.round(image.data[q + 2] * 255);
    png.data[p + 3] = 255;
  }
  return PNG.sync.write(png);
}

export function crop(image: RgbImage, x: number, y: number, side: number): RgbImage {
  if (x < 0 || y < 0 || x + side > image.width || y + side > image.height) {
    throw new RangeError(
      `crop ${side}@(${x},${y}) leaves ${image.width}x${image.height} bounds`,
    );
  }
  const out = new Float32Array(side * side * 3);
  for (let row = 0; row < side; row++) {
    const src = ((y + row) * image.width + x) * 3;
    out.set(image.data.subarray(src, src + side * 3), row * side * 3);
  }
  return { width: side, height: side, data: out };
}

/** Cubic convolution weight (Catmull-Rom family, a = -0.5). */
function cubicWeight(t: number): number {
  const a = -0.5;
  const at = Math.abs(t);
  if (at <= 1) return (a + 2) * at ** 3 - (a + 3) * at ** 2 + 1;
  if (at < 2) return a * at ** 3 - 5 * a * at ** 2 + 8 * a * at - 4 * a;
  return 0;
}

/** Separable bicubic resize with edge clamping. */
export function resizeBicubic(image: RgbImage, size: number): RgbImage {
  const { width, height, data } = image;
  const out = new Float32Array(size * size * 3);
  const clamp = (v: number, hi: number) => Math.min(Math.max(v, 0), hi);
  const scaleX = width / size;
  const scaleY = height / size;
  for (let oy = 0; oy < size; oy++) {
    const sy = (oy + 0.5) * scaleY - 0.5;
    const y0 = Math.floor(sy);
    for (let ox = 0; ox < size; ox++) {
      const sx = (ox + 0.5) * scaleX - 0.5;
      const x0 = Math.floor(sx);
      let r = 0;
      let g = 0;
      let b = 0;
      let wsum = 0;
      for (let dy = -1; dy <= 2; dy++) {
        const wy = cubicWeight(sy - (y0 + dy));
        if (wy === 0) continue;
        const py = clamp(y0 + dy, height - 1);
        for (let dx = -1; dx <= 2; dx++) {
          const w = wy * cubicWeight(sx - (x0 + dx));
          if (w === 0) continue;
          const px = clamp(x0 + dx, width - 1);
          const idx = (py * width + px) * 3;
          r += w * data[idx];
          g += w * data[idx + 1];
          b += w * data[idx + 2];
          wsum += w;
        }
      }
      const o = (oy * size + ox) * 3;
      out[o] = r / wsum;
      out[o + 1] = g / wsum;
      out[o + 2] = b / wsum;
    }
  }
  return { width: size, height: size, data: out };
}
