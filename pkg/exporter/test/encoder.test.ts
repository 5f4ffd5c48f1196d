import { describe, expect, it } from "vitest";
import { makeEncoder } from "../src/encoder.js";
import type { RgbImage } from "../src/image.js";

function noiseImage(seed: number, size = 32): RgbImage {
  const data = new Float32Array(size * size * 3);
  let state = seed;
  for (let i = 0; i < data.length; i++) {
    state = (state * 1103515245 + 12345) & 0x7fffffff;
    data[i] = state / 0x7fffffff;
  }
  return { width: size, height: size, data };
}

function norm(v: Float32Array): number {
  let s = 0;
  for (const x of v) s += x * x;
  return Math.sqrt(s);
}

describe("seeded encoder", () => {
  it("is deterministic for a fixed checkpoint", () => {
    const a = makeEncoder("mock-vit-16");
    const b = makeEncoder("mock-vit-16");
    expect(a.encodeImage(noiseImage(7))).toEqual(b.encodeImage(noiseImage(7)));
    expect(a.encodeText("striped tail")).toEqual(b.encodeText("striped tail"));
  });

  it("differs across checkpoints", () => {
    const a = makeEncoder("mock-vit-16").encodeText("striped tail");
    const b = makeEncoder("mock-vit-32").encodeText("striped tail");
    let dot = 0;
    for (let i = 0; i < a.length; i++) dot += a[i] * b[i];
    expect(Math.abs(dot)).toBeLessThan(0.9);
  });

  it("emits unit-norm embeddings of the requested dim", () => {
    const enc = makeEncoder("mock", 48);
    const img = enc.encodeImage(noiseImage(3));
    const txt = enc.encodeText("a tall cylindrical tower");
    expect(img).toHaveLength(48);
    expect(txt).toHaveLength(48);
    expect(Math.abs(norm(img) - 1)).toBeLessThan(1e-5);
    expect(Math.abs(norm(txt) - 1)).toBeLessThan(1e-5);
  });

  it("distinguishes different inputs", () => {
    const enc = makeEncoder("mock");
    const a = enc.encodeImage(noiseImage(1));
    const b = enc.encodeImage(noiseImage(2));
    let dot = 0;
    for (let i = 0; i < a.length; i++) dot += a[i] * b[i];
    expect(dot).toBeLessThan(0.999);
    expect(enc.encodeText("zebra")).not.toEqual(enc.encodeText("lighthouse"));
  });
});
