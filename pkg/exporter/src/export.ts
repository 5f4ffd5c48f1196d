/** Bundle exporters: images + crop plans -> vision bundles, class attribute
 * sets -> semantic bundles. The exporter never computes scores; the engine
 * is the single scoring path. */

import { readFileSync } from "fs";
import { checkPlanAgainstImage, type CropPlan } from "./cropplan.js";
import { crop, decodePng, resizeBicubic, type RgbImage } from "./image.js";
import { renderClassifierPrompt } from "./prompts.js";
import type { Encoder } from "./encoder.js";
import { writeSemanticBundle, writeVisionBundle, type SemanticSetOut, type VisionSetOut } from "./bundle.js";

export interface VisionExport {
  itemId: string;
  imagePath: string;
  plan: CropPlan;
}

export function encodeVisionSet(
  item: VisionExport,
  encoder: Encoder,
): VisionSetOut {
  const image = decodePng(readFileSync(item.imagePath));
  checkPlanAgainstImage(item.plan, image);
  const rows: Float32Array[] = [encoder.encodeImage(image)];
  for (const rect of item.plan.rects) {
    const region: RgbImage = resizeBicubic(
      crop(image, rect.x, rect.y, rect.side),
      encoder.resolution,
    );
    rows.push(encoder.encodeImage(region));
  }
  return { itemId: item.itemId, rows };
}

export function exportVisionBundle(
  path: string,
  items: VisionExport[],
  encoder: Encoder,
): void {
  writeVisionBundle(path, encoder.dim, items.map((item) => encodeVisionSet(item, encoder)));
}

export interface SemanticExport {
  classId: string;
  className: string;
  attributes: string[];
}

export function encodeSemanticSet(
  spec: SemanticExport,
  encoder: Encoder,
): SemanticSetOut {
  const rows = spec.attributes.map((attribute) =>
    encoder.encodeText(renderClassifierPrompt(spec.className, attribute)),
  );
  return {
    classId: spec.classId,
    className: spec.className,
    attributes: spec.attributes,
    rows,
  };
}

export function exportSemanticBundle(
  path: string,
  classes: SemanticExport[],
  encoder: Encoder,
): void {
  writeSemanticBundle(path, encoder.dim, classes.map((c) => encodeSemanticSet(c, encoder)));
}
