/** Crop-plan JSON consumption (produced by `otalign cropplan`). */

import { readFileSync } from "fs";
import { PlanMismatch } from "./errors.js";
import type { RgbImage } from "./image.js";

export interface CropRect {
  x: number;
  y: number;
  side: number;
}

export interface CropPlan {
  width: number;
  height: number;
  seed: number;
  rects: CropRect[];
}

export function parseCropPlan(doc: unknown): CropPlan {
  if (typeof doc !== "object" || doc === null) {
    throw new PlanMismatch("crop plan must be a JSON object");
  }
  const d = doc as Record<string, unknown>;
  const width = d.width;
  const height = d.height;
  const seed = d.seed;
  const rects = d.rects;
  if (
    typeof width !== "number" ||
    typeof height !== "number" ||
    typeof seed !== "number" ||
    !Array.isArray(rects)
  ) {
    throw new PlanMismatch("crop plan needs width, height, seed, rects");
  }
  const parsed: CropRect[] = rects.map((r, k) => {
    const rect = r as Record<string, unknown>;
    if (
      typeof rect.x !== "number" ||
      typeof rect.y !== "number" ||
      typeof rect.side !== "number"
    ) {
      throw new PlanMismatch(`rect ${k} needs numeric x, y, side`);
    }
    return { x: rect.x, y: rect.y, side: rect.side };
  });
  return { width, height, seed, rects: parsed };
}

export function loadCropPlan(path: string): CropPlan {
  let doc: unknown;
  try {
    doc = JSON.parse(readFileSync(path, "utf-8"));
  } catch (err) {
    throw new PlanMismatch(`unreadable crop plan ${path}: ${(err as Error).message}`);
  }
  return parseCropPlan(doc);
}

/** The plan must have been generated for exactly this image's dimensions. */
export function checkPlanAgainstImage(plan: CropPlan, image: RgbImage): void {
  if (plan.width !== image.width || plan.height !== image.height) {
    throw new PlanMismatch(
      `plan is for ${plan.width}x${plan.height} but image is ` +
        `${image.width}x${image.height}`,
    );
  }
}
