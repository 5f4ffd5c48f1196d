#!/usr/bin/env node
/**
 * otalign-export: produce embedding bundles for the otalign engine.
 *
 *   attributes --class NAME --cache DIR [--endpoint URL]
 *   semantic   --classes FILE --cache DIR --checkpoint NAME [--dim D] --out DIR
 *   vision     --image FILE.png --plan PLAN.json --item-id ID
 *              --checkpoint NAME [--dim D] --out DIR
 *
 * `--classes FILE` is a JSON array of class names (or {id, name} objects).
 * Attribute texts come from the cache directory (populated by `attributes`
 * or checked in by hand), so bundle export is fully offline.
 */

import { readFileSync } from "fs";
import { makeEncoder } from "./encoder.js";
import { ExporterError } from "./errors.js";
import { exportSemanticBundle, exportVisionBundle } from "./export.js";
import { loadCropPlan } from "./cropplan.js";
import { generateAttributes } from "./llm.js";

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new ExporterError(`malformed arguments near ${key}`);
    }
    flags.set(key.slice(2), value);
  }
  return flags;
}

function need(flags: Map<string, string>, name: string): string {
  const value = flags.get(name);
  if (value === undefined) throw new ExporterError(`missing --${name}`);
  return value;
}

interface ClassSpec {
  id: string;
  name: string;
}

function loadClassList(path: string): ClassSpec[] {
  const doc = JSON.parse(readFileSync(path, "utf-8"));
  if (!Array.isArray(doc) || doc.length === 0) {
    throw new ExporterError("class list must be a nonempty JSON array");
  }
  return doc.map((entry: unknown) => {
    if (typeof entry === "string") {
      return { id: entry.toLowerCase().replace(/[^a-z0-9]+/g, "-"), name: entry };
    }
    const obj = entry as { id?: unknown; name?: unknown };
    if (typeof obj.id === "string" && typeof obj.name === "string") {
      return { id: obj.id, name: obj.name };
    }
    throw new ExporterError("class entries must be names or {id, name} objects");
  });
}

async function cmdAttributes(flags: Map<string, string>): Promise<void> {
  const attributes = await generateAttributes(need(flags, "class"), {
    cacheDir: need(flags, "cache"),
    endpoint: flags.get("endpoint"),
  });
  for (const attr of attributes) console.log(`- ${attr}`);
}

async function cmdSemantic(flags: Map<string, string>): Promise<void> {
  const classes = loadClassList(need(flags, "classes"));
  const cacheDir = need(flags, "cache");
  const encoder = makeEncoder(
    need(flags, "checkpoint"),
    Number(flags.get("dim") ?? 64),
  );
  const specs = [];
  for (const cls of classes) {
    specs.push({
      classId: cls.id,
      className: cls.name,
      attributes: await generateAttributes(cls.name, {
        cacheDir,
        endpoint: flags.get("endpoint"),
      }),
    });
  }
  exportSemanticBundle(need(flags, "out"), specs, encoder);
  console.log(`wrote semantic bundle for ${specs.length} classes`);
}

async function cmdVision(flags: Map<string, string>): Promise<void> {
  const encoder = makeEncoder(
    need(flags, "checkpoint"),
    Number(flags.get("dim") ?? 64),
  );
  const plan = loadCropPlan(need(flags, "plan"));
  exportVisionBundle(
    need(flags, "out"),
    [
      {
        itemId: flags.get("item-id") ?? "item-0",
        imagePath: need(flags, "image"),
        plan,
      },
    ],
    encoder,
  );
  console.log(`wrote vision bundle (${plan.rects.length} regions + global)`);
}

async function main(): Promise<number> {
  const [command, ...rest] = process.argv.slice(2);
  try {
    const flags = parseFlags(rest);
    if (command === "attributes") await cmdAttributes(flags);
    else if (command === "semantic") await cmdSemantic(flags);
    else if (command === "vision") await cmdVision(flags);
    else {
      console.error("usage: otalign-export attributes|semantic|vision --flags ...");
      return 2;
    }
    return 0;
  } catch (err) {
    if (err instanceof ExporterError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

main().then((code) => {
  process.exitCode = code;
});
