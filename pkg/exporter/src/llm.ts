/**
 * Attribute generation through an LLM endpoint with a disk cache.
 *
 * Responses are cached as plain text keyed by class name, so reruns are
 * fully offline; cache files can be checked into experiment directories.
 * The endpoint protocol is a POST of {"prompt": string} answered by
 * {"text": string}.
 */

import { existsSync, mkdirSync, readFileSync, writeFileSync } from "fs";
import { join } from "path";
import { EmptyResponse, EndpointUnavailable } from "./errors.js";
import { renderAttributeQuery, type FewShotExample } from "./prompts.js";

export interface AttributeSource {
  endpoint?: string;
  cacheDir: string;
  fewShot?: FewShotExample[];
}

export function cacheFileFor(cacheDir: string, className: string): string {
  const slug = className.toLowerCase().replace(/[^a-z0-9]+/g, "-").replace(/^-|-$/g, "");
  return join(cacheDir, `${slug || "class"}.txt`);
}

/** "- black wings\n- long tail" -> ["black wings", "long tail"]. */
export function parseAttributeList(text: string): string[] {
  const out: string[] = [];
  for (const line of text.split("\n")) {
    const trimmed = line.trim();
    if (trimmed.startsWith("-")) {
      const attr = trimmed.replace(/^-+\s*/, "").trim();
      if (attr) out.push(attr);
    }
  }
  return out;
}

async function queryEndpoint(endpoint: string, prompt: string): Promise<string> {
  let response: Response;
  try {
    response = await fetch(endpoint, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ prompt }),
    });
  } catch (err) {
    throw new EndpointUnavailable(
      `cannot reach ${endpoint}: ${(err as Error).message}`,
    );
  }
  if (!response.ok) {
    throw new EndpointUnavailable(`${endpoint} answered ${response.status}`);
  }
  const doc = (await response.json()) as { text?: unknown };
  if (typeof doc.text !== "string") {
    throw new EndpointUnavailable(`${endpoint} answered without a text field`);
  }
  return doc.text;
}

export async function generateAttributes(
  className: string,
  source: AttributeSource,
): Promise<string[]> {
  const cachePath = cacheFileFor(source.cacheDir, className);
  let raw: string;
  if (existsSync(cachePath)) {
    raw = readFileSync(cachePath, "utf-8");
  } else {
    if (!source.endpoint) {
      throw new EndpointUnavailable(
        `no cached response at ${cachePath} and no endpoint configured`,
      );
    }
    raw = await queryEndpoint(
      source.endpoint,
      renderAttributeQuery(className, source.fewShot),
    );
    mkdirSync(source.cacheDir, { recursive: true });
    writeFileSync(cachePath, raw);
  }
  // The answer turn ends with a primer dash, so a bare first line is the
  // first bullet's continuation.
  const text = raw.trimStart().startsWith("-") ? raw : `- ${raw}`;
  const attributes = parseAttributeList(text);
  if (attributes.length === 0) {
    throw new EmptyResponse(`no attributes parsed for ${className}`);
  }
  return attributes;
}
