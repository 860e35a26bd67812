// Figure descriptions live in small TOML files so a render is reproducible
// from the repository alone. Paths inside a spec are relative to the spec
// file, which keeps checked-in specs location independent.

import { readFileSync } from "node:fs";
import { dirname, resolve } from "node:path";
import { parse as parseToml } from "smol-toml";
import { RenderError } from "./errors.js";

export type FigureKind = "sweep-line" | "wavenumber-line" | "pattern-heatmap";

export interface FigureSpec {
  kind: FigureKind;
  /** Input tables, already resolved to absolute paths. */
  inputs: string[];
  /** Output image path, already resolved. */
  out: string;
  title: string;
  xLabel: string;
  yLabel: string;
  logX: boolean;
  logY: boolean;
  /** sweep-line only: series filter and draw order; default is file order. */
  schemes?: string[];
  /** pattern-heatmap only: which column to color by. */
  field: string;
  /** pattern-heatmap only: panel subset; default is every user present. */
  users?: number[];
}

const KINDS: FigureKind[] = ["sweep-line", "wavenumber-line", "pattern-heatmap"];
const KNOWN_KEYS = new Set([
  "kind", "input", "inputs", "out", "title",
  "x_label", "y_label", "log_x", "log_y",
  "schemes", "field", "users",
]);

function str(raw: Record<string, unknown>, key: string, fallback: string): string {
  const value = raw[key];
  if (value === undefined) return fallback;
  if (typeof value !== "string") throw new RenderError(`spec key '${key}' must be a string`);
  return value;
}

function flag(raw: Record<string, unknown>, key: string): boolean {
  const value = raw[key];
  if (value === undefined) return false;
  if (typeof value !== "boolean") throw new RenderError(`spec key '${key}' must be a boolean`);
  return value;
}

function strList(raw: Record<string, unknown>, key: string): string[] | undefined {
  const value = raw[key];
  if (value === undefined) return undefined;
  if (!Array.isArray(value) || !value.every((v) => typeof v === "string")) {
    throw new RenderError(`spec key '${key}' must be an array of strings`);
  }
  return value as string[];
}

function intList(raw: Record<string, unknown>, key: string): number[] | undefined {
  const value = raw[key];
  if (value === undefined) return undefined;
  if (!Array.isArray(value) || !value.every((v) => typeof v === "number" && Number.isInteger(v))) {
    throw new RenderError(`spec key '${key}' must be an array of integers`);
  }
  return value as number[];
}

export function specFromObject(raw: Record<string, unknown>, baseDir: string): FigureSpec {
  for (const key of Object.keys(raw)) {
    if (!KNOWN_KEYS.has(key)) throw new RenderError(`spec has unknown key '${key}'`);
  }

  const kind = raw["kind"];
  if (typeof kind !== "string" || !KINDS.includes(kind as FigureKind)) {
    throw new RenderError(`spec kind must be one of ${KINDS.join(", ")}`);
  }

  const single = raw["input"];
  const many = raw["inputs"];
  if (single !== undefined && many !== undefined) {
    throw new RenderError("spec sets both 'input' and 'inputs'; use one");
  }
  let inputs: string[];
  if (typeof single === "string") {
    inputs = [single];
  } else if (Array.isArray(many) && many.length > 0 && many.every((v) => typeof v === "string")) {
    inputs = many as string[];
  } else {
    throw new RenderError("spec needs 'input' (string) or 'inputs' (non-empty string array)");
  }

  const out = raw["out"];
  if (typeof out !== "string" || out === "") {
    throw new RenderError("spec needs a non-empty 'out' path");
  }

  return {
    kind: kind as FigureKind,
    inputs: inputs.map((p) => resolve(baseDir, p)),
    out: resolve(baseDir, out),
    title: str(raw, "title", ""),
    xLabel: str(raw, "x_label", ""),
    yLabel: str(raw, "y_label", ""),
    logX: flag(raw, "log_x"),
    logY: flag(raw, "log_y"),
    schemes: strList(raw, "schemes"),
    field: str(raw, "field", "amp_x_norm"),
    users: intList(raw, "users"),
  };
}

export function loadSpec(path: string): FigureSpec {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new RenderError(`could not read spec ${path}: ${(err as Error).message}`);
  }
  let raw: Record<string, unknown>;
  try {
    raw = parseToml(text);
  } catch (err) {
    throw new RenderError(`invalid TOML in ${path}: ${(err as Error).message}`);
  }
  return specFromObject(raw, dirname(resolve(path)));
}
