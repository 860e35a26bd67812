// Table reading for the sweep CLI's two output formats. CSV is the
// primary interchange; .jsonl inputs are parsed line by line.

import { readFileSync } from "node:fs";
import Papa from "papaparse";
import { RenderError } from "./errors.js";

export type Cell = string | number | boolean | null;
export type Row = Record<string, Cell>;

export interface Table {
  path: string;
  rows: Row[];
}

function parseCsv(text: string, path: string): Row[] {
  const result = Papa.parse<Row>(text, {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  const fatal = result.errors.filter((e) => e.code !== "UndetectableDelimiter");
  if (fatal.length > 0) {
    throw new RenderError(`malformed CSV in ${path}: ${fatal[0].message}`);
  }
  return result.data;
}

function parseJsonl(text: string, path: string): Row[] {
  const rows: Row[] = [];
  for (const line of text.split("\n")) {
    if (line.trim() === "") continue;
    try {
      rows.push(JSON.parse(line) as Row);
    } catch {
      throw new RenderError(`malformed JSON line in ${path}: ${line.slice(0, 60)}`);
    }
  }
  return rows;
}

/** Read one input file; an empty or header-only table is an error, not a blank figure. */
export function readTable(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new RenderError(`could not read input ${path}: ${(err as Error).message}`);
  }
  const rows = path.endsWith(".jsonl") ? parseJsonl(text, path) : parseCsv(text, path);
  if (rows.length === 0) {
    throw new RenderError(`no data rows in ${path}`);
  }
  return { path, rows };
}

/** Every referenced column must exist before any geometry is computed. */
export function requireColumns(table: Table, columns: string[]): void {
  const present = new Set(Object.keys(table.rows[0]));
  for (const column of columns) {
    if (!present.has(column)) {
      throw new RenderError(`input ${table.path} is missing column '${column}'`);
    }
  }
}

export function num(row: Row, column: string, path: string): number {
  const value = row[column];
  if (typeof value !== "number" || !Number.isFinite(value)) {
    throw new RenderError(`non-numeric value ${JSON.stringify(value)} in column '${column}' of ${path}`);
  }
  return value;
}

/** Rows whose error cell is empty; sweep outputs flag failures instead of dropping them. */
export function cleanRows(table: Table): Row[] {
  const rows = table.rows.filter((r) => {
    const err = r["error"];
    return err === "" || err === null || err === undefined;
  });
  if (rows.length === 0) {
    throw new RenderError(`every row carries an error in ${table.path}`);
  }
  return rows;
}
