// The three figure kinds. Sweep tables arrive as long-format rows
// (variable, value, scheme, seed, sum_rate_bps_hz, ..., error); the
// renderer collapses seeds into a best-of envelope per point, which is
// how the tables are read everywhere else.

import { writeFileSync } from "node:fs";
import { cyclic, sequential, seriesColor } from "./colormap.js";
import { RenderError } from "./errors.js";
import { cleanRows, num, readTable, requireColumns, type Row, type Table } from "./rows.js";
import type { FigureSpec } from "./spec.js";
import {
  SWEEP_FRAME, axes, document, escapeXml, fmtTick, legend, linearScale, logScale, marker, px,
  type Frame, type Scale,
} from "./svg.js";

function readAll(spec: FigureSpec, columns: string[]): { rows: Row[]; paths: string[] } {
  const rows: Row[] = [];
  const paths: string[] = [];
  for (const path of spec.inputs) {
    const table = readTable(path);
    requireColumns(table, columns);
    rows.push(...cleanRows(table));
    paths.push(path);
  }
  return { rows, paths };
}

function buildScale(min: number, max: number, log: boolean, pxMin: number, pxMax: number, axis: string): Scale {
  if (log) {
    if (min <= 0) {
      throw new RenderError(`log scale on ${axis} needs positive values, got minimum ${min}`);
    }
    return logScale(min, max, pxMin, pxMax);
  }
  return linearScale(min, max, pxMin, pxMax);
}

interface Series {
  label: string;
  points: Array<[number, number]>;
}

function seriesBody(frame: Frame, x: Scale, y: Scale, series: Series[], withMarkers: boolean): string {
  const parts: string[] = [];
  series.forEach((s, i) => {
    const color = seriesColor(i);
    const coords = s.points.map(([vx, vy]) => `${px(x.toPx(vx))},${px(y.toPx(vy))}`).join(" ");
    parts.push(`<g class="series" data-name="${escapeXml(s.label)}">`);
    parts.push(`<polyline points="${coords}" fill="none" stroke="${color}" stroke-width="2"/>`);
    if (withMarkers) {
      for (const [vx, vy] of s.points) {
        parts.push(marker(i, x.toPx(vx), y.toPx(vy), color));
      }
    }
    parts.push(`</g>`);
  });
  parts.push(legend(frame, series.map((s) => s.label), series.map((_, i) => seriesColor(i))));
  return parts.join("\n");
}

function lineFigure(spec: FigureSpec, series: Series[], yFromZero: boolean): string {
  const frame = SWEEP_FRAME;
  const xs = series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = series.flatMap((s) => s.points.map((p) => p[1]));
  const yMax = Math.max(...ys);
  const yMin = yFromZero && !spec.logY ? 0 : Math.min(...ys);
  const pad = (yMax - yMin || 1) * 0.06;
  const x = buildScale(Math.min(...xs), Math.max(...xs), spec.logX,
    frame.left, frame.width - frame.right, "x");
  const y = buildScale(yMin, yMax + pad, spec.logY,
    frame.height - frame.bottom, frame.top, "y");
  const body = [
    axes(frame, x, y, spec.title, spec.xLabel, spec.yLabel),
    seriesBody(frame, x, y, series, spec.kind === "sweep-line"),
  ].join("\n");
  return document(frame.width, frame.height, body);
}

export function renderSweepLine(spec: FigureSpec): string {
  const { rows, paths } = readAll(spec, ["value", "scheme", "sum_rate_bps_hz", "error"]);
  const order: string[] = [];
  const envelope = new Map<string, Map<number, number>>();
  for (const row of rows) {
    const scheme = String(row["scheme"]);
    const value = num(row, "value", paths[0]);
    const rate = num(row, "sum_rate_bps_hz", paths[0]);
    if (!envelope.has(scheme)) {
      envelope.set(scheme, new Map());
      order.push(scheme);
    }
    const points = envelope.get(scheme)!;
    points.set(value, Math.max(points.get(value) ?? -Infinity, rate));
  }
  const schemes = spec.schemes ?? order;
  const series: Series[] = schemes.map((scheme) => {
    const points = envelope.get(scheme);
    if (!points) {
      throw new RenderError(`scheme '${scheme}' has no rows in ${paths.join(", ")}`);
    }
    return {
      label: scheme,
      points: [...points.entries()].sort((a, b) => a[0] - b[0]),
    };
  });
  return lineFigure(spec, series, true);
}

export function renderWavenumberLine(spec: FigureSpec): string {
  const { rows, paths } = readAll(spec, ["kx_over_k0", "gain_db", "distance_m", "freq_ghz"]);
  const freqs = new Set(rows.map((r) => String(r["freq_ghz"])));
  const order: string[] = [];
  const groups = new Map<string, Array<[number, number]>>();
  for (const row of rows) {
    const d = num(row, "distance_m", paths[0]);
    let label = `d = ${fmtTick(d)} m`;
    if (freqs.size > 1) {
      label += `, ${fmtTick(num(row, "freq_ghz", paths[0]))} GHz`;
    }
    if (!groups.has(label)) {
      groups.set(label, []);
      order.push(label);
    }
    groups.get(label)!.push([num(row, "kx_over_k0", paths[0]), num(row, "gain_db", paths[0])]);
  }
  const series: Series[] = order.map((label) => ({
    label,
    points: groups.get(label)!.sort((a, b) => a[0] - b[0]),
  }));
  return lineFigure(spec, series, false);
}

const PANEL = 176;
const PANEL_GAP = 18;
const PANELS_PER_ROW = 4;

function heatDomain(field: string, values: number[]): { lo: number; hi: number; cyclicMap: boolean } {
  if (field.startsWith("phase")) {
    return { lo: -Math.PI, hi: Math.PI, cyclicMap: true };
  }
  if (field.startsWith("amp")) {
    return { lo: 0, hi: 1, cyclicMap: false };
  }
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  return { lo, hi: hi > lo ? hi : lo + 1, cyclicMap: false };
}

export function renderPatternHeatmap(spec: FigureSpec): string {
  const { rows, paths } = readAll(spec, ["user", "ix", "iy", "nx", "ny", spec.field]);
  const path = paths[0];
  const nx = num(rows[0], "nx", path);
  const ny = num(rows[0], "ny", path);

  const grids = new Map<number, Float64Array>();
  for (const row of rows) {
    if (num(row, "nx", path) !== nx || num(row, "ny", path) !== ny) {
      throw new RenderError(`inconsistent grid metadata (nx, ny) in ${path}`);
    }
    const user = num(row, "user", path);
    const ix = num(row, "ix", path);
    const iy = num(row, "iy", path);
    if (ix < 0 || ix >= nx || iy < 0 || iy >= ny) {
      throw new RenderError(`cell (${ix}, ${iy}) outside the ${nx}x${ny} grid in ${path}`);
    }
    let grid = grids.get(user);
    if (!grid) {
      grid = new Float64Array(nx * ny).fill(NaN);
      grids.set(user, grid);
    }
    grid[iy * nx + ix] = num(row, spec.field, path);
  }

  const users = spec.users ?? [...grids.keys()].sort((a, b) => a - b);
  for (const user of users) {
    const grid = grids.get(user);
    if (!grid) {
      throw new RenderError(`user ${user} has no rows in ${path}`);
    }
    if (grid.some((v) => Number.isNaN(v))) {
      throw new RenderError(`grid for user ${user} is incomplete in ${path}`);
    }
  }

  const domain = heatDomain(spec.field, [...grids.values()].flatMap((g) => [...g]));
  const colorAt = (v: number): string => {
    const t = (v - domain.lo) / (domain.hi - domain.lo);
    return domain.cyclicMap ? cyclic(t) : sequential(t);
  };

  const columns = Math.min(PANELS_PER_ROW, users.length);
  const panelRows = Math.ceil(users.length / PANELS_PER_ROW);
  const left = 16;
  const top = spec.title === "" ? 16 : 44;
  const width = left + columns * (PANEL + PANEL_GAP) + 72;
  const height = top + panelRows * (PANEL + PANEL_GAP + 16) + 16;
  const cell = PANEL / Math.max(nx, ny);

  const parts: string[] = [];
  if (spec.title !== "") {
    parts.push(`<text x="${px(width / 2)}" y="26" text-anchor="middle" ` +
      `font-family="sans-serif" font-size="15" fill="#111">${escapeXml(spec.title)}</text>`);
  }
  users.forEach((user, p) => {
    const grid = grids.get(user)!;
    const x0 = left + (p % PANELS_PER_ROW) * (PANEL + PANEL_GAP);
    const y0 = top + Math.floor(p / PANELS_PER_ROW) * (PANEL + PANEL_GAP + 16) + 14;
    parts.push(`<g class="panel" data-user="${user}">`);
    parts.push(`<text x="${px(x0)}" y="${px(y0 - 4)}" font-family="sans-serif" ` +
      `font-size="12" fill="#333">user ${user}</text>`);
    for (let iy = 0; iy < ny; iy++) {
      for (let ix = 0; ix < nx; ix++) {
        const cx = x0 + ix * cell;
        const cy = y0 + (ny - 1 - iy) * cell;
        parts.push(`<rect class="cell" x="${px(cx)}" y="${px(cy)}" ` +
          `width="${px(cell + 0.5)}" height="${px(cell + 0.5)}" ` +
          `fill="${colorAt(grid[iy * nx + ix])}"/>`);
      }
    }
    parts.push(`</g>`);
  });

  // shared color bar at the right edge
  const barX = width - 56;
  const barTop = top + 14;
  const barH = PANEL;
  const steps = 64;
  parts.push(`<g class="colorbar">`);
  for (let i = 0; i < steps; i++) {
    const t = 1 - i / (steps - 1);
    const y = barTop + (i * barH) / steps;
    parts.push(`<rect class="cbar-step" x="${px(barX)}" y="${px(y)}" width="14" ` +
      `height="${px(barH / steps + 0.5)}" fill="${domain.cyclicMap ? cyclic(t) : sequential(t)}"/>`);
  }
  parts.push(`<text x="${px(barX + 18)}" y="${px(barTop + 8)}" font-family="sans-serif" ` +
    `font-size="11" fill="#333">${fmtTick(Math.round(domain.hi * 100) / 100)}</text>`);
  parts.push(`<text x="${px(barX + 18)}" y="${px(barTop + barH)}" font-family="sans-serif" ` +
    `font-size="11" fill="#333">${fmtTick(Math.round(domain.lo * 100) / 100)}</text>`);
  parts.push(`<text x="${px(barX)}" y="${px(barTop - 6)}" font-family="sans-serif" ` +
    `font-size="11" fill="#333">${escapeXml(spec.field)}</text>`);
  parts.push(`</g>`);

  return document(width, height, parts.join("\n"));
}

/** Render the figure a spec describes and write it to spec.out. */
export function render(spec: FigureSpec): string {
  let svg: string;
  switch (spec.kind) {
    case "sweep-line":
      svg = renderSweepLine(spec);
      break;
    case "wavenumber-line":
      svg = renderWavenumberLine(spec);
      break;
    case "pattern-heatmap":
      svg = renderPatternHeatmap(spec);
      break;
  }
  try {
    writeFileSync(spec.out, svg, "utf-8");
  } catch (err) {
    throw new RenderError(`could not write ${spec.out}: ${(err as Error).message}`);
  }
  return svg;
}
