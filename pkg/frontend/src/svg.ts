// Minimal SVG assembly: string building only, so identical inputs give
// byte-identical files. Pixel coordinates are rounded to 1/100 px to keep
// the output stable across platforms.

export function px(v: number): string {
  const r = Math.round(v * 100) / 100;
  return Object.is(r, -0) ? "0" : String(r);
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Tick label formatting: plain decimal, no exponent noise for sweep ranges. */
export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e5 || a < 1e-3) return v.toExponential(1).replace("e+", "e");
  const s = String(Math.round(v * 1e6) / 1e6);
  return s;
}

export interface Scale {
  toPx(value: number): number;
  ticks(): number[];
  domain: [number, number];
}

/** 1-2-5 tick steps covering [min, max]. */
export function linearScale(min: number, max: number, pxMin: number, pxMax: number): Scale {
  if (max <= min) {
    max = min + 1;
  }
  const span = max - min;
  const rawStep = span / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const mult of [1, 2, 5, 10]) {
    if (mag * mult >= rawStep) {
      step = mag * mult;
      break;
    }
  }
  const lo = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = lo; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return {
    domain: [min, max],
    toPx: (v) => pxMin + ((v - min) / span) * (pxMax - pxMin),
    ticks: () => ticks,
  };
}

/** Log10 axis with decade ticks; the domain must be strictly positive. */
export function logScale(min: number, max: number, pxMin: number, pxMax: number): Scale {
  const lmin = Math.log10(min);
  const lmax = Math.log10(max);
  const span = lmax - lmin || 1;
  const ticks: number[] = [];
  for (let e = Math.ceil(lmin - 1e-9); e <= Math.floor(lmax + 1e-9); e++) {
    ticks.push(Math.pow(10, e));
  }
  if (ticks.length < 2) {
    ticks.length = 0;
    ticks.push(min, max);
  }
  return {
    domain: [min, max],
    toPx: (v) => pxMin + ((Math.log10(v) - lmin) / span) * (pxMax - pxMin),
    ticks: () => ticks,
  };
}

export interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export const SWEEP_FRAME: Frame = { width: 720, height: 480, left: 70, right: 24, top: 40, bottom: 56 };

/** Axis lines, ticks, labels, and the title block around the plot area. */
export function axes(frame: Frame, x: Scale, y: Scale, title: string, xLabel: string, yLabel: string): string {
  const parts: string[] = [];
  const x0 = frame.left;
  const x1 = frame.width - frame.right;
  const y0 = frame.height - frame.bottom;
  const y1 = frame.top;
  parts.push(`<g class="axes" stroke="#333" fill="none">`);
  parts.push(`<path d="M ${px(x0)} ${px(y1)} V ${px(y0)} H ${px(x1)}"/>`);
  for (const t of x.ticks()) {
    const xx = x.toPx(t);
    parts.push(`<line x1="${px(xx)}" y1="${px(y0)}" x2="${px(xx)}" y2="${px(y0 + 5)}"/>`);
  }
  for (const t of y.ticks()) {
    const yy = y.toPx(t);
    parts.push(`<line x1="${px(x0 - 5)}" y1="${px(yy)}" x2="${px(x0)}" y2="${px(yy)}"/>`);
  }
  parts.push(`</g>`);
  parts.push(`<g class="tick-labels" font-family="sans-serif" font-size="12" fill="#333">`);
  for (const t of x.ticks()) {
    parts.push(`<text x="${px(x.toPx(t))}" y="${px(y0 + 18)}" text-anchor="middle">${fmtTick(t)}</text>`);
  }
  for (const t of y.ticks()) {
    parts.push(`<text x="${px(x0 - 8)}" y="${px(y.toPx(t) + 4)}" text-anchor="end">${fmtTick(t)}</text>`);
  }
  parts.push(`</g>`);
  if (title !== "") {
    parts.push(`<text x="${px((x0 + x1) / 2)}" y="${px(y1 - 14)}" text-anchor="middle" ` +
      `font-family="sans-serif" font-size="15" fill="#111">${escapeXml(title)}</text>`);
  }
  if (xLabel !== "") {
    parts.push(`<text x="${px((x0 + x1) / 2)}" y="${px(frame.height - 14)}" text-anchor="middle" ` +
      `font-family="sans-serif" font-size="13" fill="#333">${escapeXml(xLabel)}</text>`);
  }
  if (yLabel !== "") {
    const cx = 18;
    const cy = (y0 + y1) / 2;
    parts.push(`<text x="${px(cx)}" y="${px(cy)}" text-anchor="middle" ` +
      `font-family="sans-serif" font-size="13" fill="#333" ` +
      `transform="rotate(-90 ${px(cx)} ${px(cy)})">${escapeXml(yLabel)}</text>`);
  }
  return parts.join("\n");
}

const MARKER_SHAPES = ["circle", "square", "diamond", "triangle"] as const;

/** One data-point marker; the shape cycles with the series index. */
export function marker(index: number, cx: number, cy: number, color: string, cls = "marker"): string {
  const shape = MARKER_SHAPES[index % MARKER_SHAPES.length];
  const r = 4;
  switch (shape) {
    case "circle":
      return `<circle class="${cls}" cx="${px(cx)}" cy="${px(cy)}" r="${r}" fill="${color}"/>`;
    case "square":
      return `<rect class="${cls}" x="${px(cx - r)}" y="${px(cy - r)}" width="${2 * r}" height="${2 * r}" fill="${color}"/>`;
    case "diamond":
      return `<path class="${cls}" d="M ${px(cx)} ${px(cy - r - 1)} L ${px(cx + r + 1)} ${px(cy)} ` +
        `L ${px(cx)} ${px(cy + r + 1)} L ${px(cx - r - 1)} ${px(cy)} Z" fill="${color}"/>`;
    case "triangle":
      return `<path class="${cls}" d="M ${px(cx)} ${px(cy - r - 1)} L ${px(cx + r)} ${px(cy + r)} ` +
        `L ${px(cx - r)} ${px(cy + r)} Z" fill="${color}"/>`;
  }
}

export function legend(frame: Frame, labels: string[], colors: string[]): string {
  const parts: string[] = [];
  const x = frame.width - frame.right - 150;
  let y = frame.top + 14;
  parts.push(`<g class="legend" font-family="sans-serif" font-size="12">`);
  const height = labels.length * 18 + 10;
  parts.push(`<rect x="${px(x - 8)}" y="${px(y - 14)}" width="150" height="${px(height)}" ` +
    `fill="#ffffff" fill-opacity="0.85" stroke="#999"/>`);
  labels.forEach((label, i) => {
    parts.push(`<line x1="${px(x)}" y1="${px(y - 4)}" x2="${px(x + 22)}" y2="${px(y - 4)}" ` +
      `stroke="${colors[i]}" stroke-width="2"/>`);
    parts.push(marker(i, x + 11, y - 4, colors[i], "legend-marker"));
    parts.push(`<text x="${px(x + 30)}" y="${px(y)}" fill="#333">${escapeXml(label)}</text>`);
    y += 18;
  });
  parts.push(`</g>`);
  return parts.join("\n");
}

export function document(width: number, height: number, body: string): string {
  return `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">\n` +
    `<rect width="${width}" height="${height}" fill="#ffffff"/>\n` +
    `${body}\n</svg>\n`;
}
