// Color ramps for the heatmaps. The sequential ramp is a perceptually
// uniform dark-to-bright map; the cyclic one closes on itself so a phase
// of -pi and +pi get the same color.

const SEQUENTIAL_STOPS = [
  [0x44, 0x01, 0x54],
  [0x46, 0x30, 0x7e],
  [0x3e, 0x49, 0x89],
  [0x31, 0x68, 0x8e],
  [0x26, 0x82, 0x8e],
  [0x1f, 0x9e, 0x89],
  [0x35, 0xb7, 0x79],
  [0x6e, 0xce, 0x58],
  [0xfd, 0xe7, 0x25],
];

function hex2(v: number): string {
  return Math.round(v).toString(16).padStart(2, "0");
}

function lerpStops(stops: number[][], t: number): string {
  const x = Math.min(1, Math.max(0, t)) * (stops.length - 1);
  const i = Math.min(stops.length - 2, Math.floor(x));
  const f = x - i;
  const a = stops[i];
  const b = stops[i + 1];
  return `#${hex2(a[0] + f * (b[0] - a[0]))}${hex2(a[1] + f * (b[1] - a[1]))}${hex2(a[2] + f * (b[2] - a[2]))}`;
}

export function sequential(t: number): string {
  return lerpStops(SEQUENTIAL_STOPS, t);
}

/** Hue wheel at fixed saturation/value; cyclic by construction. */
export function cyclic(t: number): string {
  const h = 360 * (t - Math.floor(t));
  const s = 0.65;
  const v = 0.85;
  const c = v * s;
  const hh = h / 60;
  const x = c * (1 - Math.abs((hh % 2) - 1));
  let rgb: [number, number, number];
  if (hh < 1) rgb = [c, x, 0];
  else if (hh < 2) rgb = [x, c, 0];
  else if (hh < 3) rgb = [0, c, x];
  else if (hh < 4) rgb = [0, x, c];
  else if (hh < 5) rgb = [x, 0, c];
  else rgb = [c, 0, x];
  const m = v - c;
  return `#${hex2(255 * (rgb[0] + m))}${hex2(255 * (rgb[1] + m))}${hex2(255 * (rgb[2] + m))}`;
}

/** Line colors per series index (wraps around). */
export const SERIES_COLORS = [
  "#0072b2", "#d55e00", "#009e73", "#cc79a7", "#e69f00", "#56b4e9", "#555555",
];

export function seriesColor(index: number): string {
  return SERIES_COLORS[index % SERIES_COLORS.length];
}
