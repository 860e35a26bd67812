export { RenderError } from "./errors.js";
export { render, renderPatternHeatmap, renderSweepLine, renderWavenumberLine } from "./figures.js";
export { cleanRows, readTable, requireColumns } from "./rows.js";
export type { Row, Table } from "./rows.js";
export { loadSpec, specFromObject } from "./spec.js";
export type { FigureKind, FigureSpec } from "./spec.js";
