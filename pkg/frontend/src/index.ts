export { SchemaError, readMetricsCsv, readToy2dCsv } from "./csv.js";
export { discover } from "./discover.js";
export type { Group, RunGroup, SweepCell, SweepGroup, Toy2dGroup } from "./discover.js";
export { render, renderToString } from "./figures.js";
export type { FigureKind, FigureSpec } from "./figures.js";
export { renderAll } from "./renderAll.js";
export type { Logger, Manifest, ManifestEntry } from "./renderAll.js";
export { BASE_COLUMNS, TOY2D_COLUMNS, stripSeedSuffix } from "./schema.js";
export type { MetricsFile, MetricsRow, Toy2dFile, Toy2dRow } from "./schema.js";
