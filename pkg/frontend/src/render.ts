/**
 * Figure rendering entry point: read a results CSV, extract per-strategy
 * series, emit one SVG, and report the digest of the plotted pairs so a
 * caller can verify nothing was altered or reordered on the way in.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseResultsCsv } from "./csv.js";
import {
  experimentView,
  extractSeries,
  seriesDigest,
  type FigureSpec,
  type Series,
} from "./figures.js";
import { renderLineChart } from "./svg.js";

export interface RenderResult {
  svg: string;
  digest: string;
  series: Series[];
}

/** Render in memory; throws before producing output on any schema issue. */
export function renderFigure(spec: FigureSpec): RenderResult {
  const rows = parseResultsCsv(readFileSync(spec.csvPath, "utf-8"));
  const series = extractSeries(rows, spec.experiment);
  const view = experimentView(spec.experiment);
  const svg = renderLineChart(
    series,
    {
      title: spec.title ?? view.title,
      xLabel: spec.xLabel ?? "transmit power (dBm)",
      yLabel: spec.yLabel ?? view.yLabel,
    },
    spec.seriesStyle ?? {},
  );
  return { svg, digest: seriesDigest(series), series };
}

/** Render and write the SVG file; nothing is written if rendering fails. */
export function renderToFile(spec: FigureSpec): RenderResult {
  const result = renderFigure(spec);
  writeFileSync(spec.outPath, result.svg, "utf-8");
  return result;
}
