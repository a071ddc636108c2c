/**
 * Experiment-to-figure mapping: which column is plotted, axis labels, and
 * the per-strategy series extraction.  Series preserve CSV row order; the
 * renderer never sorts or rewrites data, and the digest over the plotted
 * (x, y) pairs can be recomputed from the CSV alone to prove it.
 */

import { createHash } from "node:crypto";
import type { ResultRow } from "./csv.js";

export const EXPERIMENTS = [
  "fig3_upper",
  "fig4_lower",
  "fig5_reliability",
  "fig6_multiuser",
  "fig7_estimation",
] as const;

export type ExperimentId = (typeof EXPERIMENTS)[number];

export interface FigureSpec {
  experiment: ExperimentId;
  csvPath: string;
  outPath: string;
  xLabel?: string;
  yLabel?: string;
  title?: string;
  /** stroke overrides keyed by strategy name */
  seriesStyle?: Record<string, { color?: string; dash?: string }>;
}

export interface Series {
  strategy: string;
  points: Array<[number, number]>;
}

interface ExperimentView {
  yColumn: "capacity_bphz" | "reliability";
  yLabel: string;
  title: string;
}

const VIEWS: Record<ExperimentId, ExperimentView> = {
  fig3_upper: {
    yColumn: "capacity_bphz",
    yLabel: "best-case capacity (bit/s/Hz)",
    title: "Capacity upper bound vs transmit power",
  },
  fig4_lower: {
    yColumn: "capacity_bphz",
    yLabel: "worst-case capacity (bit/s/Hz)",
    title: "Capacity lower bound vs transmit power",
  },
  fig5_reliability: {
    yColumn: "reliability",
    yLabel: "reliability",
    title: "Reliability vs transmit power",
  },
  fig6_multiuser: {
    yColumn: "reliability",
    yLabel: "per-user reliability",
    title: "Three-receiver downlink reliability",
  },
  fig7_estimation: {
    yColumn: "reliability",
    yLabel: "reliability",
    title: "Perfect vs estimated coupling knowledge",
  },
};

export function experimentView(experiment: ExperimentId): ExperimentView {
  return VIEWS[experiment];
}

export function isExperimentId(value: string): value is ExperimentId {
  return (EXPERIMENTS as readonly string[]).includes(value);
}

/**
 * Group rows into per-strategy series in first-appearance order.
 * Rows belonging to other experiments are rejected, not skipped.
 */
export function extractSeries(
  rows: ResultRow[],
  experiment: ExperimentId,
): Series[] {
  const view = VIEWS[experiment];
  const byStrategy = new Map<string, Array<[number, number]>>();
  for (const row of rows) {
    if (row.experiment !== experiment) {
      throw new Error(
        `row for experiment '${row.experiment}' in a ${experiment} figure`,
      );
    }
    const y = row[view.yColumn];
    if (y === null) {
      throw new Error(`column '${view.yColumn}' is empty for ${experiment}`);
    }
    if (!byStrategy.has(row.strategy)) byStrategy.set(row.strategy, []);
    byStrategy.get(row.strategy)!.push([row.power_dbm, y]);
  }
  return [...byStrategy.entries()].map(([strategy, points]) => ({
    strategy,
    points,
  }));
}

/**
 * SHA-256 over the canonical text form of the plotted pairs.  Numbers are
 * rendered with 12 significant digits, matching the CSV writer upstream.
 */
export function seriesDigest(series: Series[]): string {
  const canonical = series
    .map(
      (s) =>
        `${s.strategy}:` +
        s.points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(";"),
    )
    .join("|");
  return createHash("sha256").update(canonical).digest("hex");
}

function fmt(value: number): string {
  return Number(value.toPrecision(12)).toString();
}
