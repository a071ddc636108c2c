/**
 * Minimal deterministic SVG line charts: fixed canvas, linear scales with
 * round tick steps, one polyline per series, legend in document order.
 * No timestamps, randomness or environment lookups — identical inputs
 * yield identical bytes.
 */

import type { Series } from "./figures.js";

const WIDTH = 760;
const HEIGHT = 480;
const MARGIN = { top: 48, right: 24, bottom: 56, left: 72 };

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

export interface ChartLabels {
  title: string;
  xLabel: string;
  yLabel: string;
}

export interface SeriesStyle {
  color?: string;
  dash?: string;
}

function bounds(values: number[]): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  return [lo, hi];
}

function tickStep(span: number): number {
  const raw = span / 6;
  const power = 10 ** Math.floor(Math.log10(raw));
  for (const mult of [1, 2, 5, 10]) {
    if (raw <= mult * power) return mult * power;
  }
  return 10 * power;
}

function ticks(lo: number, hi: number): number[] {
  const step = tickStep(hi - lo);
  const first = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = first; v <= hi + 1e-9 * step; v += step) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

function fmtCoord(value: number): string {
  return value.toFixed(2);
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export function renderLineChart(
  series: Series[],
  labels: ChartLabels,
  styles: Record<string, SeriesStyle> = {},
): string {
  const xs = series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = series.flatMap((s) => s.points.map((p) => p[1]));
  const [x0, x1] = bounds(xs);
  const [y0, y1] = bounds(ys);
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) => MARGIN.left + ((x - x0) / (x1 - x0)) * plotW;
  const sy = (y: number) => MARGIN.top + plotH - ((y - y0) / (y1 - y0)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
      `width="${WIDTH}" height="${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">` +
      `${escapeXml(labels.title)}</text>`,
  );

  for (const tx of ticks(x0, x1)) {
    const px = fmtCoord(sx(tx));
    parts.push(
      `<line x1="${px}" y1="${MARGIN.top}" x2="${px}" y2="${MARGIN.top + plotH}" ` +
        `stroke="#dddddd" stroke-width="1"/>`,
      `<text x="${px}" y="${MARGIN.top + plotH + 18}" text-anchor="middle" ` +
        `font-size="11">${tx}</text>`,
    );
  }
  for (const ty of ticks(y0, y1)) {
    const py = fmtCoord(sy(ty));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${py}" x2="${MARGIN.left + plotW}" y2="${py}" ` +
        `stroke="#dddddd" stroke-width="1"/>`,
      `<text x="${MARGIN.left - 6}" y="${py}" text-anchor="end" ` +
        `dominant-baseline="middle" font-size="11">${ty}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333333"/>`,
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 14}" text-anchor="middle" ` +
      `font-size="13">${escapeXml(labels.xLabel)}</text>`,
    `<text x="20" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" ` +
      `transform="rotate(-90 20 ${MARGIN.top + plotH / 2})">` +
      `${escapeXml(labels.yLabel)}</text>`,
  );

  series.forEach((s, i) => {
    const style = styles[s.strategy] ?? {};
    const color = style.color ?? PALETTE[i % PALETTE.length];
    const dash = style.dash ? ` stroke-dasharray="${style.dash}"` : "";
    const coords = s.points
      .map(([x, y]) => `${fmtCoord(sx(x))},${fmtCoord(sy(y))}`)
      .join(" ");
    parts.push(
      `<polyline points="${coords}" fill="none" stroke="${color}" ` +
        `stroke-width="2"${dash}/>`,
    );
    const ly = MARGIN.top + 14 + 16 * i;
    const lx = MARGIN.left + plotW - 150;
    parts.push(
      `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 22}" y2="${ly - 4}" ` +
        `stroke="${color}" stroke-width="2"${dash}/>`,
      `<text x="${lx + 28}" y="${ly}" font-size="12">` +
        `${escapeXml(s.strategy)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
