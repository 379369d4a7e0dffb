/** N-gram explorer: overlayable per-term year series with a count /
 * relative-frequency toggle, rendered as hand-rolled SVG polylines.
 *
 * Chart y-values are taken verbatim from the API points; only the pixel
 * projection is computed here. */

import type { NgramResponse } from "./types.js";

export type SeriesMode = "relative" | "count";

export interface ChartPoint {
  year: number;
  value: number;
}

export interface ChartSeries {
  term: string;
  color: string;
  points: ChartPoint[];
}

const PALETTE = ["#2563eb", "#dc2626", "#059669", "#d97706", "#7c3aed", "#0891b2"];

export function seriesColor(position: number): string {
  return PALETTE[position % PALETTE.length];
}

/** Project one API response into chart points for the chosen mode. */
export function toChartSeries(
  response: NgramResponse,
  mode: SeriesMode,
  position: number,
): ChartSeries {
  return {
    term: response.term,
    color: seriesColor(position),
    points: response.points.map((p) => ({
      year: p.year,
      value: mode === "relative" ? p.relative_frequency : p.count,
    })),
  };
}

export interface ChartGeometry {
  width: number;
  height: number;
  padding: number;
}

export interface ChartScale {
  yearMin: number;
  yearMax: number;
  valueMax: number;
  x(year: number): number;
  y(value: number): number;
}

export function chartScale(
  series: ChartSeries[],
  geometry: ChartGeometry,
): ChartScale | null {
  const years = series.flatMap((s) => s.points.map((p) => p.year));
  if (years.length === 0) return null;
  const yearMin = Math.min(...years);
  const yearMax = Math.max(...years);
  const valueMax = Math.max(
    ...series.flatMap((s) => s.points.map((p) => p.value)), 0,
  );
  const { width, height, padding } = geometry;
  const spanX = Math.max(1, yearMax - yearMin);
  const spanY = valueMax > 0 ? valueMax : 1;
  return {
    yearMin,
    yearMax,
    valueMax,
    x: (year) => padding + ((year - yearMin) / spanX) * (width - 2 * padding),
    y: (value) => height - padding - (value / spanY) * (height - 2 * padding),
  };
}

/** SVG polyline points attribute for one series. */
export function polylinePoints(series: ChartSeries, scale: ChartScale): string {
  return series.points
    .map((p) => `${scale.x(p.year).toFixed(1)},${scale.y(p.value).toFixed(1)}`)
    .join(" ");
}

export function formatValue(value: number, mode: SeriesMode): string {
  return mode === "relative" ? value.toExponential(3) : String(value);
}
