// Sparse SVG line chart. The cash chart plots only points the player has
// verified (or, in replay, the transcript's snapshots); it never interpolates
// hidden state beyond straight lines between revealed points.

export interface ChartPoint {
  month: number;
  value: number;
}

export interface ChartGeometry {
  width: number;
  height: number;
  pad: number;
}

const DEFAULT_GEOMETRY: ChartGeometry = { width: 640, height: 180, pad: 28 };

export function chartScales(points: ChartPoint[], horizon: number, geometry = DEFAULT_GEOMETRY) {
  const { width, height, pad } = geometry;
  const values = points.map((p) => p.value);
  const lo = Math.min(0, ...values);
  const hi = Math.max(1, ...values);
  const x = (month: number) => pad + (month / Math.max(1, horizon - 1)) * (width - 2 * pad);
  const y = (value: number) => height - pad - ((value - lo) / (hi - lo || 1)) * (height - 2 * pad);
  return { x, y, lo, hi };
}

export function polylinePath(points: ChartPoint[], horizon: number, geometry = DEFAULT_GEOMETRY): string {
  if (points.length === 0) return "";
  const { x, y } = chartScales(points, horizon, geometry);
  return points
    .map((p, i) => `${i === 0 ? "M" : "L"}${x(p.month).toFixed(1)},${y(p.value).toFixed(1)}`)
    .join(" ");
}

export function renderCashChart(
  points: ChartPoint[],
  horizon: number,
  geometry = DEFAULT_GEOMETRY,
): string {
  const { width, height, pad } = geometry;
  if (points.length === 0) {
    return `<svg viewBox="0 0 ${width} ${height}" class="cash-chart">`
      + `<text x="${width / 2}" y="${height / 2}" class="chart-empty" text-anchor="middle">`
      + `no verified cash points yet</text></svg>`;
  }
  const { x, y, lo, hi } = chartScales(points, horizon, geometry);
  const zeroLine = lo < 0
    ? `<line x1="${pad}" y1="${y(0).toFixed(1)}" x2="${width - pad}" y2="${y(0).toFixed(1)}" class="chart-zero"/>`
    : "";
  const dots = points
    .map((p) => `<circle cx="${x(p.month).toFixed(1)}" cy="${y(p.value).toFixed(1)}" r="2.5"/>`)
    .join("");
  const labels =
    `<text x="${pad}" y="12" class="chart-label">$${(hi / 100_000_000).toFixed(1)}M</text>` +
    `<text x="${pad}" y="${height - 6}" class="chart-label">$${(lo / 100_000_000).toFixed(1)}M</text>`;
  return `<svg viewBox="0 0 ${width} ${height}" class="cash-chart">${zeroLine}`
    + `<path d="${polylinePath(points, horizon, geometry)}" fill="none"/>${dots}${labels}</svg>`;
}
