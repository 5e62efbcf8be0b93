import { describe, expect, it } from "vitest";

import { chartScales, polylinePath, renderCashChart } from "../src/chart.js";

describe("cash chart geometry", () => {
  it("maps months across the x axis and values down the y axis", () => {
    const points = [{ month: 0, value: 0 }, { month: 131, value: 100 }];
    const { x, y } = chartScales(points, 132);
    expect(x(0)).toBeLessThan(x(131));
    expect(y(100)).toBeLessThan(y(0)); // SVG y grows downward
  });

  it("emits one segment per point", () => {
    const path = polylinePath(
      [{ month: 0, value: 10 }, { month: 5, value: 20 }, { month: 9, value: 5 }], 10);
    expect(path.startsWith("M")).toBe(true);
    expect(path.split("L")).toHaveLength(3);
  });

  it("renders sparse points only", () => {
    const svg = renderCashChart([{ month: 0, value: 10 }, { month: 50, value: 20 }], 132);
    expect(svg.match(/<circle/g)).toHaveLength(2);
  });

  it("draws a zero line only when values go negative", () => {
    const positive = renderCashChart([{ month: 0, value: 10 }], 132);
    const mixed = renderCashChart([{ month: 0, value: 10 }, { month: 1, value: -5 }], 132);
    expect(positive.includes("chart-zero")).toBe(false);
    expect(mixed.includes("chart-zero")).toBe(true);
  });

  it("handles the empty state", () => {
    expect(renderCashChart([], 132)).toContain("no verified cash points yet");
  });
});
