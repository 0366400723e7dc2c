import { describe, expect, it } from "vitest";

import { DEFAULT_GEOMETRY, gridLevels, layoutCandles, priceScale } from "../src/chart.js";
import type { ServedBar } from "../src/types.js";

const bars: ServedBar[] = [
  { index: 0, open: 10, high: 12, low: 9, close: 11 },
  { index: 1, open: 11, high: 14, low: 10.5, close: 13 },
  { index: 2, open: 13, high: 13.5, low: 11, close: 11.5 },
];

describe("price scale", () => {
  it("spans the served highs and lows, higher prices higher up", () => {
    const scale = priceScale(bars, DEFAULT_GEOMETRY);
    expect(scale.min).toBe(9);
    expect(scale.max).toBe(14);
    expect(scale.toY(14)).toBeLessThan(scale.toY(9));
    expect(scale.toY(14)).toBe(DEFAULT_GEOMETRY.padTop);
  });

  it("copes with a degenerate single price", () => {
    const flat: ServedBar[] = [{ index: 0, open: 5, high: 5, low: 5, close: 5 }];
    const scale = priceScale(flat, DEFAULT_GEOMETRY);
    expect(scale.max).toBeGreaterThan(scale.min);
    expect(Number.isFinite(scale.toY(5))).toBe(true);
  });
});

describe("candle layout", () => {
  it("walks left to right in bar order", () => {
    const boxes = layoutCandles(bars, DEFAULT_GEOMETRY);
    for (let i = 1; i < boxes.length; i++) {
      expect(boxes[i].xCenter).toBeGreaterThan(boxes[i - 1].xCenter);
    }
  });

  it("keeps candle positions stable while slots are reserved", () => {
    // with a fixed slot count, earlier candles do not move as bars arrive
    const twoOfThree = layoutCandles(bars.slice(0, 2), DEFAULT_GEOMETRY, 60);
    const allThree = layoutCandles(bars, DEFAULT_GEOMETRY, 60);
    expect(allThree[0].xCenter).toBe(twoOfThree[0].xCenter);
    expect(allThree[1].xCenter).toBe(twoOfThree[1].xCenter);
  });

  it("flags up and down candles", () => {
    const boxes = layoutCandles(bars, DEFAULT_GEOMETRY);
    expect(boxes.map((b) => b.up)).toEqual([true, true, false]);
  });

  it("keeps wicks outside bodies", () => {
    for (const box of layoutCandles(bars, DEFAULT_GEOMETRY)) {
      expect(box.yHigh).toBeLessThanOrEqual(Math.min(box.yOpen, box.yClose));
      expect(box.yLow).toBeGreaterThanOrEqual(Math.max(box.yOpen, box.yClose));
    }
  });
});

describe("gridlines", () => {
  it("spans min..max inclusive", () => {
    const scale = priceScale(bars, DEFAULT_GEOMETRY);
    const levels = gridLevels(scale, 5);
    expect(levels.length).toBe(6);
    expect(levels[0]).toBe(scale.min);
    expect(levels.at(-1)).toBe(scale.max);
  });
});
