/** Candlestick chart for the replay: ordinal x-axis, and no price labels
until the session is revealed.  Layout math is pure so it can be tested
without a DOM. */

import type { Manifest, PredictionOutcome, ServedBar } from "./types.js";
import { truePrice } from "./state.js";

export interface ChartGeometry {
  width: number;
  height: number;
  padLeft: number;
  padRight: number;
  padTop: number;
  padBottom: number;
}

export const DEFAULT_GEOMETRY: ChartGeometry = {
  width: 900,
  height: 420,
  padLeft: 70,
  padRight: 20,
  padTop: 16,
  padBottom: 28,
};

export interface CandleBox {
  index: number;
  xCenter: number;
  bodyLeft: number;
  bodyWidth: number;
  yOpen: number;
  yClose: number;
  yHigh: number;
  yLow: number;
  up: boolean;
}

export interface PriceScale {
  min: number;
  max: number;
  toY: (price: number) => number;
}

export function priceScale(bars: ServedBar[], geom: ChartGeometry): PriceScale {
  let min = Infinity;
  let max = -Infinity;
  for (const b of bars) {
    if (b.low < min) min = b.low;
    if (b.high > max) max = b.high;
  }
  if (!isFinite(min)) {
    min = 0;
    max = 1;
  }
  if (max === min) {
    max = min + 1;
  }
  const span = max - min;
  const innerH = geom.height - geom.padTop - geom.padBottom;
  return {
    min,
    max,
    toY: (price: number) => geom.padTop + ((max - price) / span) * innerH,
  };
}

/** Candle layout over a fixed slot count so the chart grows rightward as
bars arrive instead of rescaling on every draw. */
export function layoutCandles(
  bars: ServedBar[],
  geom: ChartGeometry,
  slots?: number,
): CandleBox[] {
  const scale = priceScale(bars, geom);
  const n = Math.max(slots ?? bars.length, bars.length, 1);
  const innerW = geom.width - geom.padLeft - geom.padRight;
  const step = innerW / n;
  const bodyWidth = Math.max(1, Math.min(18, step * 0.65));
  return bars.map((b, i) => {
    const xCenter = geom.padLeft + step * (i + 0.5);
    return {
      index: b.index,
      xCenter,
      bodyLeft: xCenter - bodyWidth / 2,
      bodyWidth,
      yOpen: scale.toY(b.open),
      yClose: scale.toY(b.close),
      yHigh: scale.toY(b.high),
      yLow: scale.toY(b.low),
      up: b.close >= b.open,
    };
  });
}

/** Evenly spaced horizontal gridline levels (prices). */
export function gridLevels(scale: PriceScale, count = 5): number[] {
  const out: number[] = [];
  for (let k = 0; k <= count; k++) {
    out.push(scale.min + ((scale.max - scale.min) * k) / count);
  }
  return out;
}

export interface RevealContext {
  manifest: Manifest;
  outcomes: PredictionOutcome[];
}

export interface MarkedBar {
  bar_index: number;
  expected_direction: "up" | "down";
}

const UP_COLOR = "#2e7d32";
const DOWN_COLOR = "#c62828";
const GRID_COLOR = "#e0e0e0";
const AXIS_COLOR = "#616161";

export function drawChart(
  ctx: CanvasRenderingContext2D,
  bars: ServedBar[],
  marks: MarkedBar[],
  geom: ChartGeometry = DEFAULT_GEOMETRY,
  reveal: RevealContext | null = null,
  slots?: number,
): void {
  ctx.clearRect(0, 0, geom.width, geom.height);
  const scale = priceScale(bars, geom);
  const boxes = layoutCandles(bars, geom, slots);

  ctx.strokeStyle = GRID_COLOR;
  ctx.fillStyle = AXIS_COLOR;
  ctx.font = "11px sans-serif";
  for (const level of gridLevels(scale)) {
    const y = scale.toY(level);
    ctx.beginPath();
    ctx.moveTo(geom.padLeft, y);
    ctx.lineTo(geom.width - geom.padRight, y);
    ctx.stroke();
    if (reveal) {
      // post-reveal: true prices on the y-axis
      ctx.fillText(truePrice(level, reveal.manifest).toFixed(4), 4, y + 3);
    }
  }

  for (const box of boxes) {
    const color = box.up ? UP_COLOR : DOWN_COLOR;
    ctx.strokeStyle = color;
    ctx.fillStyle = color;
    ctx.beginPath();
    ctx.moveTo(box.xCenter, box.yHigh);
    ctx.lineTo(box.xCenter, box.yLow);
    ctx.stroke();
    const top = Math.min(box.yOpen, box.yClose);
    const h = Math.max(1, Math.abs(box.yOpen - box.yClose));
    ctx.fillRect(box.bodyLeft, top, box.bodyWidth, h);
  }

  const outcomeByBar = new Map<number, PredictionOutcome>();
  if (reveal) for (const o of reveal.outcomes) outcomeByBar.set(o.bar_index, o);
  for (const mark of marks) {
    const box = boxes.find((b) => b.index === mark.bar_index);
    if (!box) continue;
    const outcome = outcomeByBar.get(mark.bar_index);
    ctx.fillStyle = outcome ? (outcome.hit ? UP_COLOR : DOWN_COLOR) : "#1565c0";
    const y = mark.expected_direction === "down" ? box.yHigh - 10 : box.yLow + 10;
    ctx.beginPath();
    ctx.arc(box.xCenter, y, 4, 0, Math.PI * 2);
    ctx.fill();
  }

  ctx.fillStyle = AXIS_COLOR;
  if (reveal) {
    ctx.fillText(reveal.manifest.start_timestamp, geom.padLeft, geom.height - 8);
    const endLabel = reveal.manifest.end_timestamp;
    ctx.fillText(endLabel, geom.width - geom.padRight - 8 * endLabel.length * 0.55, geom.height - 8);
  } else {
    // ordinal axis only; deliberately no price ticks before reveal
    ctx.fillText("0", geom.padLeft, geom.height - 8);
    if (bars.length > 1) {
      ctx.fillText(String(bars.length - 1), geom.width - geom.padRight - 18, geom.height - 8);
    }
  }
}
