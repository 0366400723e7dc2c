#!/usr/bin/env python3
"""Scoring revealed predictions: excursions, risk/reward, hit rate,
series drawdown.

A planted V-bottom gets one good call, one early call, and one wrong-way
call, so every column of the report shows up.
"""

from datetime import datetime, timedelta, timezone
from fractions import Fraction

import numpy as np

from qgms import Bar, Direction, EvaluationConfig, Prediction, PriceSeries
from qgms.metrics import evaluate_predictions, max_drawdown


def make_series(closes):
    t0 = datetime(2020, 2, 1, tzinfo=timezone.utc)
    bars = []
    for i, c in enumerate(closes):
        c = float(c)
        bars.append(Bar(t0 + timedelta(days=i), Fraction(str(c)),
                        Fraction(str(c + 0.4)), Fraction(str(c - 0.4)), Fraction(str(c))))
    return PriceSeries("VFIX", "1D", tuple(bars))


def main():
    down = list(np.linspace(100, 88, 13))
    base = [87.2, 86.8, 87.5]           # ragged bottom below the down leg
    up = list(np.linspace(88.5, 104, 14))
    series = make_series(down + base + up)
    closes = series.close_array()

    predictions = [
        Prediction(bar_index=14, direction=Direction.UP, note="bottom call"),
        Prediction(bar_index=8, direction=Direction.UP, note="too early"),
        Prediction(bar_index=14, direction=Direction.DOWN, note="wrong way"),
    ]
    config = EvaluationConfig(horizon_bars=12, atr_window=14, hit_multiplier=2.0)
    report = evaluate_predictions(series, predictions, config)

    print(f"{'bar':>4} {'dir':>5} {'mfe':>8} {'mae':>8} {'rr':>8} {'hit':>5} {'trunc':>6}  note")
    for pred, rec in zip(predictions, report.records):
        rr = "no-adv" if rec.no_adverse else f"{rec.rr:.2f}"
        print(f"{rec.bar_index:>4} {rec.direction.value:>5} {rec.mfe:>8.3f} {rec.mae:>8.3f} "
              f"{rr:>8} {str(rec.hit):>5} {str(rec.truncated):>6}  {pred.note}")

    print(f"\nhit rate:            {report.hit_rate:.2f}")
    print(f"mean rr (finite):    {report.mean_rr:.2f}")
    print(f"series drawdown:     {report.max_drawdown_over_series:.4f}")
    print(f"drawdown cross-check: {max_drawdown(closes):.4f} "
          "(same function the report uses)")


if __name__ == "__main__":
    main()
