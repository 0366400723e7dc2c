"""Post-reveal evaluation: excursion, risk/reward, hit rate, drawdown.

Excursions are close-to-close, consistent with the close-based structural
pipeline.  For a prediction at bar ``i`` with direction ``d`` (+1 up,
-1 down), over closes ``j`` in ``(i, i+H]``:

    MFE = max(0, max_j d * (c_j - c_i))      favorable excursion
    MAE = max(0, max_j -d * (c_j - c_i))     adverse excursion

``rr = MFE / MAE`` when MAE > 0; a zero-adverse run is reported with the
``no_adverse`` flag instead of an infinite ratio and is excluded from the
mean-rr aggregate.  A prediction is a *hit* when its MFE reaches
``hit_multiplier`` times the average true range over ``atr_window`` bars
ending at the prediction bar.

All quantities are offset-invariant (price differences) and scale with
``a`` under ``p -> a*p``; rr and hit status are scale-invariant.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import EmptySequence, IndexOutOfRange, NonPositiveValue
from .market_data import PriceSeries
from .segmentation import Direction


@dataclass(frozen=True)
class EvaluationConfig:
    horizon_bars: int = 50
    atr_window: int = 14
    hit_multiplier: float = 2.0

    def __post_init__(self):
        if self.horizon_bars <= 0:
            raise ValueError(f"horizon_bars must be positive, got {self.horizon_bars}")
        if self.atr_window <= 0:
            raise ValueError(f"atr_window must be positive, got {self.atr_window}")
        if self.hit_multiplier <= 0:
            raise ValueError(f"hit_multiplier must be positive, got {self.hit_multiplier}")


@dataclass(frozen=True)
class Prediction:
    bar_index: int
    direction: Direction
    note: str = ""


@dataclass(frozen=True)
class PredictionOutcome:
    bar_index: int
    direction: Direction
    mfe: float
    mae: float
    rr: Optional[float]
    no_adverse: bool
    hit: bool
    truncated: bool

    def to_dict(self) -> dict:
        return {
            "bar_index": self.bar_index,
            "direction": self.direction.value,
            "mfe": self.mfe,
            "mae": self.mae,
            "rr": self.rr,
            "no_adverse": self.no_adverse,
            "hit": self.hit,
            "truncated": self.truncated,
        }


@dataclass(frozen=True)
class MetricsReport:
    records: tuple
    hit_rate: Optional[float]
    mean_rr: Optional[float]
    max_drawdown_over_series: float

    def to_dict(self) -> dict:
        return {
            "records": [r.to_dict() for r in self.records],
            "hit_rate": self.hit_rate,
            "mean_rr": self.mean_rr,
            "max_drawdown_over_series": self.max_drawdown_over_series,
        }


def max_drawdown(values: Sequence[float]) -> float:
    """Largest peak-to-trough fractional decline, in [0, 1).

    max over i <= j of (v_i - v_j) / v_i, floored at 0.

    Raises:
        EmptySequence: no values.
        NonPositiveValue: any value <= 0.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise EmptySequence("drawdown needs at least one value")
    if np.any(v <= 0):
        raise NonPositiveValue("drawdown is defined for positive values only")
    peaks = np.maximum.accumulate(v)
    return float(max(0.0, np.max((peaks - v) / peaks)))


def true_ranges(series: PriceSeries) -> np.ndarray:
    """Per-bar true range; the first bar uses high - low."""
    highs = np.array([float(b.high) for b in series.bars])
    lows = np.array([float(b.low) for b in series.bars])
    closes = series.close_array()
    tr = highs - lows
    if len(tr) > 1:
        prev = closes[:-1]
        tr[1:] = np.maximum(tr[1:], np.maximum(np.abs(highs[1:] - prev), np.abs(lows[1:] - prev)))
    return tr


def average_true_range(series: PriceSeries, index: int, window: int) -> float:
    """Mean true range over the ``window`` bars ending at ``index``
    (fewer when the series starts late)."""
    tr = true_ranges(series)
    start = max(0, index - window + 1)
    return float(np.mean(tr[start : index + 1]))


def evaluate_predictions(series: PriceSeries, predictions,
                         config: EvaluationConfig = EvaluationConfig()) -> MetricsReport:
    """Score predictions against the revealed original series.

    Raises:
        IndexOutOfRange: if a prediction references a bar outside the series.
    """
    series.require_non_empty()
    closes = series.close_array()
    n = len(closes)
    tr = true_ranges(series)

    records = []
    for pred in predictions:
        i = pred.bar_index
        if not 0 <= i < n:
            raise IndexOutOfRange(f"prediction bar {i} outside series of {n} bars")
        d = 1.0 if pred.direction is Direction.UP else -1.0
        end = min(i + config.horizon_bars, n - 1)
        window = closes[i + 1 : end + 1]
        if window.size:
            diffs = window - closes[i]
            mfe = float(max(0.0, np.max(d * diffs)))
            mae = float(max(0.0, np.max(-d * diffs)))
        else:
            mfe = mae = 0.0
        no_adverse = mae == 0.0
        rr = None if no_adverse else mfe / mae
        atr_start = max(0, i - config.atr_window + 1)
        atr = float(np.mean(tr[atr_start : i + 1]))
        records.append(
            PredictionOutcome(
                bar_index=i,
                direction=pred.direction,
                mfe=mfe,
                mae=mae,
                rr=rr,
                no_adverse=no_adverse,
                hit=mfe >= config.hit_multiplier * atr,
                truncated=i + config.horizon_bars > n - 1,
            )
        )

    hits = [r.hit for r in records]
    ratios = [r.rr for r in records if r.rr is not None]
    return MetricsReport(
        records=tuple(records),
        hit_rate=(sum(hits) / len(hits)) if hits else None,
        mean_rr=(sum(ratios) / len(ratios)) if ratios else None,
        max_drawdown_over_series=max_drawdown(closes),
    )


def predictions_from_ledger(entries) -> list:
    """Recover Prediction objects from ledger entry payloads."""
    preds = []
    for e in entries:
        body = json.loads(e.payload)
        preds.append(
            Prediction(
                bar_index=int(body["bar_index"]),
                direction=Direction(body["expected_direction"]),
                note=str(body.get("note", "")),
            )
        )
    return preds
