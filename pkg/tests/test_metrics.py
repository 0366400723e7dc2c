import random
from fractions import Fraction

import pytest

from qgms.errors import EmptySequence, IndexOutOfRange, NonPositiveValue
from qgms.market_data import affine_transform
from qgms.metrics import (
    EvaluationConfig,
    Prediction,
    average_true_range,
    evaluate_predictions,
    max_drawdown,
    true_ranges,
)
from qgms.segmentation import Direction

from .conftest import random_ohlc_series, series_from_closes

from .oracles import atr_oracle, excursions_oracle, max_drawdown_oracle


def test_drawdown_worked_example():
    assert max_drawdown([1.0, 1.2, 0.9, 1.1]) == pytest.approx(0.25, abs=1e-15)


def test_drawdown_monotone_is_zero():
    assert max_drawdown([1.0, 1.0, 1.5, 2.0]) == 0.0


def test_drawdown_single_value():
    assert max_drawdown([3.0]) == 0.0


def test_drawdown_rejects_bad_input():
    with pytest.raises(EmptySequence):
        max_drawdown([])
    with pytest.raises(NonPositiveValue):
        max_drawdown([1.0, 0.0])


def test_drawdown_matches_oracle(rng):
    for _ in range(100):
        n = rng.randint(1, 200)
        values = [rng.uniform(0.1, 50.0) for _ in range(n)]
        assert max_drawdown(values) == pytest.approx(max_drawdown_oracle(values), abs=1e-12)


def test_true_range_and_atr_match_oracle(rng):
    series = random_ohlc_series(rng, 60)
    tr = true_ranges(series)
    assert len(tr) == 60
    for i in (0, 5, 13, 30, 59):
        assert average_true_range(series, i, 14) == pytest.approx(
            atr_oracle(series.bars, i, 14), rel=1e-12
        )


def test_v_shape_up_prediction_scores_hit():
    # fall 100 -> 90 with the final low two bars after the prediction, then
    # rally to 105: finite adverse excursion, large favorable one
    closes = [100, 98, 96, 94, 92, 91, 90, 92.5, 95, 98, 101, 103, 105, 105, 105]
    series = series_from_closes(closes)
    pred = Prediction(bar_index=4, direction=Direction.UP)
    report = evaluate_predictions(series, [pred], EvaluationConfig(horizon_bars=10, atr_window=5))
    rec = report.records[0]
    mfe, mae = excursions_oracle([float(c) for c in closes], 4, +1, 10)
    assert rec.mfe == pytest.approx(mfe, abs=1e-12)
    assert rec.mae == pytest.approx(mae, abs=1e-12)
    assert rec.mae == pytest.approx(2.0, abs=1e-12)  # 92 -> 90
    assert rec.hit
    assert rec.rr is not None and rec.rr > 1
    assert not rec.truncated


def test_final_bar_prediction_truncated_no_adverse():
    series = series_from_closes([100, 101, 102])
    report = evaluate_predictions(series, [Prediction(2, Direction.UP)])
    rec = report.records[0]
    assert rec.truncated
    assert rec.mfe == 0.0 and rec.mae == 0.0
    assert rec.no_adverse and rec.rr is None


def test_empty_prediction_set():
    series = series_from_closes([100, 101, 102])
    report = evaluate_predictions(series, [])
    assert report.records == ()
    assert report.hit_rate is None
    assert report.mean_rr is None
    assert report.max_drawdown_over_series == 0.0


def test_out_of_range_prediction_rejected():
    series = series_from_closes([100, 101])
    with pytest.raises(IndexOutOfRange):
        evaluate_predictions(series, [Prediction(5, Direction.UP)])


def test_excursions_match_oracle_on_random_walks(rng):
    config = EvaluationConfig(horizon_bars=20, atr_window=14)
    for _ in range(30):
        series = random_ohlc_series(rng, rng.randint(5, 120))
        closes = [float(b.close) for b in series.bars]
        preds = [
            Prediction(rng.randrange(len(closes)), rng.choice([Direction.UP, Direction.DOWN]))
            for _ in range(5)
        ]
        report = evaluate_predictions(series, preds, config)
        for pred, rec in zip(preds, report.records):
            sign = +1 if pred.direction is Direction.UP else -1
            mfe, mae = excursions_oracle(closes, pred.bar_index, sign, config.horizon_bars)
            assert rec.mfe == pytest.approx(mfe, abs=1e-9)
            assert rec.mae == pytest.approx(mae, abs=1e-9)
            assert rec.mfe >= 0 and rec.mae >= 0


def test_scale_and_offset_behavior(rng):
    series = random_ohlc_series(rng, 80)
    preds = [Prediction(10, Direction.UP), Prediction(40, Direction.DOWN)]
    config = EvaluationConfig(horizon_bars=15, atr_window=14)
    base = evaluate_predictions(series, preds, config)

    scaled = evaluate_predictions(affine_transform(series, 7.0, 0.0), preds, config)
    for b, s in zip(base.records, scaled.records):
        assert s.mfe == pytest.approx(7.0 * b.mfe, rel=1e-9, abs=1e-12)
        assert s.mae == pytest.approx(7.0 * b.mae, rel=1e-9, abs=1e-12)
        if b.rr is not None:
            assert s.rr == pytest.approx(b.rr, rel=1e-9)
        assert s.hit == b.hit

    shifted = evaluate_predictions(affine_transform(series, 1.0, 250.0), preds, config)
    for b, s in zip(base.records, shifted.records):
        assert s.mfe == pytest.approx(b.mfe, rel=1e-9, abs=1e-12)
        assert s.mae == pytest.approx(b.mae, rel=1e-9, abs=1e-12)
        assert s.hit == b.hit


def test_hit_rate_aggregation():
    closes = [100, 98, 96, 94, 92, 91, 90, 92.5, 95, 98, 101, 103, 105, 105, 105]
    series = series_from_closes(closes)
    preds = [Prediction(4, Direction.UP), Prediction(4, Direction.DOWN)]
    report = evaluate_predictions(series, preds, EvaluationConfig(horizon_bars=10, atr_window=5))
    assert report.hit_rate == pytest.approx(0.5)


def test_config_validation():
    for bad in (
        {"horizon_bars": 0},
        {"atr_window": 0},
        {"hit_multiplier": 0.0},
    ):
        with pytest.raises(ValueError):
            EvaluationConfig(**bad)


def test_report_serializes():
    series = series_from_closes([100, 101, 99, 103])
    report = evaluate_predictions(series, [Prediction(1, Direction.UP)])
    doc = report.to_dict()
    assert doc["records"][0]["direction"] == "up"
    assert "max_drawdown_over_series" in doc
