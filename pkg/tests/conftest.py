"""Shared builders for random and hand-made series."""

import random
from datetime import datetime, timedelta, timezone
from fractions import Fraction

import pytest

from qgms.market_data import Bar, PriceSeries

T0 = datetime(2015, 1, 1, tzinfo=timezone.utc)


def series_from_closes(closes, symbol="TEST", timeframe="1D"):
    """Bars whose O/H/L all equal the close; enough for close-based code."""
    bars = []
    for i, c in enumerate(closes):
        c = Fraction(c)
        bars.append(Bar(T0 + timedelta(days=i), c, c, c, c))
    return PriceSeries(symbol=symbol, timeframe=timeframe, bars=tuple(bars))


def random_walk_closes(rng: random.Random, n: int, start=100.0, step=2.0):
    closes = [start]
    for _ in range(n - 1):
        nxt = closes[-1] + rng.uniform(-step, step)
        closes.append(max(nxt, 0.5))
    return [Fraction(c) for c in closes]


def random_ohlc_series(rng: random.Random, n: int, start=100.0, symbol="RND",
                       timeframe="1D", with_volume=False):
    bars = []
    prev_close = start
    for i in range(n):
        o = prev_close
        c = max(0.5, o + rng.uniform(-2.0, 2.0))
        hi = max(o, c) + rng.uniform(0.0, 1.0)
        lo = max(0.1, min(o, c) - rng.uniform(0.0, 1.0))
        volume = rng.uniform(0, 1e6) if with_volume else None
        bars.append(
            Bar(
                T0 + timedelta(days=i),
                Fraction(o),
                Fraction(hi),
                Fraction(lo),
                Fraction(c),
                volume,
            )
        )
        prev_close = c
    return PriceSeries(symbol=symbol, timeframe=timeframe, bars=tuple(bars))


@pytest.fixture
def rng():
    return random.Random(20150115)
