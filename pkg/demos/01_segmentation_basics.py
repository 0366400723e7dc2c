#!/usr/bin/env python3
"""Decompose a close series into directional segments.

The reversal threshold is a fraction of the current swing's own amplitude,
so the decomposition only sees shape: rescaling or shifting every price
leaves the boundaries untouched.
"""

import random
from datetime import datetime, timedelta, timezone
from fractions import Fraction

from qgms import Bar, PriceSeries, SegmentationConfig, affine_transform, segment_series


def make_series(closes):
    t0 = datetime(2015, 1, 1, tzinfo=timezone.utc)
    bars = [
        Bar(t0 + timedelta(days=i), Fraction(str(c)), Fraction(str(c)),
            Fraction(str(c)), Fraction(str(c)))
        for i, c in enumerate(closes)
    ]
    return PriceSeries("DEMO", "1D", tuple(bars))


def show(title, segments):
    print(f"\n{title}")
    for seg in segments:
        print(f"  bars [{seg.start_index:>3}, {seg.end_index:>3}]  {seg.direction.value:<5}"
              f"  {float(seg.start_price):>10.3f} -> {float(seg.end_price):>10.3f}")


def main():
    # a hand-made swing sequence: rally, pullback, rally, slump
    closes = [100, 103, 107, 111, 108, 105, 109, 114, 118, 116, 110, 104, 99]
    series = make_series(closes)
    config = SegmentationConfig(rho=0.382, min_bars=2)
    segments = segment_series(series, config)
    show(f"zigzag over {len(closes)} closes (rho={config.rho})", segments)

    # demand a deeper counter-move and the small pullback stops counting
    strict = segment_series(series, SegmentationConfig(rho=0.75))
    show("same closes at rho=0.75 (shallow swings absorbed)", strict)

    # the whole point: an affine disguise changes nothing structural
    disguised = affine_transform(series, a=0.003, b=250.0)
    same = segment_series(disguised, config)
    show("after p -> 0.003*p + 250 (identical boundaries)", same)
    boundaries = [(s.start_index, s.end_index, s.direction) for s in segments]
    assert boundaries == [(s.start_index, s.end_index, s.direction) for s in same]

    # a noisy random walk, for scale
    rng = random.Random(11)
    walk = [100.0]
    for _ in range(119):
        walk.append(max(1.0, walk[-1] + rng.uniform(-4.0, 4.0)))
    walk_segments = segment_series(make_series(walk), config)
    print(f"\nrandom walk of {len(walk)} bars -> {len(walk_segments)} segments")


if __name__ == "__main__":
    main()
