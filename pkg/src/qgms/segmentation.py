"""Decompose a close-price series into contiguous directional segments.

The rule is a zigzag over closes with a threshold *relative to the current
swing's own amplitude*: starting from the last confirmed pivot, the swing's
running extremum is tracked, and the extremum becomes the next pivot at the
first bar whose counter-move from it reaches ``rho * |extremum - pivot|``.
A percent-of-price threshold would not survive the anonymizing offset; a
ratio of price differences does, so segment boundaries are exactly
invariant under ``p -> a*p + b`` with ``a > 0``.

Tie handling is deterministic throughout: among equal extremes the earliest
index wins, and while the initial swing direction is still open, the
earlier of two simultaneously confirmable pivots is taken.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptySeries
from .market_data import PriceSeries, scale_closes_to_integers


class Direction(enum.Enum):
    UP = "up"
    DOWN = "down"
    FLAT = "flat"

    def opposite(self) -> "Direction":
        if self is Direction.UP:
            return Direction.DOWN
        if self is Direction.DOWN:
            return Direction.UP
        return Direction.FLAT


@dataclass(frozen=True)
class Segment:
    """A directional phase over bars ``[start_index, end_index]`` inclusive.

    Consecutive segments of one decomposition share their pivot bar, so the
    segments tile ``[0, n-1]``.  ``end_index == start_index`` only for a
    one-bar series.
    """

    start_index: int
    end_index: int
    direction: Direction
    start_price: Fraction
    end_price: Fraction

    @property
    def bar_count(self) -> int:
        return self.end_index - self.start_index + 1


@dataclass(frozen=True)
class SegmentationConfig:
    """Reversal threshold ``rho`` (fraction of swing amplitude) and minimum
    bars per confirmed segment."""

    rho: float = 0.382
    min_bars: int = 2

    def __post_init__(self):
        if not 0 < float(self.rho) < 1:
            raise ValueError(f"rho must be in (0, 1), got {self.rho}")
        if self.min_bars < 1:
            raise ValueError(f"min_bars must be >= 1, got {self.min_bars}")


def _direction_of(start: Fraction, end: Fraction) -> Direction:
    if end > start:
        return Direction.UP
    if end < start:
        return Direction.DOWN
    return Direction.FLAT


def pivot_indices(closes, rho: Fraction, min_bars: int) -> list:
    """Confirmed interior pivot indices for exact (Fraction) closes.

    Runs on integer-rescaled closes; all comparisons are integer-exact.
    ``rho`` must be a Fraction so threshold comparisons cross-multiply
    instead of rounding.
    """
    n = len(closes)
    if n <= 1:
        return []
    z = scale_closes_to_integers(list(closes))
    p, q = rho.numerator, rho.denominator

    pivots = []
    last = 0  # index of the last confirmed pivot
    trend = None  # None until the first swing direction is known
    # candidate extremum of the open swing: (index, value)
    hi = lo = (0, z[0])
    cand = None

    def confirmable(ext_idx, ext_val, counter, amplitude):
        if amplitude <= 0 or counter <= 0:
            return False
        if ext_idx - last + 1 < min_bars:
            return False
        return q * counter >= p * amplitude

    i = 1
    while i < n:
        x = z[i]
        if trend is None:
            if x > hi[1]:
                hi = (i, x)
            if x < lo[1]:
                lo = (i, x)
            up_ok = confirmable(hi[0], hi[1], hi[1] - x, hi[1] - z[last])
            down_ok = confirmable(lo[0], lo[1], x - lo[1], z[last] - lo[1])
            if up_ok and down_ok:
                # both swings confirmable at this bar: earliest pivot wins
                if hi[0] <= lo[0]:
                    down_ok = False
                else:
                    up_ok = False
            if up_ok:
                pivots.append(hi[0])
                last = hi[0]
                trend = Direction.DOWN
                cand = _extremum(z, last + 1, i, seek_max=False)
            elif down_ok:
                pivots.append(lo[0])
                last = lo[0]
                trend = Direction.UP
                cand = _extremum(z, last + 1, i, seek_max=True)
        elif trend is Direction.UP:
            if x > cand[1]:
                cand = (i, x)
            elif confirmable(cand[0], cand[1], cand[1] - x, cand[1] - z[last]):
                pivots.append(cand[0])
                last = cand[0]
                trend = Direction.DOWN
                cand = _extremum(z, last + 1, i, seek_max=False)
        else:  # trend is Direction.DOWN
            if x < cand[1]:
                cand = (i, x)
            elif confirmable(cand[0], cand[1], x - cand[1], z[last] - cand[1]):
                pivots.append(cand[0])
                last = cand[0]
                trend = Direction.UP
                cand = _extremum(z, last + 1, i, seek_max=True)
        i += 1
    return pivots


def _extremum(z, start, end, seek_max):
    """Earliest max/min of z[start..end] inclusive; (index, value)."""
    best_i, best_v = start, z[start]
    for j in range(start + 1, end + 1):
        if (z[j] > best_v) if seek_max else (z[j] < best_v):
            best_i, best_v = j, z[j]
    return (best_i, best_v)


def segment_closes(closes, config: SegmentationConfig) -> list:
    """Segment a list of exact closes; returns tiling (start, end) pairs."""
    n = len(closes)
    if n == 0:
        raise EmptySeries("cannot segment an empty series")
    if n == 1:
        return [(0, 0)]
    rho = Fraction(config.rho)
    bounds = [0] + pivot_indices(closes, rho, config.min_bars) + [n - 1]
    return [(bounds[k], bounds[k + 1]) for k in range(len(bounds) - 1)]


def segment_series(series: PriceSeries, config: SegmentationConfig = SegmentationConfig()) -> list:
    """Decompose ``series`` into a tiling sequence of :class:`Segment`.

    Deterministic (no randomness, earliest-index tie breaks) and exactly
    invariant under positive affine maps of the prices.

    Raises:
        EmptySeries: if the series has no bars.
    """
    series.require_non_empty()
    closes = series.closes()
    segments = []
    for s, e in segment_closes(closes, config):
        segments.append(
            Segment(
                start_index=s,
                end_index=e,
                direction=_direction_of(closes[s], closes[e]),
                start_price=closes[s],
                end_price=closes[e],
            )
        )
    return segments
