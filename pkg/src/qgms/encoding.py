"""Map segments to normalized, scale-invariant shape coefficients.

Each segment's close path is summarized by four ratios of price
differences.  Ratios of differences are unchanged by ``p -> a*p + b``
(a > 0), so the encoding is invariant under that group by construction —
exactly, not approximately, because the arithmetic is exact until the
single final rounding to float64.

Components, for a segment with net displacement ``net`` and bar-to-bar
steps ``d_i``:

* ``efficiency``  |net| / sum(|d_i|): 1 for a straight move, toward 0 for
  churn.  Range [0, 1].
* ``retracement``  largest internal counter-excursion (peak-to-trough
  against the segment direction) divided by |net|, capped at
  ``RETRACEMENT_CAP``.  Range [0, 10].
* ``balance``  fraction of steps moving with the segment direction, flat
  steps counting half.  Range [0, 1].
* ``skew``  position of the in-direction extreme close within the
  segment, 0 = first bar, 1 = last bar (earliest extreme on ties).

Degenerate segments keep the encoder total: a flat path (all closes
equal) encodes as (0, 0, 0.5, 0); a round trip (net 0, path > 0) encodes
as (0, cap, 0.5, 0).  Both carry ``degenerate=True``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import IndexOutOfRange
from .market_data import PriceSeries, scale_closes_to_integers
from .segmentation import Direction, Segment

RETRACEMENT_CAP = 10.0


class StructuralRole(enum.Enum):
    IMPULSIVE = "impulsive"
    CORRECTIVE = "corrective"
    CONSOLIDATIVE = "consolidative"


@dataclass(frozen=True)
class RoleThresholds:
    """Cutoffs for role classification; invented defaults, configurable."""

    impulsive_efficiency: float = 0.6
    impulsive_max_retracement: float = 0.5
    consolidative_efficiency: float = 0.2


@dataclass(frozen=True)
class StructuralCoefficient:
    """Scale-invariant 4-component signature of one segment."""

    efficiency: float
    retracement: float
    balance: float
    skew: float
    degenerate: bool = False

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise ValueError(f"efficiency out of [0,1]: {self.efficiency}")
        if not 0.0 <= self.retracement <= RETRACEMENT_CAP:
            raise ValueError(f"retracement out of [0,{RETRACEMENT_CAP}]: {self.retracement}")
        if not 0.0 <= self.balance <= 1.0:
            raise ValueError(f"balance out of [0,1]: {self.balance}")
        if not 0.0 <= self.skew <= 1.0:
            raise ValueError(f"skew out of [0,1]: {self.skew}")

    def component(self, name: str) -> float:
        return getattr(self, name)

    def as_dict(self) -> dict:
        return {
            "efficiency": self.efficiency,
            "retracement": self.retracement,
            "balance": self.balance,
            "skew": self.skew,
            "degenerate": self.degenerate,
        }


COMPONENTS = ("efficiency", "retracement", "balance", "skew")


def encode(segment: Segment, series: PriceSeries) -> StructuralCoefficient:
    """Encode one segment of ``series`` into its shape coefficient.

    Deterministic, and bitwise-identical for affine-transformed copies of
    the series.

    Raises:
        IndexOutOfRange: if the segment indices fall outside the series.
    """
    n = len(series)
    if not (0 <= segment.start_index <= segment.end_index < n):
        raise IndexOutOfRange(
            f"segment [{segment.start_index}, {segment.end_index}] outside series of {n} bars"
        )
    closes = [series.bars[i].close for i in range(segment.start_index, segment.end_index + 1)]
    return encode_closes(closes)


def encode_closes(closes) -> StructuralCoefficient:
    """Encode an explicit close path (exact Fractions)."""
    z = scale_closes_to_integers(list(closes))
    m = len(z)
    if m <= 1:
        return StructuralCoefficient(0.0, 0.0, 0.5, 0.0, degenerate=True)

    steps = [z[i + 1] - z[i] for i in range(m - 1)]
    path = sum(abs(d) for d in steps)
    net = z[-1] - z[0]
    if path == 0:
        return StructuralCoefficient(0.0, 0.0, 0.5, 0.0, degenerate=True)
    if net == 0:
        return StructuralCoefficient(0.0, RETRACEMENT_CAP, 0.5, 0.0, degenerate=True)

    sign = 1 if net > 0 else -1
    efficiency = Fraction(abs(net), path)

    # largest counter-excursion: max drawdown for up segments, max run-up
    # for down segments, measured on closes inside the segment
    run = z[0]
    excursion = 0
    for x in z[1:]:
        if sign > 0:
            if x > run:
                run = x
            elif run - x > excursion:
                excursion = run - x
        else:
            if x < run:
                run = x
            elif x - run > excursion:
                excursion = x - run
    retracement = Fraction(excursion, abs(net))
    if retracement > Fraction(RETRACEMENT_CAP):
        retracement = Fraction(RETRACEMENT_CAP)

    with_dir = sum(1 for d in steps if d * sign > 0)
    flat = sum(1 for d in steps if d == 0)
    balance = Fraction(2 * with_dir + flat, 2 * len(steps))

    extreme_idx = 0
    extreme_val = z[0]
    for j in range(1, m):
        if (z[j] > extreme_val) if sign > 0 else (z[j] < extreme_val):
            extreme_idx, extreme_val = j, z[j]
    skew = Fraction(extreme_idx, m - 1)

    return StructuralCoefficient(
        efficiency=float(efficiency),
        retracement=float(retracement),
        balance=float(balance),
        skew=float(skew),
        degenerate=False,
    )


def classify_role(
    c: StructuralCoefficient, thresholds: RoleThresholds = RoleThresholds()
) -> StructuralRole:
    """Assign exactly one role; impulsive takes precedence, then
    consolidative, else corrective."""
    if (
        c.efficiency >= thresholds.impulsive_efficiency
        and c.retracement <= thresholds.impulsive_max_retracement
    ):
        return StructuralRole.IMPULSIVE
    if c.efficiency <= thresholds.consolidative_efficiency:
        return StructuralRole.CONSOLIDATIVE
    return StructuralRole.CORRECTIVE


def direction_sign(direction: Direction) -> int:
    if direction is Direction.UP:
        return 1
    if direction is Direction.DOWN:
        return -1
    return 0
