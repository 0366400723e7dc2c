"""OHLC price series: parsing, validation, and exact affine transforms.

Prices are parsed from decimal text into exact rationals
(:class:`fractions.Fraction`) and stay exact through every transform.
That is what makes the structural pipeline *bitwise* invariant under
positive affine price maps ``p -> a*p + b``: differences of transformed
prices are exact multiples of the original differences, so every
downstream ratio is identical before the single final rounding to float.
Plain ``float`` arithmetic cannot offer that guarantee, and it would also
break the end-to-end property that an affine-transformed copy of a CSV
analyzes byte-identically (re-parsing rounded text loses the exact affine
relation).  Floats are accepted anywhere a price enters by value; they are
lifted exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    EmptySeries,
    InvariantViolation,
    MalformedRow,
    NonMonotonicTime,
    NonPositiveScale,
    OffsetUnderflow,
)

CSV_HEADER = "timestamp,open,high,low,close"
CSV_HEADER_VOLUME = "timestamp,open,high,low,close,volume"

Numeric = Union[int, float, Fraction]


def parse_rfc3339(text: str) -> datetime:
    """Parse an RFC 3339 timestamp into an aware UTC datetime."""
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(raw)
    except ValueError as exc:
        raise MalformedRow(f"bad timestamp {text!r}: {exc}") from None
    if dt.tzinfo is None:
        raise MalformedRow(f"timestamp {text!r} lacks a UTC offset")
    return dt.astimezone(timezone.utc)


def format_rfc3339(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _to_fraction(value: Numeric, what: str) -> Fraction:
    try:
        return Fraction(value)
    except (TypeError, ValueError) as exc:
        raise TypeError(f"{what} must be numeric, got {value!r}") from exc


@dataclass(frozen=True)
class Bar:
    """One candlestick: UTC timestamp plus positive OHLC prices.

    ``low <= min(open, close)`` and ``high >= max(open, close)`` are
    enforced at construction; volume, when present, must be >= 0.
    """

    timestamp: datetime
    open: Fraction
    high: Fraction
    low: Fraction
    close: Fraction
    volume: Optional[float] = None

    def __post_init__(self):
        for name in ("open", "high", "low", "close"):
            value = getattr(self, name)
            if not isinstance(value, Fraction):
                object.__setattr__(self, name, _to_fraction(value, name))
        if min(self.open, self.high, self.low, self.close) <= 0:
            raise InvariantViolation(
                f"bar at {self.timestamp}: prices must be strictly positive"
            )
        if self.low > min(self.open, self.close):
            raise InvariantViolation(
                f"bar at {self.timestamp}: low {float(self.low)} above open/close"
            )
        if self.high < max(self.open, self.close):
            raise InvariantViolation(
                f"bar at {self.timestamp}: high {float(self.high)} below open/close"
            )
        if self.volume is not None and self.volume < 0:
            raise InvariantViolation(f"bar at {self.timestamp}: negative volume")


@dataclass(frozen=True)
class PriceSeries:
    """Immutable ordered OHLC series for one symbol/timeframe."""

    symbol: str
    timeframe: str
    bars: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "bars", tuple(self.bars))
        for prev, cur in zip(self.bars, self.bars[1:]):
            if cur.timestamp <= prev.timestamp:
                raise NonMonotonicTime(
                    f"timestamp {cur.timestamp} does not advance past {prev.timestamp}"
                )

    def __len__(self) -> int:
        return len(self.bars)

    def require_non_empty(self) -> None:
        if not self.bars:
            raise EmptySeries(f"series {self.symbol}/{self.timeframe} has no bars")

    def closes(self) -> list:
        """Close prices as exact Fractions."""
        return [b.close for b in self.bars]

    def close_array(self) -> np.ndarray:
        """Close prices as float64, for metric computations."""
        return np.array([float(b.close) for b in self.bars], dtype=np.float64)

    def to_dict(self) -> dict:
        """JSON-ready representation (floats, RFC 3339 timestamps)."""
        bars = []
        for b in self.bars:
            row = {
                "timestamp": format_rfc3339(b.timestamp),
                "open": float(b.open),
                "high": float(b.high),
                "low": float(b.low),
                "close": float(b.close),
            }
            if b.volume is not None:
                row["volume"] = float(b.volume)
            bars.append(row)
        return {"symbol": self.symbol, "timeframe": self.timeframe, "bars": bars}

    def to_exact_dict(self) -> dict:
        """Like :meth:`to_dict` but prices as exact decimal strings, for
        lossless persistence."""
        bars = []
        for b in self.bars:
            row = {
                "timestamp": format_rfc3339(b.timestamp),
                "open": fraction_to_decimal_str(b.open),
                "high": fraction_to_decimal_str(b.high),
                "low": fraction_to_decimal_str(b.low),
                "close": fraction_to_decimal_str(b.close),
            }
            if b.volume is not None:
                row["volume"] = float(b.volume)
            bars.append(row)
        return {"symbol": self.symbol, "timeframe": self.timeframe, "bars": bars}


def _parse_price(token: str, line_no: int) -> Fraction:
    try:
        value = Decimal(token)
    except InvalidOperation:
        raise MalformedRow(f"line {line_no}: non-numeric field {token!r}") from None
    if not value.is_finite():
        raise MalformedRow(f"line {line_no}: non-finite price {token!r}")
    return Fraction(value)


def fraction_to_decimal_str(value: Fraction) -> str:
    """Exact decimal text for a rational whose denominator is 2^a * 5^b
    (every parsed or affine-transformed price is one)."""
    num, den = value.numerator, value.denominator
    twos = fives = 0
    d = den
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        raise ValueError(f"{value} has no finite decimal representation")
    shift = max(twos, fives)
    digits = num * 10**shift // den
    sign = "-" if digits < 0 else ""
    text = str(abs(digits)).rjust(shift + 1, "0")
    if shift == 0:
        return sign + text
    return f"{sign}{text[:-shift]}.{text[-shift:]}"


def parse_csv(text: str, symbol: str = "UNKNOWN", timeframe: str = "1D") -> PriceSeries:
    """Parse a CSV document into a validated :class:`PriceSeries`.

    The header must be exactly ``timestamp,open,high,low,close`` with an
    optional trailing ``,volume``.  A header-only document yields an empty
    series; analytical entry points reject empties themselves.

    Raises:
        MalformedRow: wrong column count or non-numeric field.
        InvariantViolation: OHLC ordering broken (e.g. high < low).
        NonMonotonicTime: timestamps not strictly increasing.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MalformedRow("empty document, expected a header line")
    header = lines[0]
    if header == CSV_HEADER_VOLUME:
        want = 6
    elif header == CSV_HEADER:
        want = 5
    else:
        raise MalformedRow(f"unrecognized header {header!r}")

    bars = []
    for line_no, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != want:
            raise MalformedRow(
                f"line {line_no}: expected {want} fields, got {len(fields)}"
            )
        ts = parse_rfc3339(fields[0])
        o, h, l, c = (_parse_price(tok, line_no) for tok in fields[1:5])
        volume = None
        if want == 6:
            try:
                volume = float(fields[5])
            except ValueError:
                raise MalformedRow(
                    f"line {line_no}: non-numeric volume {fields[5]!r}"
                ) from None
        bars.append(Bar(ts, o, h, l, c, volume))
    return PriceSeries(symbol=symbol, timeframe=timeframe, bars=tuple(bars))


def load_csv_file(path, symbol: Optional[str] = None,
                  timeframe: Optional[str] = None) -> PriceSeries:
    """Read a CSV file, taking symbol/timeframe from the arguments or from
    a ``SYMBOL_TIMEFRAME.csv`` filename convention."""
    p = Path(path)
    stem_parts = p.stem.split("_")
    if symbol is None:
        symbol = stem_parts[0] if stem_parts[0] else "UNKNOWN"
    if timeframe is None:
        timeframe = stem_parts[1] if len(stem_parts) > 1 else "1D"
    return parse_csv(p.read_text(encoding="utf-8"), symbol=symbol, timeframe=timeframe)


def affine_transform(series: PriceSeries, a: Numeric, b: Numeric) -> PriceSeries:
    """Map every price to ``a*p + b`` exactly (a > 0).

    Order relations between prices are preserved, so each bar's OHLC
    invariants survive.  Timestamps, ordering, volume, and bar count are
    unchanged.

    Raises:
        NonPositiveScale: if ``a <= 0``.
        OffsetUnderflow: if any transformed price would be <= 0.
    """
    fa = _to_fraction(a, "scale a")
    fb = _to_fraction(b, "offset b")
    if fa <= 0:
        raise NonPositiveScale(f"scale a must be > 0, got {float(fa)}")
    out = []
    for bar in series.bars:
        low = fa * bar.low + fb
        if low <= 0:
            raise OffsetUnderflow(
                f"bar at {bar.timestamp}: transformed low {float(low)} <= 0"
            )
        out.append(
            replace(
                bar,
                open=fa * bar.open + fb,
                high=fa * bar.high + fb,
                low=low,
                close=fa * bar.close + fb,
            )
        )
    return PriceSeries(symbol=series.symbol, timeframe=series.timeframe, bars=tuple(out))


def scale_closes_to_integers(closes: Sequence[Fraction]) -> list:
    """Rescale exact closes to integers on a common denominator.

    Multiplying every price by the (positive) common denominator is itself
    an affine map, so any ratio of price differences computed downstream is
    unchanged.  For float-derived prices the denominators are powers of two
    and the common denominator stays small.
    """
    common = math.lcm(*(c.denominator for c in closes)) if closes else 1
    return [int(c.numerator * (common // c.denominator)) for c in closes]
