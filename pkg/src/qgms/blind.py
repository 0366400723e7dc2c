"""Blind forward-replay sessions with a tamper-evident prediction ledger.

Protocol, in order:

1. ``create_session`` derives an affine disguise ``(a, b)`` from a seed,
   strips symbol, dates and volume from the series, and publishes only a
   SHA-256 *commitment* to the sealed manifest (symbol, date range, affine
   parameters, seed, series digest).
2. Bars are served strictly forward, one at a time; the cursor never
   rewinds.
3. Predictions are accepted only for bars already served and are appended
   to a hash chain.  Entry ``i`` hashes
   ``SHA-256(prev_hash_bytes || payload_bytes || index_be64)`` where the
   payload is canonical JSON carrying the prediction *and* the serving
   cursor and server-side UTC timestamp, so every persisted byte is either
   hash-covered or checked against the hash-covered copy.
4. ``seal_and_reveal`` discloses the manifest, re-verifies the chain, and
   checks the manifest against the original commitment.  ``verify_ledger``
   performs the same checks offline, from files alone.

Anonymized prices are exact affine images of the originals, so every
structural output (segments, coefficients, zones) is identical on both
streams — the blind analyst loses nothing but identity.
"""

from __future__ import annotations

import enum
import json
import math
import random
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

from .canonical import ZERO_HASH, canonical_bytes, canonical_json, sha256_hex
from .errors import (
    AlreadyRevealed,
    LookaheadRejected,
    MalformedLedger,
    MalformedManifest,
    SessionRevealed,
    SessionSealed,
    SessionStateError,
)
from .market_data import (
    Bar,
    PriceSeries,
    affine_transform,
    format_rfc3339,
)
from .segmentation import Direction

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)

SCALE_LOW, SCALE_HIGH = 0.25, 4.0
OFFSET_SPAN_MULTIPLE = 10.0
SCALE_SIG_DECIMALS = 6


class SessionState(enum.Enum):
    CREATED = "created"
    RUNNING = "running"
    SEALED = "sealed"
    REVEALED = "revealed"


@dataclass(frozen=True)
class AnonymizationManifest:
    """The sealed identity record whose hash is the session commitment."""

    symbol: str
    timeframe: str
    start_timestamp: str
    end_timestamp: str
    affine_a: float
    affine_b: float
    rng_seed: int
    series_digest: str

    def to_dict(self) -> dict:
        return {
            "symbol": self.symbol,
            "timeframe": self.timeframe,
            "start_timestamp": self.start_timestamp,
            "end_timestamp": self.end_timestamp,
            "affine_a": self.affine_a,
            "affine_b": self.affine_b,
            "rng_seed": self.rng_seed,
            "series_digest": self.series_digest,
        }

    def commitment(self) -> str:
        return sha256_hex(canonical_bytes(self.to_dict()))


MANIFEST_FIELDS = (
    "symbol",
    "timeframe",
    "start_timestamp",
    "end_timestamp",
    "affine_a",
    "affine_b",
    "rng_seed",
    "series_digest",
)


def manifest_from_dict(data: dict) -> AnonymizationManifest:
    missing = [f for f in MANIFEST_FIELDS if f not in data]
    if missing:
        raise MalformedManifest(f"manifest missing fields: {missing}")
    try:
        return AnonymizationManifest(
            symbol=str(data["symbol"]),
            timeframe=str(data["timeframe"]),
            start_timestamp=str(data["start_timestamp"]),
            end_timestamp=str(data["end_timestamp"]),
            affine_a=float(data["affine_a"]),
            affine_b=float(data["affine_b"]),
            rng_seed=int(data["rng_seed"]),
            series_digest=str(data["series_digest"]),
        )
    except (TypeError, ValueError) as exc:
        raise MalformedManifest(f"manifest field has wrong type: {exc}") from None


def series_digest(series: PriceSeries) -> str:
    """SHA-256 over the canonical JSON form of the full original series."""
    return sha256_hex(canonical_bytes(series.to_dict()))


def round_significant(x: float, digits: int) -> float:
    if x == 0:
        return 0.0
    return round(x, digits - 1 - math.floor(math.log10(abs(x))))


def derive_affine(series: PriceSeries, seed: int):
    """Deterministic (a, b) for the anonymizing map, redrawn while any
    transformed price would be non-positive.

    ``a`` is log-uniform in [0.25, 4], rounded to 6 significant decimals;
    ``b`` is uniform in ±10x the series price span.  All draws come from
    one seeded generator, so the redraw loop is reproducible.
    """
    rng = random.Random(seed)
    lo = min(bar.low for bar in series.bars)
    span = float(max(bar.high for bar in series.bars) - lo)
    s = OFFSET_SPAN_MULTIPLE * span
    while True:
        u = rng.random()
        a_raw = math.exp(math.log(SCALE_LOW) + u * (math.log(SCALE_HIGH) - math.log(SCALE_LOW)))
        a = round_significant(a_raw, SCALE_SIG_DECIMALS)
        b = rng.uniform(-s, s)
        if Fraction(a) * lo + Fraction(b) > 0:
            return a, b


def anonymize(series: PriceSeries, a: float, b: float) -> PriceSeries:
    """Exact affine disguise; timestamps become ordinal placeholders,
    symbol is blanked, volume dropped.  Timeframe is retained."""
    transformed = affine_transform(series, a, b)
    bars = [
        Bar(
            timestamp=_EPOCH + timedelta(seconds=i),
            open=bar.open,
            high=bar.high,
            low=bar.low,
            close=bar.close,
            volume=None,
        )
        for i, bar in enumerate(transformed.bars)
    ]
    return PriceSeries(symbol="ANON", timeframe=series.timeframe, bars=tuple(bars))


def invert_affine(series: PriceSeries, a: float, b: float) -> PriceSeries:
    """Exact inverse of the anonymizing price map (timestamps untouched)."""
    fa, fb = Fraction(a), Fraction(b)
    return affine_transform(series, 1 / fa, -fb / fa)


# --- hash-chained ledger -----------------------------------------------------


@dataclass(frozen=True)
class LedgerEntry:
    """One chained prediction record.

    ``payload`` is the exact canonical-JSON text whose UTF-8 bytes enter
    the hash; ``cursor_index`` and ``timestamp_utc`` are convenience copies
    of payload fields and are cross-checked during verification.
    """

    index: int
    cursor_index: int
    payload: str
    timestamp_utc: str
    prev_hash: str
    hash: str

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "cursor_index": self.cursor_index,
            "payload": self.payload,
            "timestamp_utc": self.timestamp_utc,
            "prev_hash": self.prev_hash,
            "hash": self.hash,
        }


def compute_entry_hash(prev_hash: str, payload: str, index: int) -> str:
    preimage = bytes.fromhex(prev_hash) + payload.encode("utf-8") + index.to_bytes(8, "big")
    return sha256_hex(preimage)


class CommitmentLedger:
    """Append-only hash chain of prediction payloads."""

    def __init__(self, entries=None):
        self.entries = list(entries) if entries else []

    def last_hash(self) -> str:
        return self.entries[-1].hash if self.entries else ZERO_HASH

    def append(self, *, bar_index: int, cursor_index: int, expected_direction: str,
               note: str, timestamp_utc: str) -> LedgerEntry:
        payload = canonical_json(
            {
                "bar_index": bar_index,
                "cursor_index": cursor_index,
                "expected_direction": expected_direction,
                "note": note,
                "timestamp_utc": timestamp_utc,
            }
        )
        index = len(self.entries)
        prev_hash = self.last_hash()
        entry = LedgerEntry(
            index=index,
            cursor_index=cursor_index,
            payload=payload,
            timestamp_utc=timestamp_utc,
            prev_hash=prev_hash,
            hash=compute_entry_hash(prev_hash, payload, index),
        )
        self.entries.append(entry)
        return entry


@dataclass(frozen=True)
class VerificationReport:
    chain_ok: bool
    commitment_ok: bool
    lookahead_ok: bool
    first_broken_link: Optional[int]
    entry_count: int

    @property
    def all_ok(self) -> bool:
        return self.chain_ok and self.commitment_ok and self.lookahead_ok

    def to_dict(self) -> dict:
        return {
            "chain_ok": self.chain_ok,
            "commitment_ok": self.commitment_ok,
            "lookahead_ok": self.lookahead_ok,
            "first_broken_link": self.first_broken_link,
            "entry_count": self.entry_count,
        }


def verify_entries(entries, expected_count: Optional[int] = None,
                   expected_head: Optional[str] = None) -> tuple:
    """Chain verification: returns (chain_ok, first_broken_link, lookahead_ok).

    Entry ``i`` is intact when its stored index is ``i``, its stored hash
    recomputes from (prev_hash, payload, index), its prev_hash matches the
    previous entry's hash (zeros for entry 0), and its surfaced
    cursor/timestamp copies agree with the hash-covered payload.

    A bare hash chain cannot see tail truncation, so callers that know how
    long the chain should be (the session at reveal time) pass
    ``expected_count`` / ``expected_head``; a short or substituted chain
    then fails with ``first_broken_link`` at the first missing entry.
    """
    first_broken = None
    lookahead_ok = True
    for i, e in enumerate(entries):
        ok = e.index == i
        expected_prev = ZERO_HASH if i == 0 else entries[i - 1].hash
        ok = ok and e.prev_hash == expected_prev
        try:
            recomputed = compute_entry_hash(e.prev_hash, e.payload, e.index)
        except ValueError:
            recomputed = None
        ok = ok and recomputed == e.hash
        try:
            body = json.loads(e.payload)
            ok = ok and body.get("cursor_index") == e.cursor_index
            ok = ok and body.get("timestamp_utc") == e.timestamp_utc
            if not isinstance(body.get("bar_index"), int) or body["bar_index"] >= e.cursor_index:
                lookahead_ok = False
        except (json.JSONDecodeError, TypeError):
            ok = False
        if not ok and first_broken is None:
            first_broken = i
    if first_broken is None and expected_count is not None and len(entries) != expected_count:
        first_broken = min(len(entries), expected_count)
    if first_broken is None and expected_head is not None:
        actual_head = entries[-1].hash if entries else ZERO_HASH
        if actual_head != expected_head:
            first_broken = max(0, len(entries) - 1)
    return first_broken is None, first_broken, lookahead_ok


# --- session ------------------------------------------------------------------


@dataclass(frozen=True)
class ServedBar:
    """One anonymized candle as handed to the analyst."""

    index: int
    open: float
    high: float
    low: float
    close: float

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "open": self.open,
            "high": self.high,
            "low": self.low,
            "close": self.close,
        }


@dataclass(frozen=True)
class RevealResult:
    manifest: AnonymizationManifest
    verification: VerificationReport


class BlindSession:
    """State machine Created -> Running -> Sealed -> Revealed.

    The manifest stays sealed (attribute access raises) until reveal; only
    the commitment hash is public from the start.  Mutations are serialized
    by a per-session lock.
    """

    def __init__(self, series: PriceSeries, seed: int, clock: Optional[Callable] = None,
                 session_id: Optional[str] = None):
        series.require_non_empty()
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.session_id = session_id or uuid.uuid4().hex
        self._clock = clock or (lambda: datetime.now(timezone.utc))
        self._original = series
        a, b = derive_affine(series, seed)
        self._manifest = AnonymizationManifest(
            symbol=series.symbol,
            timeframe=series.timeframe,
            start_timestamp=format_rfc3339(series.bars[0].timestamp),
            end_timestamp=format_rfc3339(series.bars[-1].timestamp),
            affine_a=a,
            affine_b=b,
            rng_seed=seed,
            series_digest=series_digest(series),
        )
        self.commitment = self._manifest.commitment()
        self.anonymized_series = anonymize(series, a, b)
        self.state = SessionState.CREATED
        self.cursor = 0
        self.ledger = CommitmentLedger()
        self._lock = threading.Lock()
        self._reveal: Optional[RevealResult] = None

    def __len__(self) -> int:
        return len(self.anonymized_series)

    @property
    def original_series(self) -> PriceSeries:
        if self.state is not SessionState.REVEALED:
            raise SessionStateError("original series is sealed until reveal")
        return self._original

    @property
    def manifest(self) -> AnonymizationManifest:
        if self.state is not SessionState.REVEALED:
            raise SessionStateError("manifest is sealed until reveal")
        return self._manifest

    def _reject_if_closed(self):
        if self.state is SessionState.SEALED:
            raise SessionSealed(f"session {self.session_id} is sealed")
        if self.state is SessionState.REVEALED:
            raise SessionRevealed(f"session {self.session_id} is revealed")

    def next_bar(self) -> Optional[ServedBar]:
        """Serve the next anonymized bar, or None at end of stream."""
        with self._lock:
            self._reject_if_closed()
            if self.state is SessionState.CREATED:
                self.state = SessionState.RUNNING
            if self.cursor >= len(self.anonymized_series):
                return None
            bar = self.anonymized_series.bars[self.cursor]
            served = ServedBar(
                index=self.cursor,
                open=float(bar.open),
                high=float(bar.high),
                low=float(bar.low),
                close=float(bar.close),
            )
            self.cursor += 1
            return served

    def submit_prediction(self, bar_index: int, expected_direction, note: str = "") -> LedgerEntry:
        """Append a prediction for an already-served bar to the chain.

        Raises LookaheadRejected if ``bar_index`` has not been served yet
        (in particular, any submission before the first bar is served).
        """
        direction = _direction_label(expected_direction)
        with self._lock:
            self._reject_if_closed()
            if bar_index < 0 or bar_index >= self.cursor:
                raise LookaheadRejected(
                    f"bar {bar_index} not served yet (cursor={self.cursor})"
                )
            return self.ledger.append(
                bar_index=bar_index,
                cursor_index=self.cursor,
                expected_direction=direction,
                note=note,
                timestamp_utc=format_rfc3339(self._clock()),
            )

    def seal(self) -> None:
        """Freeze the ledger; no bars or predictions after this."""
        with self._lock:
            if self.state is SessionState.REVEALED:
                raise SessionRevealed(f"session {self.session_id} is revealed")
            self.state = SessionState.SEALED

    def seal_and_reveal(self) -> RevealResult:
        """Disclose the manifest; verify chain and commitment.

        Raises AlreadyRevealed on a second call; the service layer caches
        the first result to make reveal idempotent over HTTP.
        """
        with self._lock:
            if self.state is SessionState.REVEALED:
                raise AlreadyRevealed(f"session {self.session_id} already revealed")
            if self.state is SessionState.CREATED:
                raise SessionStateError("cannot reveal a session before replay starts")
            self.state = SessionState.SEALED
            chain_ok, first_broken, lookahead_ok = verify_entries(self.ledger.entries)
            commitment_ok = self._manifest.commitment() == self.commitment
            self.state = SessionState.REVEALED
            self._reveal = RevealResult(
                manifest=self._manifest,
                verification=VerificationReport(
                    chain_ok=chain_ok,
                    commitment_ok=commitment_ok,
                    lookahead_ok=lookahead_ok,
                    first_broken_link=first_broken,
                    entry_count=len(self.ledger.entries),
                ),
            )
            return self._reveal

    @property
    def reveal_result(self) -> Optional[RevealResult]:
        return self._reveal


def _direction_label(direction) -> str:
    if isinstance(direction, Direction):
        if direction is Direction.FLAT:
            raise ValueError("prediction direction must be up or down")
        return direction.value
    label = str(direction).lower()
    if label not in ("up", "down"):
        raise ValueError(f"prediction direction must be 'up' or 'down', got {direction!r}")
    return label


def create_session(series: PriceSeries, seed: int, clock: Optional[Callable] = None,
                   session_id: Optional[str] = None) -> tuple:
    """Create a blind session; returns (session, commitment).

    Same series + same seed always produce the same commitment and the
    same anonymized stream.

    Raises:
        EmptySeries: for a zero-bar series.
    """
    session = BlindSession(series, seed, clock=clock, session_id=session_id)
    return session, session.commitment


# --- files --------------------------------------------------------------------


ENTRY_FIELDS = ("index", "cursor_index", "payload", "timestamp_utc", "prev_hash", "hash")


def entry_from_dict(data: dict, line_no: int) -> LedgerEntry:
    if not isinstance(data, dict):
        raise MalformedLedger(f"line {line_no}: entry is not an object")
    missing = [f for f in ENTRY_FIELDS if f not in data]
    if missing:
        raise MalformedLedger(f"line {line_no}: missing fields {missing}")
    try:
        entry = LedgerEntry(
            index=int(data["index"]),
            cursor_index=int(data["cursor_index"]),
            payload=str(data["payload"]),
            timestamp_utc=str(data["timestamp_utc"]),
            prev_hash=str(data["prev_hash"]),
            hash=str(data["hash"]),
        )
    except (TypeError, ValueError) as exc:
        raise MalformedLedger(f"line {line_no}: {exc}") from None
    for field_name in ("prev_hash", "hash"):
        value = getattr(entry, field_name)
        if len(value) != 64 or any(ch not in "0123456789abcdef" for ch in value):
            raise MalformedLedger(f"line {line_no}: {field_name} is not lowercase sha-256 hex")
    return entry


def read_ledger(path) -> list:
    """Parse a JSONL ledger file into entries (MalformedLedger on errors)."""
    entries = []
    text = Path(path).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedLedger(f"line {line_no}: invalid JSON: {exc}") from None
        entries.append(entry_from_dict(data, line_no))
    return entries


def entry_line(entry: LedgerEntry) -> str:
    return canonical_json(entry.to_dict())


def write_ledger(path, entries) -> None:
    Path(path).write_text(
        "".join(entry_line(e) + "\n" for e in entries), encoding="utf-8"
    )


def read_manifest(path) -> AnonymizationManifest:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedManifest(f"invalid manifest JSON: {exc}") from None
    return manifest_from_dict(data)


def write_manifest(path, manifest: AnonymizationManifest) -> None:
    Path(path).write_text(canonical_json(manifest.to_dict()) + "\n", encoding="utf-8")


def verify_ledger(ledger_path, manifest_path, commitment: str,
                  expected_count: Optional[int] = None,
                  expected_head: Optional[str] = None) -> VerificationReport:
    """Offline re-verification from files alone, for a third party.

    ``expected_count`` / ``expected_head`` are optional out-of-band facts
    (e.g. the last entry hash the analyst received) that extend detection
    to tail truncation.

    Raises:
        MalformedLedger / MalformedManifest: when the files do not parse.
    """
    entries = read_ledger(ledger_path)
    manifest = read_manifest(manifest_path)
    chain_ok, first_broken, lookahead_ok = verify_entries(
        entries, expected_count=expected_count, expected_head=expected_head
    )
    commitment_ok = manifest.commitment() == commitment.strip().lower()
    return VerificationReport(
        chain_ok=chain_ok,
        commitment_ok=commitment_ok,
        lookahead_ok=lookahead_ok,
        first_broken_link=first_broken,
        entry_count=len(entries),
    )
