#!/usr/bin/env python3
"""Record a deterministic scripted session against the real service into
JSON fixtures for the console test suite.

Usage: python3 tools/record_fixtures.py   (from frontend/)
Writes tests/fixtures/recorded.json.
"""

import json
import random
import sys
import tempfile
from datetime import datetime, timedelta, timezone
from pathlib import Path

from fastapi.testclient import TestClient

from qgms.service import create_app

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "recorded.json"


def inline_bars(n=40, seed=20150115):
    rng = random.Random(seed)
    t0 = datetime(2015, 1, 1, tzinfo=timezone.utc)
    bars = []
    close = 1.2000
    for i in range(n):
        o = close
        close = max(0.9, o + rng.uniform(-0.004, 0.004))
        hi = max(o, close) + rng.uniform(0, 0.002)
        lo = min(o, close) - rng.uniform(0, 0.002)
        bars.append(
            {
                "timestamp": (t0 + timedelta(days=i)).isoformat().replace("+00:00", "Z"),
                "open": round(o, 6),
                "high": round(hi, 6),
                "low": round(lo, 6),
                "close": round(close, 6),
            }
        )
    return bars


def main():
    recording = []
    clock = lambda: datetime(2020, 6, 1, 12, 0, 0, tzinfo=timezone.utc)
    with tempfile.TemporaryDirectory() as tmp:
        app = create_app(Path(tmp) / "sessions", clock=clock)
        client = TestClient(app)

        def record(method, path, body=None):
            resp = client.request(method, path, json=body)
            entry = {
                "method": method,
                "path": path,
                "status": resp.status_code,
                "response": resp.json() if resp.status_code != 204 and resp.content else None,
            }
            if body is not None:
                entry["request"] = body
            recording.append(entry)
            return entry["response"]

        created = record(
            "POST",
            "/sessions",
            {"inline_bars": inline_bars(), "symbol": "EURCHF", "timeframe": "1D", "seed": 424242},
        )
        sid = created["session_id"]

        # an eager prediction before any bar is served: rejected
        record("POST", f"/sessions/{sid}/predictions",
               {"bar_index": 0, "expected_direction": "down", "note": "too eager"})

        for _ in range(21):
            record("GET", f"/sessions/{sid}/bars/next")

        record("POST", f"/sessions/{sid}/predictions",
               {"bar_index": 19, "expected_direction": "down", "note": "exhaustion call"})
        # a lookahead attempt after 21 bars (cursor 21, bar 21 unseen): rejected
        record("POST", f"/sessions/{sid}/predictions",
               {"bar_index": 21, "expected_direction": "up", "note": "peek"})
        record("POST", f"/sessions/{sid}/predictions",
               {"bar_index": 20, "expected_direction": "up", "note": "bounce call"})

        record("POST", f"/sessions/{sid}/seal")
        # prediction on a sealed session: 409 SESSION_SEALED
        record("POST", f"/sessions/{sid}/predictions",
               {"bar_index": 5, "expected_direction": "up", "note": "late"})
        record("POST", f"/sessions/{sid}/reveal")
        record("GET", f"/sessions/{sid}/report?horizon=10&atr=5&k=1")

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"session_id": sid, "exchanges": recording}, indent=2) + "\n")
    print(f"wrote {len(recording)} exchanges to {OUT}", file=sys.stderr)


if __name__ == "__main__":
    main()
