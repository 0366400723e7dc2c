#!/usr/bin/env python3
"""The full blind protocol, in-process: commit, replay, predict, seal,
reveal, verify - plus a demonstration that tampering is caught.

The analyst-side loop only ever touches anonymized bars and the published
commitment; symbol, dates and the affine disguise stay sealed until the
end.
"""

import json
import random
from dataclasses import replace
from datetime import datetime, timedelta, timezone
from fractions import Fraction

from qgms import create_session, invert_affine
from qgms.blind import verify_entries
from qgms.market_data import Bar, PriceSeries


def make_series(n=40, seed=2015):
    rng = random.Random(seed)
    t0 = datetime(2015, 1, 1, tzinfo=timezone.utc)
    bars = []
    close = 1.2000
    for i in range(n):
        o = close
        close = max(0.9, o + rng.uniform(-0.004, 0.004))
        hi = max(o, close) + rng.uniform(0, 0.002)
        lo = min(o, close) - rng.uniform(0, 0.002)
        bars.append(Bar(t0 + timedelta(days=i), Fraction(o), Fraction(hi),
                        Fraction(lo), Fraction(close), volume=rng.uniform(1e3, 1e5)))
    return PriceSeries("EURCHF", "1D", tuple(bars))


def main():
    series = make_series()
    session, commitment = create_session(series, seed=20150115)
    print(f"commitment published at creation:\n  {commitment}\n")

    # --- stage 1: blind forward replay -----------------------------------
    seen = []
    for _ in range(12):
        seen.append(session.next_bar())
    print(f"served {len(seen)} anonymized bars; last close {seen[-1].close:.5f} "
          "(disguised units, ordinal time)")

    entry = session.submit_prediction(len(seen) - 1, "down", note="exhaustion call")
    print(f"prediction chained: entry {entry.index}, hash {entry.hash[:16]}...")
    while session.next_bar() is not None:
        pass
    late = session.submit_prediction(len(session.anonymized_series) - 1, "up",
                                     note="second call at the end")
    print(f"prediction chained: entry {late.index}, hash {late.hash[:16]}...\n")

    # --- stage 2: seal, reveal, verify ------------------------------------
    result = session.seal_and_reveal()
    m = result.manifest
    print("revealed manifest:")
    print(f"  symbol={m.symbol} timeframe={m.timeframe}")
    print(f"  range {m.start_timestamp} .. {m.end_timestamp}")
    print(f"  disguise a={m.affine_a} b={m.affine_b:.6f} seed={m.rng_seed}")
    v = result.verification
    print(f"verification: chain_ok={v.chain_ok} commitment_ok={v.commitment_ok} "
          f"entries={v.entry_count}\n")

    recovered = invert_affine(session.anonymized_series, m.affine_a, m.affine_b)
    drift = max(
        abs(float(r.close - o.close)) for o, r in zip(series.bars, recovered.bars)
    )
    print(f"de-anonymized closes match the original to {drift:.1e}\n")

    # --- tamper demonstration ---------------------------------------------
    entries = list(session.ledger.entries)
    doctored = json.loads(entries[0].payload)
    doctored["expected_direction"] = "up"  # rewrite history
    entries[0] = replace(entries[0], payload=json.dumps(doctored, sort_keys=True,
                                                        separators=(",", ":")))
    chain_ok, first_broken, _ = verify_entries(entries)
    print(f"after rewriting entry 0's direction: chain_ok={chain_ok}, "
          f"first_broken_link={first_broken}")


if __name__ == "__main__":
    main()
