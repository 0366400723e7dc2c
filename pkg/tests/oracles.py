"""Independent brute-force oracles.

These restate the rules directly, recomputing everything from scratch at
each step, and are deliberately kept free of the library's incremental
code paths.
"""

from fractions import Fraction


def zigzag_pivots_oracle(closes, rho: Fraction, min_bars: int):
    """Forward pivot scan with full-window rescans at every bar.

    At each bar j, the open swing's extremum is recomputed by scanning the
    whole window from the last pivot; the extremum becomes a pivot at the
    first j whose counter-move reaches rho * amplitude, subject to the
    minimum-bars rule.  While the first swing's direction is unknown, both
    extremes are tracked and the earlier confirmable one wins.
    """
    closes = list(closes)
    n = len(closes)
    if n <= 1:
        return []

    def earliest_max(lo, hi):
        best = lo
        for j in range(lo + 1, hi + 1):
            if closes[j] > closes[best]:
                best = j
        return best

    def earliest_min(lo, hi):
        best = lo
        for j in range(lo + 1, hi + 1):
            if closes[j] < closes[best]:
                best = j
        return best

    pivots = []
    last = 0
    trend = None  # None / "up" / "down": direction of the open swing
    j = 1
    while j < n:
        if trend is None:
            hi = earliest_max(last, j)
            lo = earliest_min(last, j)
            amp_up = closes[hi] - closes[last]
            amp_dn = closes[last] - closes[lo]
            up_ok = (
                amp_up > 0
                and closes[hi] - closes[j] > 0
                and closes[hi] - closes[j] >= rho * amp_up
                and hi - last + 1 >= min_bars
            )
            dn_ok = (
                amp_dn > 0
                and closes[j] - closes[lo] > 0
                and closes[j] - closes[lo] >= rho * amp_dn
                and lo - last + 1 >= min_bars
            )
            if up_ok and dn_ok:
                if hi <= lo:
                    dn_ok = False
                else:
                    up_ok = False
            if up_ok:
                pivots.append(hi)
                last = hi
                trend = "down"
            elif dn_ok:
                pivots.append(lo)
                last = lo
                trend = "up"
        elif trend == "up":
            hi = earliest_max(last, j)
            amp = closes[hi] - closes[last]
            if (
                amp > 0
                and closes[hi] - closes[j] > 0
                and closes[hi] - closes[j] >= rho * amp
                and hi - last + 1 >= min_bars
            ):
                pivots.append(hi)
                last = hi
                trend = "down"
        else:
            lo = earliest_min(last, j)
            amp = closes[last] - closes[lo]
            if (
                amp > 0
                and closes[j] - closes[lo] > 0
                and closes[j] - closes[lo] >= rho * amp
                and lo - last + 1 >= min_bars
            ):
                pivots.append(lo)
                last = lo
                trend = "up"
        j += 1
    return pivots


def segments_oracle(closes, rho: Fraction, min_bars: int):
    """(start, end, direction) triples from the pivot-scan oracle."""
    n = len(closes)
    if n == 1:
        return [(0, 0, "flat")]
    bounds = [0] + zigzag_pivots_oracle(closes, rho, min_bars) + [n - 1]
    out = []
    for a, b in zip(bounds, bounds[1:]):
        if closes[b] > closes[a]:
            d = "up"
        elif closes[b] < closes[a]:
            d = "down"
        else:
            d = "flat"
        out.append((a, b, d))
    return out


def max_drawdown_oracle(values):
    """Exhaustive O(n^2) scan over all peak/trough pairs."""
    worst = 0.0
    for i in range(len(values)):
        for j in range(i, len(values)):
            dd = (values[i] - values[j]) / values[i]
            if dd > worst:
                worst = dd
    return worst


def excursions_oracle(closes, i, direction_sign, horizon):
    """(mfe, mae) by exhaustive scan of the horizon window."""
    mfe = mae = 0.0
    for j in range(i + 1, min(i + horizon, len(closes) - 1) + 1):
        move = direction_sign * (closes[j] - closes[i])
        mfe = max(mfe, move)
        mae = max(mae, -move)
    return mfe, mae


def atr_oracle(bars, i, window):
    """Mean true range over the window ending at bar i, step by step."""
    trs = []
    for t in range(max(0, i - window + 1), i + 1):
        hi = float(bars[t].high)
        lo = float(bars[t].low)
        if t == 0:
            trs.append(hi - lo)
        else:
            pc = float(bars[t - 1].close)
            trs.append(max(hi - lo, abs(hi - pc), abs(lo - pc)))
    return sum(trs) / len(trs)
