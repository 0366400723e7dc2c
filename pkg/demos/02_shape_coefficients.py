#!/usr/bin/env python3
"""Shape coefficients: what the four components say about a segment.

Three archetypal legs get encoded side by side, then the encoding is shown
to be bitwise identical under aggressive affine disguises.
"""

from fractions import Fraction

from qgms import classify_role
from qgms.encoding import encode_closes

ARCHETYPES = {
    "clean impulse      ": [100, 104, 108, 112, 116, 120],
    "grinding advance   ": [100, 103, 101, 105, 103, 107, 105, 110],
    "choppy drift       ": [100, 102, 99, 103, 100, 104, 101, 102],
    "sharp break (down) ": [120, 112, 105, 99, 94, 90],
    "failed rally       ": [100, 108, 104, 101, 100.5],
}


def main():
    print(f"{'leg':<20} {'eff':>6} {'retr':>6} {'bal':>6} {'skew':>6}  role")
    for name, closes in ARCHETYPES.items():
        c = encode_closes([Fraction(str(x)) for x in closes])
        role = classify_role(c)
        print(f"{name:<20} {c.efficiency:>6.3f} {c.retracement:>6.3f} "
              f"{c.balance:>6.3f} {c.skew:>6.3f}  {role.value}")

    print("\nbitwise invariance under p -> a*p + b:")
    base_closes = [Fraction(str(x)) for x in ARCHETYPES["grinding advance   "]]
    base = encode_closes(base_closes)
    for a, b in ((Fraction(1, 1000), Fraction(10_000)), (Fraction(1000), Fraction(-50_000))):
        moved = [a * x + b for x in base_closes]
        same = encode_closes(moved) == base
        print(f"  a={float(a):>8g} b={float(b):>9g}  identical={same}")
        assert same

    # degenerate inputs stay total: a flat leg and a perfect round trip
    flat = encode_closes([Fraction(5)] * 4)
    round_trip = encode_closes([Fraction(5), Fraction(9), Fraction(5)])
    print(f"\nflat leg        -> {flat}")
    print(f"round trip leg  -> {round_trip}")


if __name__ == "__main__":
    main()
