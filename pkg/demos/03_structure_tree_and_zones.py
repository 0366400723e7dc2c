#!/usr/bin/env python3
"""Build a multi-scale structure tree and hunt for terminal zones.

Uses the synthetic three-phase advance from the acceptance fixtures: two
impulses separated by a correction, then a collapse.  The tree sees the
advance as one saturated parent whose final leg is itself saturated and
trend-aligned, which is exactly the firing rule.
"""

from datetime import datetime, timedelta, timezone
from fractions import Fraction

from qgms import Bar, DetectorConfig, HierarchyConfig, PriceSeries, detect_terminal_zones
from qgms.hierarchy import build_tree, check_admissibility


def make_series(closes):
    t0 = datetime(2014, 10, 1, tzinfo=timezone.utc)
    bars = [
        Bar(t0 + timedelta(days=i), Fraction(str(c)), Fraction(str(c)),
            Fraction(str(c)), Fraction(str(c)))
        for i, c in enumerate(closes)
    ]
    return PriceSeries("SYN", "1D", tuple(bars))


def print_tree(node, indent=0):
    seg = node.segment
    c = node.coefficient
    print(f"{'  ' * indent}level {node.level}  [{seg.start_index:>2}, {seg.end_index:>2}] "
          f"{seg.direction.value:<5} {node.role.value:<13} "
          f"eff={c.efficiency:.2f} retr={c.retracement:.2f} bal={c.balance:.2f} skew={c.skew:.2f}")
    for child in node.children:
        print_tree(child, indent + 1)


def main():
    closes = (
        [100, 104.5, 109, 112.5, 116, 120.5, 124, 127.5, 130]   # impulse up
        + [127, 124, 121, 118]                                   # correction
        + [121, 124.5, 128, 130.5, 133, 135.5, 138, 140]         # final impulse
        + [135, 130, 125, 120, 115, 110, 106, 103, 101, 100]     # collapse
    )
    series = make_series(closes)
    config = HierarchyConfig(levels=2, rho0=0.382, gamma=1.6)

    roots = build_tree(series, config)
    print(f"structure tree over {len(series)} bars "
          f"(thresholds {float(config.rho_at(1)):.4f} coarse, {config.rho0} fine):\n")
    for root in roots:
        print_tree(root)

    violations = check_admissibility(roots, config.region_table)
    print(f"\nadmissibility violations: {len(violations)}")

    zones = detect_terminal_zones(roots, DetectorConfig(epsilon=0.15, delta=0.15),
                                  config.region_table)
    print(f"terminal zones: {len(zones)}")
    for z in zones:
        print(f"  bar {z.bar_index}: expect {z.expected_direction.value}, "
              f"parent gauge {z.parent_saturation:.2f}, final-leg gauge {z.child_saturation:.2f}")
    print("\nthe zone sits on the last bar of the advance; the collapse that "
          "follows is what the expected_direction points at")


if __name__ == "__main__":
    main()
