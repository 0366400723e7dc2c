"""Command-line entry point.

Subcommands: ingest, analyze, blind serve, blind verify, evaluate.
JSON goes to stdout, human-readable logs to stderr.  Exit codes: 0 ok,
1 domain error, 2 usage error (argparse).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import blind
from .detector import DetectorConfig, detect_terminal_zones
from .errors import QgmsError
from .hierarchy import HierarchyConfig, build_tree, check_admissibility, node_to_dict
from .market_data import load_csv_file
from .metrics import EvaluationConfig, evaluate_predictions, predictions_from_ledger


def _add_series_args(p):
    p.add_argument("--input", required=True, help="CSV file (timestamp,open,high,low,close[,volume])")
    p.add_argument("--symbol", default=None)
    p.add_argument("--timeframe", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgms", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse + validate a CSV, emit the normalized series")
    _add_series_args(p)
    p.add_argument("--output", default=None, help="write series JSON here instead of stdout")

    p = sub.add_parser("analyze", help="build the structure tree and detect terminal zones")
    _add_series_args(p)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--rho", type=float, default=0.382)
    p.add_argument("--gamma", type=float, default=1.6)
    p.add_argument("--min-bars", type=int, default=2)
    p.add_argument("--epsilon", type=float, default=0.15)
    p.add_argument("--delta", type=float, default=0.15)
    p.add_argument("--format", choices=("json", "text"), default="json")

    blind_p = sub.add_parser("blind", help="blind-protocol commands")
    blind_sub = blind_p.add_subparsers(dest="blind_command", required=True)

    p = blind_sub.add_parser("serve", help="run the session service")
    p.add_argument("--port", type=int, default=8750)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data-dir", default="blind_sessions")

    p = blind_sub.add_parser("verify", help="offline ledger + commitment verification")
    p.add_argument("--ledger", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--commitment", required=True)

    p = sub.add_parser("evaluate", help="score ledger predictions against the revealed series")
    _add_series_args(p)
    p.add_argument("--ledger", required=True)
    p.add_argument("--horizon", type=int, default=50)
    p.add_argument("--atr", type=int, default=14)
    p.add_argument("--k", type=float, default=2.0)

    return parser


def _cmd_ingest(args) -> int:
    series = load_csv_file(args.input, symbol=args.symbol, timeframe=args.timeframe)
    doc = series.to_dict()
    text = json.dumps(doc, indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
        print(f"wrote {len(series)} bars to {args.output}", file=sys.stderr)
    else:
        print(text)
    return 0


def _cmd_analyze(args) -> int:
    series = load_csv_file(args.input, symbol=args.symbol, timeframe=args.timeframe)
    config = HierarchyConfig(levels=args.levels, rho0=args.rho, gamma=args.gamma,
                             min_bars=args.min_bars)
    roots = build_tree(series, config)
    zones = detect_terminal_zones(roots, DetectorConfig(epsilon=args.epsilon, delta=args.delta),
                                  config.region_table)
    violations = check_admissibility(roots, config.region_table)
    doc = {
        "symbol": series.symbol,
        "timeframe": series.timeframe,
        "bars": len(series),
        "config": {
            "levels": args.levels,
            "rho": args.rho,
            "gamma": args.gamma,
            "min_bars": args.min_bars,
            "epsilon": args.epsilon,
            "delta": args.delta,
        },
        "tree": [node_to_dict(r, table=config.region_table) for r in roots],
        "terminal_zones": [z.as_dict() for z in zones],
        "admissibility_violations": [
            {"path": list(v.path), "component": v.component, "score": v.score}
            for v in violations
        ],
    }
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(f"{series.symbol} {series.timeframe}: {len(series)} bars, "
              f"{len(doc['tree'])} root segments, {len(zones)} terminal zone(s)")
        for z in zones:
            print(f"  bar {z.bar_index}: expect {z.expected_direction.value} "
                  f"(parent gauge {z.parent_saturation:.3f}, child gauge {z.child_saturation:.3f})")
        for v in violations:
            print(f"  violation at {'/'.join(map(str, v.path))}: {v.component} gauge {v.score:.3f}")
    return 0


def _cmd_blind_verify(args) -> int:
    report = blind.verify_ledger(args.ledger, args.manifest, args.commitment)
    print(json.dumps(report.to_dict(), indent=2))
    if report.all_ok:
        print("ledger verified: chain ok, commitment ok", file=sys.stderr)
        return 0
    if not report.chain_ok:
        print(f"chain BROKEN at entry {report.first_broken_link}", file=sys.stderr)
    if not report.commitment_ok:
        print("commitment MISMATCH: manifest does not hash to the commitment", file=sys.stderr)
    if not report.lookahead_ok:
        print("lookahead violation: a prediction references an unserved bar", file=sys.stderr)
    return 1


def _cmd_evaluate(args) -> int:
    series = load_csv_file(args.input, symbol=args.symbol, timeframe=args.timeframe)
    entries = blind.read_ledger(args.ledger)
    config = EvaluationConfig(horizon_bars=args.horizon, atr_window=args.atr,
                              hit_multiplier=args.k)
    report = evaluate_predictions(series, predictions_from_ledger(entries), config)
    header = f"{'bar':>5} {'dir':>5} {'mfe':>10} {'mae':>10} {'rr':>8} {'hit':>4} {'trunc':>5}"
    print(header, file=sys.stderr)
    for r in report.records:
        rr = "inf" if r.no_adverse else f"{r.rr:.3f}"
        print(f"{r.bar_index:>5} {r.direction.value:>5} {r.mfe:>10.5f} {r.mae:>10.5f} "
              f"{rr:>8} {str(r.hit):>4} {str(r.truncated):>5}", file=sys.stderr)
    print(json.dumps(report.to_dict(), indent=2))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "ingest":
            return _cmd_ingest(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "blind":
            if args.blind_command == "serve":
                from .service import serve

                serve(port=args.port, data_dir=args.data_dir, host=args.host)
                return 0
            return _cmd_blind_verify(args)
        if args.command == "evaluate":
            return _cmd_evaluate(args)
    except (QgmsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
