"""Command-line entry point: run experiments, describe presets, fit decay rates."""

from __future__ import annotations

import argparse
import sys

from . import presets
from .config import ConfigError, ExperimentPreset, PRESET_NAMES, parse_config


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="rarewave",
        description="Planar rarefaction wave laboratory for 2D isentropic "
                    "compressible Navier-Stokes flow")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a preset or a config file")
    p_run.add_argument("--config", help="path to an INI config file")
    p_run.add_argument("--preset", choices=PRESET_NAMES,
                       help="named preset with canonical defaults")
    p_run.add_argument("--out", required=True, help="artifact output directory")

    p_desc = sub.add_parser("describe", help="print preset defaults")
    p_desc.add_argument("--preset", choices=PRESET_NAMES, default=None)

    p_fit = sub.add_parser("fit", help="fit a power-law decay rate on a diagnostics CSV")
    p_fit.add_argument("--csv", required=True, help="diagnostics.csv path")
    p_fit.add_argument("--column", required=True, help="column to fit")
    p_fit.add_argument("--window", nargs=2, type=float, required=True,
                       metavar=("TMIN", "TMAX"))
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "describe":
        print(presets.describe(args.preset))
        return 0
    if args.command == "fit":
        from .diagnostics import decay_rate_fit, read_diagnostics_csv
        cols = read_diagnostics_csv(args.csv)
        if args.column not in cols:
            print(f"column {args.column!r} not in {sorted(cols)}", file=sys.stderr)
            return 2
        try:
            slope, r2 = decay_rate_fit(cols["t"], cols[args.column], tuple(args.window))
        except ValueError as exc:
            print(f"fit error: {exc}", file=sys.stderr)
            return 2
        print(f"column={args.column} window=[{args.window[0]:g}, {args.window[1]:g}] "
              f"slope={slope:+.6f} r2={r2:.6f}")
        return 0
    # run
    if bool(args.config) == bool(args.preset):
        print("run needs exactly one of --config or --preset", file=sys.stderr)
        return 2
    try:
        if args.config:
            with open(args.config) as fh:
                _, preset = parse_config(fh.read())
        else:
            preset = presets.default_preset(args.preset)
        code = presets.run_preset(preset, args.out)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = f"{args.out}/report.txt"
    try:
        with open(report) as fh:
            print(fh.read(), end="")
    except OSError:
        pass
    return code


if __name__ == "__main__":
    raise SystemExit(main())
