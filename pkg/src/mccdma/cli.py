"""Command line front end.

``mccdma simulate`` runs a sweep and writes the results CSV;
``mccdma extract`` interpolates required-Eb/N0 values out of a results CSV.
Exit codes: 0 success, 1 configuration error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from . import simkit, sysmodel
from .detectors import parse_detector


def _parse_grid(text: str) -> list[float]:
    """``start:step:stop`` (stop inclusive) or a comma list of dB values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("expected start:step:stop")
        start, step, stop = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError("need step > 0 and stop >= start")
        grid = []
        value = start
        while value <= stop + 1e-9:
            grid.append(round(value, 9))
            value += step
        return grid
    return [float(p) for p in text.split(",")]


def _load_params(args) -> sysmodel.SystemParams:
    if args.config:
        params = sysmodel.load_config(args.config)
    elif args.preset == "paper":
        params = sysmodel.paper_preset()
    else:
        params = sysmodel.desk_preset()
    return params


def _cmd_simulate(args) -> int:
    params = _load_params(args)
    detectors = [parse_detector(d) for d in args.detectors.split(",") if d]
    if not detectors:
        raise sysmodel.ConfigError("no detectors selected")
    ebn0_grid = _parse_grid(args.ebn0)
    users = [int(u) for u in args.users.split(",")] if args.users \
        else [params.n_users]
    seed = args.seed if args.seed is not None else params.seed
    stop = simkit.StopRule(min_bit_errors=args.stop_bit_errors,
                           min_frame_errors=args.stop_frame_errors,
                           max_frames=args.max_frames)
    records = simkit.sweep(params, detectors, ebn0_grid, users, stop,
                           seed=seed, workers=args.workers)
    simkit.write_csv(records, args.out, append=args.append)
    for rec in records:
        print(f"{rec.detector} K={rec.n_users} Eb/N0={rec.ebn0_db:g} dB: "
              f"BER={rec.ber:.3e} FER={rec.fer:.3e} "
              f"({rec.bit_errors}/{rec.bits} bits, {rec.frames} frames)")
    return 0


def _cmd_extract(args) -> int:
    records = simkit.read_csv(args.input)
    if args.target_fer is not None:
        target, metric = args.target_fer, "fer"
    else:
        target, metric = args.target_ber, "ber"
    rows = simkit.extract_required(records, target, metric)
    simkit.write_extraction_csv(rows, args.out)
    for row in rows:
        val = row["required_ebn0_db"]
        shown = f"{val:.3f} dB" if row["reached"] else "not reached"
        print(f"{row['detector']} K={row['K']}: {metric.upper()} "
              f"{target:g} at {shown}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mccdma",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a BER/FER sweep")
    sim.add_argument("--config", help="flat key=value configuration file")
    sim.add_argument("--preset", choices=("desk", "paper"), default="desk",
                     help="built-in parameter set when no --config is given")
    sim.add_argument("--detectors", required=True,
                     help="comma list, e.g. mmsec,gmmse,pic:stages=2")
    sim.add_argument("--ebn0", required=True,
                     help="Eb/N0 grid in dB: start:step:stop or comma list")
    sim.add_argument("--users", help="comma list of active-code counts")
    sim.add_argument("--out", required=True, help="results CSV path")
    sim.add_argument("--seed", type=int, help="master seed (default: config)")
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--append", action="store_true",
                     help="append to an existing CSV without a new header")
    sim.add_argument("--stop-bit-errors", type=int, default=200)
    sim.add_argument("--stop-frame-errors", type=int, default=50)
    sim.add_argument("--max-frames", type=int, default=20000)
    sim.set_defaults(func=_cmd_simulate)

    ext = sub.add_parser("extract", help="required Eb/N0 at a target rate")
    ext.add_argument("--in", dest="input", required=True, help="results CSV")
    ext.add_argument("--target-ber", type=float, default=1e-4)
    ext.add_argument("--target-fer", type=float,
                     help="extract at a FER target instead of BER")
    ext.add_argument("--out", required=True, help="extraction CSV path")
    ext.set_defaults(func=_cmd_extract)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (sysmodel.ConfigError, ValueError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
