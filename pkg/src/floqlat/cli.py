"""Command-line interface: evolve, sweep, dos, chern, signals, version."""

import argparse
import os
import sys
import time

import numpy as np

from . import __version__
from .config import default_config, load_config
from .dynamics import default_horizon, evolve_conservative, evolve_driven_dissipative
from .errors import FloqlatError
from .lattice import HaldaneParams, ModelKind, bloch_map, chern_number, geometry
from .observables import density_of_states, pumping_slope, work_done
from .output import (
    export_waveforms,
    write_chern_csv,
    write_dos_csv,
    write_manifest,
    write_sweep_csv,
    write_trajectory_csv,
)
from .sweep import sweep as run_sweep

SUBCOMMANDS = ("evolve", "sweep", "dos", "chern", "signals", "version")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="floqlat",
        description="Simulate quantized energy pumping in Floquet-encoded "
        "honeycomb-class lattice models.",
    )
    sub = parser.add_subparsers(dest="command")

    p_evolve = sub.add_parser("evolve", help="run one time evolution")
    p_evolve.add_argument("--config", help="key = value config file")
    p_evolve.add_argument("--out", help="trajectory CSV path")

    p_sweep = sub.add_parser("sweep", help="run an (M, phi) phase-diagram grid")
    p_sweep.add_argument("--config", help="key = value config file")
    p_sweep.add_argument("--out", help="sweep CSV path")

    p_dos = sub.add_parser("dos", help="density of states of the drive map")
    p_dos.add_argument("--config", help="key = value config file")
    p_dos.add_argument("--M", default="1,2,3,4,5,6", help="comma-separated masses")
    p_dos.add_argument("--grid", type=int, default=120)
    p_dos.add_argument("--bins", type=int, default=120)
    p_dos.add_argument("--out", help="DoS CSV path")

    p_chern = sub.add_parser("chern", help="Chern number of the lattice model")
    p_chern.add_argument("--kind", default="haldane")
    p_chern.add_argument("--M", type=float, required=True)
    p_chern.add_argument("--phi", type=float, required=True)
    p_chern.add_argument("--grid", type=int, default=64)
    p_chern.add_argument("--t1", type=float, default=1.0)
    p_chern.add_argument("--t2", type=float, default=1.0)
    p_chern.add_argument("--out", help="CSV path")

    p_sig = sub.add_parser("signals", help="export AWG modulation waveforms")
    p_sig.add_argument("--config", help="key = value config file")
    p_sig.add_argument("--rate", type=float, default=64.0, help="samples per us")
    p_sig.add_argument("--T", type=float, default=10.0, help="duration (us)")
    p_sig.add_argument("--out", help="waveform CSV path")

    sub.add_parser("version", help="print the tool version")
    return parser


def _load(args):
    return load_config(args.config) if args.config else default_config()


def _out_path(cfg, args, default_name):
    if args.out:
        return args.out
    os.makedirs(cfg.output_dir, exist_ok=True)
    return os.path.join(cfg.output_dir, default_name)


def _cmd_evolve(args):
    cfg = _load(args)
    t0 = time.time()
    if cfg.diss_enabled:
        horizon = cfg.evolve_T or default_horizon(cfg.drive, cfg.diss)
        traj = evolve_driven_dissipative(
            cfg.kind, cfg.drive, cfg.phi, cfg.diss, horizon, cfg.dt, cfg.decimate,
            track_harmonics=cfg.harmonics,
        )
    else:
        horizon = cfg.evolve_T or default_horizon(cfg.drive)
        traj = evolve_conservative(
            cfg.kind, cfg.drive, cfg.phi, horizon, cfg.dt, cfg.decimate,
            track_harmonics=cfg.harmonics,
        )
    fit = pumping_slope(work_done(traj, cfg.kind, cfg.drive, cfg.phi), cfg.drive)
    path = _out_path(cfg, args, "trajectory.csv")
    write_trajectory_csv(path, traj, cfg.echo())
    write_manifest(
        path + ".manifest.json",
        cfg.echo(),
        time.time() - t0,
        extra={
            "slope1": fit.slope1,
            "slope2": fit.slope2,
            "r2_1": fit.r2_1,
            "r2_2": fit.r2_2,
            "adiabaticity_warning": cfg.drive.adiabaticity_warning,
        },
    )
    print(
        f"evolve: wrote {path} (slope1={fit.slope1:+.4f}, slope2={fit.slope2:+.4f})"
    )
    return 0


def _cmd_sweep(args):
    cfg = _load(args)
    t0 = time.time()
    result = run_sweep(cfg.sweep)
    path = _out_path(cfg, args, "sweep.csv")
    write_sweep_csv(path, result, cfg.echo())
    write_manifest(path + ".manifest.json", cfg.echo(), time.time() - t0)
    n_ok = int(np.sum(result.status == "ok"))
    print(f"sweep: wrote {path} ({n_ok}/{result.status.size} cells ok)")
    return 0


def _cmd_dos(args):
    cfg = _load(args)
    t0 = time.time()
    masses = [float(tok) for tok in args.M.split(",") if tok.strip()]
    hists = [
        density_of_states(cfg.kind, cfg.drive, cfg.phi, m, args.grid, args.bins)
        for m in masses
    ]
    path = _out_path(cfg, args, "dos.csv")
    write_dos_csv(path, hists, cfg.echo())
    write_manifest(path + ".manifest.json", cfg.echo(), time.time() - t0)
    print(f"dos: wrote {path} ({len(masses)} masses, grid {args.grid})")
    return 0


def _cmd_chern(args):
    t0 = time.time()
    kind = ModelKind.parse(args.kind)
    params = HaldaneParams(m=args.M, phi=args.phi, t1=args.t1, t2=args.t2)
    c = chern_number(bloch_map(kind, params), geometry(kind), args.grid)
    print(c)
    if args.out:
        echo = {
            "kind": kind.value,
            "M": args.M,
            "phi": args.phi,
            "t1": args.t1,
            "t2": args.t2,
            "grid_n": args.grid,
        }
        write_chern_csv(args.out, kind, args.M, args.phi, args.grid, c, echo)
        write_manifest(args.out + ".manifest.json", echo, time.time() - t0)
    return 0


def _cmd_signals(args):
    cfg = _load(args)
    t0 = time.time()
    path = _out_path(cfg, args, "signals.csv")
    export_waveforms(cfg.kind, cfg.drive, cfg.phi, args.rate, args.T, path, cfg.echo())
    write_manifest(path + ".manifest.json", cfg.echo(), time.time() - t0)
    print(f"signals: wrote {path} at {args.rate} samples per us")
    return 0


def run_cli(argv=None):
    """Dispatch a subcommand; returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    if not argv or argv[0] in ("-h", "--help"):
        parser.print_help()
        return 0 if argv else 2
    if argv[0] not in SUBCOMMANDS:
        parser.print_usage(sys.stderr)
        print(f"floqlat: unknown subcommand {argv[0]!r}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "version":
        print(__version__)
        return 0
    handler = {
        "evolve": _cmd_evolve,
        "sweep": _cmd_sweep,
        "dos": _cmd_dos,
        "chern": _cmd_chern,
        "signals": _cmd_signals,
    }[args.command]
    try:
        return handler(args)
    except (FloqlatError, OSError) as exc:
        print(f"floqlat {args.command}: {exc}", file=sys.stderr)
        return 1


def main():
    raise SystemExit(run_cli())
