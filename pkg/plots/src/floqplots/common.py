"""Shared CSV loading and CLI plumbing for the plot scripts."""

import argparse
import sys

import matplotlib

matplotlib.use("Agg")

import pandas as pd


class PlotInputError(Exception):
    """Bad or incomplete input data."""


def load_csv(path, required):
    """Load one of the simulator's CSV files, skipping echo comments.

    Raises PlotInputError naming any missing column or an empty table.
    """
    try:
        frame = pd.read_csv(path, comment="#")
    except FileNotFoundError:
        raise PlotInputError(f"input file not found: {path}") from None
    except Exception as exc:
        raise PlotInputError(f"cannot parse {path}: {exc}") from None
    missing = [col for col in required if col not in frame.columns]
    if missing:
        raise PlotInputError(f"{path}: missing columns {', '.join(missing)}")
    if len(frame) == 0:
        raise PlotInputError(f"{path}: no data rows")
    return frame


def base_parser(description):
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("--in", dest="infile", required=True, help="input CSV")
    parser.add_argument("--out", dest="outfile", required=True, help="output image")
    return parser


def run(render, argv=None):
    """Execute a render(argv) body with the shared exit-code conventions."""
    try:
        render(argv)
        return 0
    except PlotInputError as exc:
        print(f"floqplot: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    except OSError as exc:
        print(f"floqplot: {exc}", file=sys.stderr)
        return 1


def ols_slope(t, y):
    """Display-level least-squares slope for annotations."""
    tbar = t.mean()
    dt = t - tbar
    denom = (dt * dt).sum()
    if denom == 0:
        return 0.0
    return float((dt * (y - y.mean())).sum() / denom)
