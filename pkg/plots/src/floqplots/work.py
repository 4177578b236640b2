"""Work-transfer panel: W1(t), W2(t) with fitted-slope annotations."""

import sys

import matplotlib.pyplot as plt
import numpy as np

from .common import base_parser, load_csv, ols_slope, run


def render(argv=None):
    parser = base_parser("Plot the work done by each drive against time.")
    parser.add_argument(
        "--window", type=float, default=0.1,
        help="fraction of the run discarded before the annotation fit",
    )
    parser.add_argument("--omega1", type=float, default=None)
    parser.add_argument("--omega2", type=float, default=None)
    args = parser.parse_args(argv)

    frame = load_csv(args.infile, ["t", "W1", "W2"])
    t = frame["t"].to_numpy()
    sel = t >= args.window * t[-1]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    labels = []
    for col, color in (("W1", "tab:blue"), ("W2", "tab:red")):
        w = frame[col].to_numpy()
        rate = ols_slope(t[sel], w[sel])
        if args.omega1 and args.omega2:
            slope = 2 * np.pi * rate / (args.omega1 * args.omega2)
            labels.append(f"{col}: slope {slope:+.2f}")
        else:
            labels.append(f"{col}: rate {rate:+.3g}")
        ax.plot(t, w, color=color, lw=1.0, label=labels[-1])
    ax.set_xlabel("t (us)")
    ax.set_ylabel("accumulated work (rad/us)")
    ax.legend(frameon=False)
    ax.set_title("energy transfer between drives")
    fig.tight_layout()
    fig.savefig(args.outfile, dpi=150)
    plt.close(fig)


def main(argv=None):
    raise SystemExit(run(render, argv))


if __name__ == "__main__":
    sys.exit(run(render))
