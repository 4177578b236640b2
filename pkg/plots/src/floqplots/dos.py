"""Stacked density-of-states panels with the laser-detuning marker."""

import sys

import matplotlib.pyplot as plt

from .common import base_parser, load_csv, run

MARKER_ENERGY = 3.0  # units of Omega_R; the laser is parked 3 Omega_R below center


def render(argv=None):
    parser = base_parser("Plot stacked DoS panels from a dos CSV.")
    args = parser.parse_args(argv)

    frame = load_csv(args.infile, ["M", "e_lo", "e_hi", "density"])
    masses = sorted(frame["M"].unique())
    fig, axes = plt.subplots(
        len(masses), 1, figsize=(6, 1.6 * len(masses) + 1), sharex=True, squeeze=False
    )
    for ax, m in zip(axes[:, 0], masses):
        block = frame[frame["M"] == m]
        centers = 0.5 * (block["e_lo"].to_numpy() + block["e_hi"].to_numpy())
        ax.fill_between(centers, block["density"].to_numpy(), step="mid", alpha=0.7)
        for sign in (+1, -1):
            ax.axvline(sign * MARKER_ENERGY, color="tab:red", ls=":", lw=1.0)
        ax.set_ylabel(f"M = {m:g}")
    axes[-1, 0].set_xlabel("E / Omega_R")
    axes[0, 0].set_title("density of states; dotted line at 3 Omega_R")
    fig.tight_layout()
    fig.savefig(args.outfile, dpi=150)
    plt.close(fig)


def main(argv=None):
    raise SystemExit(run(render, argv))


if __name__ == "__main__":
    sys.exit(run(render))
