"""Two-panel (M, phi) slope heatmaps with the analytic boundary overlay."""

import sys

import matplotlib.pyplot as plt
import numpy as np

from .common import PlotInputError, base_parser, load_csv, run

BOUNDARY_SCALE = {"haldane": 3 * np.sqrt(3), "brickwall": 2 * np.sqrt(3)}


def boundary_curves(model, phis):
    """Critical-mass curves M = +/- scale * sin(phi) drawn over heatmaps."""
    scale = BOUNDARY_SCALE[model]
    return scale * np.sin(phis), -scale * np.sin(phis)


def render(argv=None):
    parser = base_parser("Plot slope1/slope2 heatmaps from a sweep CSV.")
    parser.add_argument(
        "--model", choices=sorted(BOUNDARY_SCALE), default="haldane",
        help="which analytic boundary to overlay",
    )
    parser.add_argument(
        "--no-boundary", action="store_true",
        help="skip the overlay (commensurate control grids)",
    )
    parser.add_argument("--clip", type=float, default=None, help="color range |v| <= clip")
    args = parser.parse_args(argv)

    frame = load_csv(args.infile, ["M", "phi", "slope1", "slope2"])
    ms = np.sort(frame["M"].unique())
    phis = np.sort(frame["phi"].unique())
    if len(ms) < 2 or len(phis) < 2:
        raise PlotInputError(f"{args.infile}: need a 2D grid of (M, phi) cells")

    grids = []
    for col in ("slope1", "slope2"):
        pivot = frame.pivot_table(index="M", columns="phi", values=col)
        pivot = pivot.reindex(index=ms, columns=phis)
        grids.append(pivot.to_numpy())

    vmax = args.clip or np.nanmax(np.abs(np.concatenate(grids)))
    fig, axes = plt.subplots(1, 2, figsize=(11, 4.2), sharey=True)
    for ax, grid, name in zip(axes, grids, ("drive 1", "drive 2")):
        mesh = ax.pcolormesh(
            phis, ms, grid, cmap="RdBu_r", vmin=-vmax, vmax=vmax, shading="nearest"
        )
        if not args.no_boundary:
            phi_line = np.linspace(phis.min(), phis.max(), 400)
            for curve in boundary_curves(args.model, phi_line):
                ax.plot(phi_line, curve, "k--", lw=1.0)
            ax.set_ylim(ms.min(), ms.max())
        ax.set_xlabel("flux phi (rad)")
        ax.set_title(f"normalized pumping rate, {name}")
    axes[0].set_ylabel("M")
    fig.colorbar(mesh, ax=axes, shrink=0.9)
    fig.savefig(args.outfile, dpi=150)
    plt.close(fig)


def main(argv=None):
    raise SystemExit(run(render, argv))


if __name__ == "__main__":
    sys.exit(run(render))
