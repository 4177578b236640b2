"""Bloch-sphere scatter view of a trajectory CSV."""

import sys

import matplotlib.pyplot as plt
import numpy as np

from .common import base_parser, load_csv, run


def render(argv=None):
    parser = base_parser("Scatter the Bloch-vector samples of a trajectory.")
    parser.add_argument("--max-points", type=int, default=20000)
    args = parser.parse_args(argv)

    frame = load_csv(args.infile, ["bx", "by", "bz"])
    stride = max(1, len(frame) // args.max_points)
    bx = frame["bx"].to_numpy()[::stride]
    by = frame["by"].to_numpy()[::stride]
    bz = frame["bz"].to_numpy()[::stride]

    fig = plt.figure(figsize=(5.5, 5.5))
    ax = fig.add_subplot(projection="3d")
    u, v = np.meshgrid(np.linspace(0, 2 * np.pi, 40), np.linspace(0, np.pi, 20))
    ax.plot_wireframe(
        np.cos(u) * np.sin(v), np.sin(u) * np.sin(v), np.cos(v),
        color="0.85", lw=0.3,
    )
    ax.scatter(bx, by, bz, s=1.2, c=np.arange(len(bx)), cmap="viridis", alpha=0.7)
    ax.set_xlabel("<sx>")
    ax.set_ylabel("<sy>")
    ax.set_zlabel("<sz>")
    ax.set_box_aspect((1, 1, 1))
    fig.tight_layout()
    fig.savefig(args.outfile, dpi=150)
    plt.close(fig)


def main(argv=None):
    raise SystemExit(run(render, argv))


if __name__ == "__main__":
    sys.exit(run(render))
