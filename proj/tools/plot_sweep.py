#!/usr/bin/env python3
"""Render a holq sweep CSV as a heatmap.

Usage: tools/plot_sweep.py fig2.csv [out.png]

The CSV layout is the one `holq sweep` emits: a header naming the two axes
and the value column, then row-major rows over axis1 then axis2.
"""

import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    path = sys.argv[1]
    out = sys.argv[2] if len(sys.argv) > 2 else path.rsplit(".", 1)[0] + ".png"

    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [(float(a), float(b), float(v)) for a, b, v in reader]

    ax1 = sorted({r[0] for r in rows})
    ax2 = sorted({r[1] for r in rows})
    grid = np.full((len(ax1), len(ax2)), np.nan)
    index1 = {v: i for i, v in enumerate(ax1)}
    index2 = {v: i for i, v in enumerate(ax2)}
    for a, b, v in rows:
        grid[index1[a], index2[b]] = v

    fig, ax = plt.subplots(figsize=(6, 4.5))
    mesh = ax.pcolormesh(ax2, ax1, grid, shading="nearest", vmin=grid.min(), vmax=1.0)
    ax.set_xlabel(header[1])
    ax.set_ylabel(header[0])
    fig.colorbar(mesh, ax=ax, label=header[2])
    fig.tight_layout()
    fig.savefig(out, dpi=160)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
