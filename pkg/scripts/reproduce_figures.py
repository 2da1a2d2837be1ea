"""
This script runs the six purity sweeps through the library and renders them as
static PNGs: surfaces over (eta, theta) for coherent states, |0, 1> and |1, 1>,
and the matching curves at theta = pi/2. The sweep tables are written next to
the images as CSV.
"""

import logging
import math
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from oscillator_purity.config import RunConfig, workers_from_env  # noqa: E402
from oscillator_purity.model import QuantumNumbers  # noqa: E402
from oscillator_purity.sweep import (  # noqa: E402
    AxisRange,
    SweepRequest,
    run_sweep,
    write_table,
)

OUT_DIR = Path("./data/figures/")
ETA_RANGE = AxisRange(-4.0, 4.0, 81)
# Kept off 0 and pi, where the number-state formulas divide by sin(theta)
THETA_RANGE = AxisRange(0.02, math.pi - 0.02, 61)
HALF_ANGLE = AxisRange(math.pi / 2, math.pi / 2, 1)
STATES = {
    "coherent": None,
    "p01": QuantumNumbers(0, 1),
    "p11": QuantumNumbers(1, 1),
}


def plot_surface(table, title, path):
    grid = table.pivot(index="theta", columns="eta", values="purity")
    fig = plt.figure(figsize=(6, 4.5))
    ax = fig.add_subplot(projection="3d")
    eta, theta = grid.columns.to_numpy(), grid.index.to_numpy()
    X, Y = np.meshgrid(eta, theta)
    ax.plot_surface(X, Y, grid.to_numpy(), cmap="viridis", linewidth=0)
    ax.set(xlabel="eta", ylabel="theta", zlabel="purity", title=title)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_curve(table, title, path):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(table["eta"], table["purity"])
    ax.set(xlabel="eta", ylabel="purity", ylim=(0, 1.05), title=title)
    ax.grid(alpha=0.3)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


if __name__ == "__main__":
    logging.basicConfig(
        level=logging.INFO, format="%(levelname)s %(name)s: %(message)s"
    )
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    config = RunConfig(workers=workers_from_env())

    for name, n in STATES.items():
        surface = SweepRequest(ETA_RANGE, THETA_RANGE, n=n)
        curve = SweepRequest(ETA_RANGE, HALF_ANGLE, n=n)
        for request, plot, kind in (
            (surface, plot_surface, "surface"),
            (curve, plot_curve, "half_angle"),
        ):
            table = run_sweep(request, config)
            write_table(table, OUT_DIR / request.default_output_name())
            title = f"{name} ({kind.replace('_', ' ')})"
            plot(table, title, OUT_DIR / f"{name}_{kind}.png")
