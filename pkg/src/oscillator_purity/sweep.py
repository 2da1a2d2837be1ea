"""
Purity sweeps over (eta, theta) grids.

Points are evaluated in parallel with dask and gathered back in request order,
so the written table is identical for identical requests.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import dask
import numpy as np
import pandas as pd

from oscillator_purity.config import FLOAT_FORMAT, SWEEP_COLUMNS, RunConfig
from oscillator_purity.errors import OscillatorPurityError
from oscillator_purity.model import QuantumNumbers
from oscillator_purity.purity import Route, purity
from oscillator_purity.states import CoherentLabel
from oscillator_purity.utils import float_to_str, linspace

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")


@dataclass(frozen=True)
class AxisRange:
    """An inclusive range sampled at ``steps`` evenly spaced points.

    A single fixed value is written with min == max and steps == 1.
    """

    min: float
    max: float
    steps: int

    def __post_init__(self):
        if self.steps == 1 and self.min == self.max:
            return
        if self.steps < 2:
            raise ValueError(f"steps must be at least 2, got {self.steps}")
        if not self.min < self.max:
            raise ValueError(f"min must be below max, got {self.min} >= {self.max}")

    @property
    def step(self) -> float:
        return 0.0 if self.steps == 1 else (self.max - self.min) / (self.steps - 1)

    def values(self) -> list[float]:
        return linspace(self.min, self.max, self.steps)


@dataclass(frozen=True)
class SweepRequest:
    """A grid of (eta, theta) points evaluated by one or more routes.

    ``n`` is the number state, or None for coherent states.
    """

    eta_range: AxisRange
    theta_range: AxisRange
    n: QuantumNumbers | None = None
    routes: tuple[Route, ...] = (Route.CLOSED_FORM,)
    output: Path | None = None
    format: str = "csv"
    label: CoherentLabel = field(default_factory=CoherentLabel)

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, got {self.format!r}")
        if not self.routes:
            raise ValueError("At least one route is required")
        object.__setattr__(self, "routes", tuple(Route(r) for r in self.routes))

    def __len__(self) -> int:
        return self.eta_range.steps * self.theta_range.steps * len(self.routes)

    def needs_open_interval(self, route: Route) -> bool:
        """Whether ``route`` divides by sin(theta) for this state."""
        coherent_closed = self.n is None and route in (Route.CLOSED_FORM, Route.ORACLE)
        return not coherent_closed

    def thetas(self, route: Route) -> list[float]:
        """Theta samples for a route, with endpoints at 0 or pi moved one step
        inward when the route needs sin(theta) != 0."""
        values = self.theta_range.values()
        step = self.theta_range.step
        if not self.needs_open_interval(route) or step == 0:
            return values
        return [
            v + step if v <= 0 else v - step if v >= math.pi else v for v in values
        ]

    def default_output_name(self) -> str:
        state = "coherent" if self.n is None else f"n{self.n.n1}{self.n.n2}"
        eta, theta = self.eta_range, self.theta_range
        return (
            f"sweep_{state}_eta{float_to_str(eta.min)}_{float_to_str(eta.max)}"
            f"_theta{float_to_str(theta.min)}_{float_to_str(theta.max)}.{self.format}"
        )


def _evaluate_point(
    eta: float, theta: float, route: Route, request: SweepRequest, config: RunConfig
) -> dict:
    row = {
        "eta": eta,
        "theta": theta,
        "route": route.value,
        "n1": None if request.n is None else request.n.n1,
        "n2": None if request.n is None else request.n.n2,
        "purity": np.nan,
        "linear_entropy": np.nan,
        "error_estimate": np.nan,
        "error": "",
    }
    try:
        result = purity(
            eta,
            theta,
            n=request.n,
            route=route,
            mk_over_hbar2=config.mk_over_hbar2,
            cap=config.cap,
            label=request.label,
            grid_points=config.grid_points,
        )
    except (OscillatorPurityError, ValueError) as e:
        logger.debug("Point eta=%g theta=%g route=%s failed: %s", eta, theta, route, e)
        row["error"] = f"{type(e).__name__}: {e}"
        return row
    row["purity"] = result.value
    row["linear_entropy"] = result.linear_entropy
    row["error_estimate"] = result.error_estimate
    return row


def run_sweep(request: SweepRequest, config: RunConfig | None = None) -> pd.DataFrame:
    """Evaluate every point of a sweep.

    Rows are ordered by route, then eta, then theta. Failed points keep their
    coordinates and carry the message in the ``error`` column.
    """
    config = config or RunConfig()
    tasks = [
        dask.delayed(_evaluate_point)(eta, theta, route, request, config)
        for route in request.routes
        for eta in request.eta_range.values()
        for theta in request.thetas(route)
    ]
    logger.info(
        "Sweeping %d points over routes %s",
        len(tasks),
        ", ".join(r.value for r in request.routes),
    )
    rows = dask.compute(*tasks, scheduler="threads", num_workers=config.workers)
    table = pd.DataFrame(list(rows), columns=[*SWEEP_COLUMNS, "error"])
    table["n1"] = table["n1"].astype("Int64")
    table["n2"] = table["n2"].astype("Int64")

    failed = int((table["error"] != "").sum())
    if failed:
        logger.warning("%d of %d sweep points failed", failed, len(table))
    return table


def _json_value(value):
    if value is None or value is pd.NA:
        return None
    if isinstance(value, (np.integer, int)) and not isinstance(value, bool):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return None if math.isnan(value) else float(value)
    return value


def write_table(table: pd.DataFrame, path: Path | None, fmt: str = "csv") -> str:
    """Serialize a sweep table and write it to ``path`` (or just return it).

    CSV uses 17 significant digits and LF line endings. The ``error`` column is
    written only when some point failed.
    """
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    if "error" in table and not (table["error"] != "").any():
        table = table.drop(columns="error")

    if fmt == "csv":
        text = table.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    else:
        records = [
            {key: _json_value(value) for key, value in record.items()}
            for record in table.to_dict(orient="records")
        ]
        text = json.dumps(records, indent=2) + "\n"

    if path is not None:
        Path(path).write_text(text, newline="\n")
        logger.info("Wrote %d rows to %s", len(table), path)
    return text
