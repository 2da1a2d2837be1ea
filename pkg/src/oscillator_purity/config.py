from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from oscillator_purity.errors import ConfigError

# Physical defaults. Purities are dimensionless and must not depend on these.
HBAR = 1.0
MASS = 1.0
STIFFNESS = 1.0

# Largest n1 + n2 accepted by the number-state routes unless overridden. The
# coefficient enumeration grows roughly tenfold per extra excitation.
DEFAULT_CAP = 4

# The single point where the generating-function normalization is fixed.
GF_REFERENCE_POINT = (0.5, math.pi / 2)

# Tolerances used by the validation suite
TOL_ANALYTIC = 1e-10
TOL_GF = 1e-9
TOL_ORACLE = 1e-5
TOL_NOT_CONVERGED = 1e-4

# Quadrature grid policy for the numerical oracle
GRID_POINTS = 400
GRID_HALF_WIDTH_SIGMAS = 8.0
MIN_GRID_POINTS = 64
MIN_HALF_WIDTH_SIGMAS = 6.0
# Boundary density above this fraction of the peak means the grid is too narrow
GRID_BOUNDARY_RATIO = 1e-10
# Largest |rho - rho^T| relative to max |rho| before symmetrization
DENSITY_ASYMMETRY_RATIO = 1e-12

# Sweep table layout. The header is part of the output contract.
SWEEP_COLUMNS = (
    "eta",
    "theta",
    "route",
    "n1",
    "n2",
    "purity",
    "linear_entropy",
    "error_estimate",
)
FLOAT_FORMAT = "%.17g"

# The only environment variable consulted: parallel width for sweeps
WORKERS_ENV = "OSCILLATOR_PURITY_WORKERS"


def workers_from_env() -> int | None:
    """Read the sweep parallelism override, if set."""
    value = os.environ.get(WORKERS_ENV)
    if value is None or value == "":
        return None
    try:
        workers = int(value)
    except ValueError as e:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {value!r}") from e
    if workers < 1:
        raise ConfigError(f"{WORKERS_ENV} must be positive, got {workers}")
    return workers


@dataclass(frozen=True)
class RunConfig:
    """Run-wide settings shared by the command-line subcommands.

    Values come from the defaults above, then an optional flat JSON file, then
    command-line flags, with later sources winning.
    """

    hbar: float = HBAR
    m: float = MASS
    k: float = STIFFNESS
    grid_points: int = GRID_POINTS
    half_width_sigmas: float = GRID_HALF_WIDTH_SIGMAS
    tolerance_analytic: float = TOL_ANALYTIC
    tolerance_gf: float = TOL_GF
    tolerance_oracle: float = TOL_ORACLE
    cap: int = DEFAULT_CAP
    workers: int | None = None

    def __post_init__(self):
        for name in ("hbar", "m", "k", "half_width_sigmas"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("tolerance_analytic", "tolerance_gf", "tolerance_oracle"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.grid_points < MIN_GRID_POINTS:
            raise ConfigError(
                f"grid_points must be at least {MIN_GRID_POINTS}, "
                f"got {self.grid_points}"
            )
        if self.cap < 0:
            raise ConfigError(f"cap must be non-negative, got {self.cap}")
        if self.workers is not None and self.workers < 1:
            raise ConfigError(f"workers must be positive, got {self.workers}")

    @property
    def mk_over_hbar2(self) -> float:
        return self.m * self.k / self.hbar**2

    def updated(self, **overrides) -> RunConfig:
        """Return a copy with every non-None override applied."""
        overrides = {k: v for k, v in overrides.items() if v is not None}
        unknown = set(overrides) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError(f"Unknown config keys: {sorted(unknown)}")
        return replace(self, **overrides)

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_file(path: str | Path) -> RunConfig:
        """Load a RunConfig from a flat JSON object of overrides."""
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"{path} does not exist")
        with open(path) as f:
            try:
                values = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"{path} is not valid JSON: {e}") from e

        if not isinstance(values, dict):
            raise ConfigError(f"{path} must contain a flat JSON object")
        nested = [k for k, v in values.items() if isinstance(v, (dict, list))]
        if nested:
            raise ConfigError(f"{path} must be flat, found nested keys {nested}")

        return RunConfig().updated(**values)
