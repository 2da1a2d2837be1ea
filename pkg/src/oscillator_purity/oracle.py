"""
Brute-force purity on a position grid.

The reduced density rho(X1, X1') = int psi(X1, X2) psi(X1', X2) dX2 is
assembled with composite Simpson weights and Tr(rho**2) is taken directly.
Nothing here uses the kernel parameters or the closed forms; only the
wavefunction evaluators are shared with the analytic routes.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate

from oscillator_purity.config import (
    DENSITY_ASYMMETRY_RATIO,
    GRID_BOUNDARY_RATIO,
    GRID_HALF_WIDTH_SIGMAS,
    GRID_POINTS,
    HBAR,
    MIN_GRID_POINTS,
    MIN_HALF_WIDTH_SIGMAS,
    TOL_NOT_CONVERGED,
)
from oscillator_purity.errors import GridTooNarrow, NotConverged
from oscillator_purity.model import CanonicalParams, QuantumNumbers, from_synthetic
from oscillator_purity.purity import PurityResult, Route
from oscillator_purity.states import (
    CoherentLabel,
    Evaluator,
    coherent_state,
    number_state,
    widths,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSpec:
    """A uniform grid shared by both particle axes.

    The extent is ``half_width_sigmas * sigma`` on each side of ``centering``.
    The node count is rounded up to an odd number so that composite Simpson
    weights apply.
    """

    n_points: int = GRID_POINTS
    half_width_sigmas: float = GRID_HALF_WIDTH_SIGMAS
    sigma: float = 1.0
    centering: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.n_points < MIN_GRID_POINTS:
            raise ValueError(
                f"n_points must be at least {MIN_GRID_POINTS}, got {self.n_points}"
            )
        if self.half_width_sigmas < MIN_HALF_WIDTH_SIGMAS:
            raise GridTooNarrow(
                f"half_width_sigmas must be at least {MIN_HALF_WIDTH_SIGMAS}, got "
                f"{self.half_width_sigmas}"
            )
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.n_points % 2 == 0:
            object.__setattr__(self, "n_points", self.n_points + 1)

    @property
    def half_width(self) -> float:
        return self.half_width_sigmas * self.sigma

    @property
    def step(self) -> float:
        return 2 * self.half_width / (self.n_points - 1)

    def nodes(self, axis: int) -> np.ndarray:
        center = self.centering[axis]
        return np.linspace(
            center - self.half_width, center + self.half_width, self.n_points
        )

    @property
    def weights(self) -> np.ndarray:
        """Simpson weights, obtained by applying the rule to each unit vector."""
        return integrate.simpson(np.eye(self.n_points), dx=self.step, axis=1)

    def refined(self) -> GridSpec:
        """The same extent with the step halved."""
        return replace(self, n_points=2 * (self.n_points - 1) + 1)

    @staticmethod
    def for_state(
        p: CanonicalParams,
        n: QuantumNumbers | None = None,
        label: CoherentLabel | None = None,
        hbar: float = HBAR,
        n_points: int = GRID_POINTS,
        half_width_sigmas: float = GRID_HALF_WIDTH_SIGMAS,
    ) -> GridSpec:
        """Size a grid for a state.

        The base width is the widest marginal spread 1 / (lambda_min *
        min(mu, 1/mu)). Excited states widen it by sqrt(1 + 2 max(n1, n2)) and
        displaced states add sqrt(2)(|alpha| + |beta|) widths to the extent.
        """
        w = widths(p, hbar)
        sigma = 1 / (min(w.lambda1, w.lambda2) * min(p.mu, 1 / p.mu))
        if n is not None:
            sigma *= math.sqrt(1 + 2 * max(n.n1, n.n2))
        if label is not None:
            shift = math.sqrt(2) * (abs(label.alpha) + abs(label.beta))
            half_width_sigmas += shift
        return GridSpec(
            n_points=n_points, half_width_sigmas=half_width_sigmas, sigma=sigma
        )


@dataclass(frozen=True)
class ReducedDensity:
    """Samples of rho(X1, X1') with the quadrature weights of the grid."""

    matrix: np.ndarray
    weights: np.ndarray
    step: float
    asymmetry: float = 0.0

    @property
    def norm(self) -> float:
        """Tr(rho) by quadrature."""
        return float(self.weights @ np.diag(self.matrix))


def _check_boundary(density: np.ndarray) -> None:
    peak = density.max()
    edge = max(
        density[0, :].max(),
        density[-1, :].max(),
        density[:, 0].max(),
        density[:, -1].max(),
    )
    if edge > GRID_BOUNDARY_RATIO * peak:
        raise GridTooNarrow(
            f"Boundary density is {edge / peak:.3g} of the peak (limit "
            f"{GRID_BOUNDARY_RATIO:g}); widen the grid"
        )


def symmetrize(matrix: np.ndarray) -> tuple[np.ndarray, float]:
    """Average a sampled density with its transpose.

    Returns the symmetric part and max |rho - rho^T| / max |rho|. A real
    wavefunction gives a symmetric density up to rounding, so anything above
    DENSITY_ASYMMETRY_RATIO raises NotConverged.
    """
    scale = float(np.abs(matrix).max())
    asymmetry = float(np.abs(matrix - matrix.T).max()) / scale if scale > 0 else 0.0
    if asymmetry > DENSITY_ASYMMETRY_RATIO:
        raise NotConverged(
            f"The sampled reduced density is not symmetric: relative asymmetry "
            f"{asymmetry:.3g} exceeds {DENSITY_ASYMMETRY_RATIO:g}"
        )
    return (matrix + matrix.T) / 2, asymmetry


def reduce(evaluator: Evaluator, grid: GridSpec, keep: int = 1) -> ReducedDensity:
    """Trace out one particle of a real two-particle wavefunction.

    Parameters
    ----------
    evaluator : callable
        Maps broadcast coordinate arrays (X1, X2) to wavefunction values.
    grid : GridSpec
        The quadrature grid.
    keep : int
        The particle whose reduced density is returned, 1 or 2.

    Returns
    -------
    ReducedDensity
        The reduced density matrix of the kept particle.
    """
    if keep not in (1, 2):
        raise ValueError(f"keep must be 1 or 2, got {keep}")
    X1, X2 = np.meshgrid(grid.nodes(0), grid.nodes(1), indexing="ij")
    psi = np.asarray(evaluator(X1, X2))
    if np.iscomplexobj(psi):
        raise ValueError(
            "The oracle handles real wavefunctions only; use real displacements"
        )
    _check_boundary(psi**2)

    if keep == 2:
        psi = psi.T
    weights = grid.weights
    matrix, asymmetry = symmetrize((psi * weights) @ psi.T)
    logger.debug(
        "Reduced onto particle %d on %d points, step %.3g, asymmetry %.2g",
        keep,
        grid.n_points,
        grid.step,
        asymmetry,
    )
    return ReducedDensity(
        matrix=matrix, weights=weights, step=grid.step, asymmetry=asymmetry
    )


def purity_numeric(rd: ReducedDensity) -> PurityResult:
    """Tr(rho**2) by quadrature.

    The error estimate is the deviation of the quadrature trace from 1.
    """
    w = rd.weights
    value = float(w @ (rd.matrix * rd.matrix.T) @ w)
    return PurityResult(value, Route.ORACLE, error_estimate=abs(rd.norm - 1))


def purity_numeric_refined(
    evaluator: Evaluator,
    grid: GridSpec,
    keep: int = 1,
    tolerance: float = TOL_NOT_CONVERGED,
) -> PurityResult:
    """Compare the purity on ``grid`` and on the grid with half the step.

    Returns the finer value with the difference as its error estimate.
    """
    coarse = purity_numeric(reduce(evaluator, grid, keep))
    fine = purity_numeric(reduce(evaluator, grid.refined(), keep))
    difference = abs(fine.value - coarse.value)
    if difference > tolerance:
        raise NotConverged(
            f"Grid refinement changed the purity by {difference:.3g}, more than "
            f"{tolerance:g}"
        )
    return replace(fine, error_estimate=difference)


def oracle_purity(
    eta: float,
    theta: float,
    n: QuantumNumbers | None = None,
    label: CoherentLabel | None = None,
    *,
    mk_over_hbar2: float = 1.0,
    grid_points: int | None = None,
    half_width_sigmas: float | None = None,
    keep: int = 1,
    params: CanonicalParams | None = None,
    hbar: float = HBAR,
) -> PurityResult:
    """Oracle purity of a number state ``n`` or, if ``n`` is None, of the
    coherent state ``label``.

    Without ``params`` the system is built from (eta, theta) with
    mk/hbar**2 = ``mk_over_hbar2``.
    """
    if params is None:
        params = from_synthetic(
            eta, theta, m=1.0, k=mk_over_hbar2 * hbar**2, division_safe=False
        )
    if n is None:
        label = label if label is not None else CoherentLabel()
        if not label.is_real:
            raise ValueError(
                "The oracle handles real wavefunctions only; use real displacements"
            )
        evaluator = coherent_state(params, label, hbar)
    else:
        label = None
        evaluator = number_state(params, n, hbar)

    grid = GridSpec.for_state(
        params,
        n=n,
        label=label,
        hbar=hbar,
        n_points=grid_points or GRID_POINTS,
        half_width_sigmas=half_width_sigmas or GRID_HALF_WIDTH_SIGMAS,
    )
    result = purity_numeric_refined(evaluator, grid, keep)
    return replace(
        result,
        eta=params.eta,
        theta=params.theta,
        n1=None if n is None else n.n1,
        n2=None if n is None else n.n2,
    )
