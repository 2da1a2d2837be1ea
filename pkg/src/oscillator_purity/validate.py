"""
Cross-route validation: every analytic route against the others, the analytic
routes against the grid oracle, and the symmetries every purity must have.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable
from dataclasses import asdict, dataclass, field

from oscillator_purity.config import RunConfig
from oscillator_purity.errors import CapExceeded
from oscillator_purity.model import QuantumNumbers
from oscillator_purity.oracle import oracle_purity
from oscillator_purity.purity import (
    Route,
    purity,
    purity_coherent,
    purity_number_appendix,
    purity_number_gf,
    purity_p01,
    purity_p01_half_angle,
    purity_p11,
    purity_p11_half_angle,
)
from oscillator_purity.states import CoherentLabel
from oscillator_purity.utils import linspace

logger = logging.getLogger(__name__)

# Grids of the identity checks
CLOSED_FORM_GRID = (21, 19)
GF_GRID = (5, 5)
ORACLE_POINTS = ((0.5, math.pi / 3), (1.0, math.pi / 2), (2.0, 2 * math.pi / 5))
ORACLE_LABELS = (
    CoherentLabel(0.0, 0.0),
    CoherentLabel(0.9, -0.4),
    CoherentLabel(-0.5, 0.7),
)
SYMMETRY_POINTS = [
    (eta, theta)
    for eta in linspace(0.25, 2.0, 4)
    for theta in linspace(0.3, math.pi / 2, 4)
]
ORACLE_SYMMETRY_POINTS = ((0.6, 1.0), (1.2, 2 * math.pi / 5))
ORACLE_SYMMETRY_STATES = (QuantumNumbers(0, 1), QuantumNumbers(1, 1))


@dataclass
class IdentityCheck:
    """The worst deviation of one identity over all points it was tested at."""

    name: str
    tolerance: float
    max_error: float = 0.0
    worst_point: dict = field(default_factory=dict)
    points: int = 0

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance

    @property
    def severity(self) -> float:
        """max_error in units of the tolerance."""
        if self.tolerance > 0:
            return self.max_error / self.tolerance
        return math.inf if self.max_error > 0 else 0.0

    def record(self, error: float, **point) -> None:
        self.points += 1
        if math.isnan(error):
            error = math.inf
        if error > self.max_error or not self.worst_point:
            self.max_error = max(self.max_error, error)
            self.worst_point = point

    def to_dict(self) -> dict:
        report = asdict(self)
        report["passed"] = self.passed
        return report


@dataclass
class ValidationReport:
    identities: list[IdentityCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.identities)

    @property
    def worst(self) -> IdentityCheck:
        """The identity furthest outside (or closest to) its tolerance."""
        return max(self.identities, key=lambda c: c.severity)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "identities": [check.to_dict() for check in self.identities],
        }


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _grid(eta_steps: int, theta_steps: int) -> list[tuple[float, float]]:
    return [
        (eta, theta)
        for eta in linspace(-2.0, 2.0, eta_steps)
        for theta in linspace(0.1, math.pi - 0.1, theta_steps)
    ]


def _states(max_order: int) -> Iterable[QuantumNumbers]:
    for total in range(max_order + 1):
        for n1 in range(total + 1):
            yield QuantumNumbers(n1, total - n1)


def _compare(
    check: IdentityCheck,
    points: Iterable[tuple[float, float]],
    left: Callable[[float, float], float],
    right: Callable[[float, float], float],
    **labels,
) -> IdentityCheck:
    for eta, theta in points:
        check.record(
            _relative(left(eta, theta), right(eta, theta)),
            eta=eta,
            theta=theta,
            **labels,
        )
    return check


def check_closed_forms(config: RunConfig, u_scale: float = 1.0) -> list[IdentityCheck]:
    """Closed forms against the coefficient sum, and their pi/2 specialisations."""
    points = _grid(*CLOSED_FORM_GRID)
    tol = config.tolerance_analytic
    appendix = purity_number_appendix

    checks = [
        _compare(
            IdentityCheck("closed_vs_appendix_p00", tol),
            points,
            lambda e, t: purity_coherent(e, t).value,
            lambda e, t: appendix(0, 0, e, t, cap=config.cap, u_scale=u_scale).value,
        )
    ]
    for n1, n2, closed in ((0, 1, purity_p01), (1, 0, purity_p01), (1, 1, purity_p11)):
        checks.append(
            _compare(
                IdentityCheck(f"closed_vs_appendix_p{n1}{n2}", tol),
                points,
                lambda e, t, closed=closed: closed(e, t).value,
                lambda e, t, n1=n1, n2=n2: appendix(
                    n1, n2, e, t, cap=config.cap, u_scale=u_scale
                ).value,
                n1=n1,
                n2=n2,
            )
        )

    half_angle = IdentityCheck("closed_half_angle", tol)
    for eta in linspace(-4.0, 4.0, 41):
        half = math.pi / 2
        half_angle.record(
            _relative(purity_coherent(eta, half).value, 1 / math.cosh(eta)), eta=eta
        )
        half_angle.record(
            _relative(purity_p01(eta, half).value, purity_p01_half_angle(eta)), eta=eta
        )
        half_angle.record(
            _relative(purity_p11(eta, half).value, purity_p11_half_angle(eta)), eta=eta
        )
    checks.append(half_angle)
    return checks


def check_generating_function(
    config: RunConfig, max_order: int, u_scale: float = 1.0
) -> IdentityCheck:
    """Coefficient sum against the truncated exponential up to n1 + n2 = max_order."""
    check = IdentityCheck("appendix_vs_generating_function", config.tolerance_gf)
    points = [
        (eta, theta)
        for eta in linspace(-1.5, 1.5, GF_GRID[0])
        for theta in linspace(0.3, math.pi - 0.3, GF_GRID[1])
    ]
    for n in _states(max_order):
        _compare(
            check,
            points,
            lambda e, t, n=n: purity_number_appendix(
                n.n1, n.n2, e, t, cap=config.cap, u_scale=u_scale
            ).value,
            lambda e, t, n=n: purity_number_gf(n.n1, n.n2, e, t, cap=config.cap).value,
            n1=n.n1,
            n2=n.n2,
        )
    return check


def check_oracle(config: RunConfig, u_scale: float = 1.0) -> list[IdentityCheck]:
    """Analytic purities against the grid oracle, including displaced states."""
    tol = config.tolerance_oracle
    concordance = IdentityCheck("analytic_vs_oracle", tol)
    displacement = IdentityCheck("oracle_displacement_independence", tol)
    subsystem = IdentityCheck("oracle_subsystem_symmetry", tol)

    def oracle(eta, theta, n=None, label=None, keep=1):
        return oracle_purity(
            eta,
            theta,
            n=n,
            label=label,
            mk_over_hbar2=config.mk_over_hbar2,
            grid_points=config.grid_points,
            half_width_sigmas=config.half_width_sigmas,
            keep=keep,
        ).value

    for eta, theta in ORACLE_POINTS:
        for n in (None, QuantumNumbers(0, 1), QuantumNumbers(1, 1)):
            n1, n2 = (0, 0) if n is None else (n.n1, n.n2)
            analytic = purity_number_appendix(
                n1, n2, eta, theta, cap=config.cap, u_scale=u_scale
            ).value
            numeric = oracle(eta, theta, n)
            point = {"eta": eta, "theta": theta, "n1": n1, "n2": n2}
            concordance.record(abs(numeric - analytic), **point)
            subsystem.record(abs(oracle(eta, theta, n, keep=2) - numeric), **point)

    eta, theta = ORACLE_POINTS[1]
    reference = purity_coherent(eta, theta).value
    for label in ORACLE_LABELS:
        displacement.record(
            abs(oracle(eta, theta, label=label) - reference),
            eta=eta,
            theta=theta,
            alpha=float(label.alpha),
            beta=float(label.beta),
        )
    return [concordance, displacement, subsystem]


PurityFunction = Callable[[QuantumNumbers, float, float], float]


def _symmetry_checks(
    route: Route,
    tolerance: float,
    f: PurityFunction,
    states: Iterable[QuantumNumbers],
    points: list[tuple[float, float]],
) -> list[IdentityCheck]:
    suffix = route.name.lower()
    parity = IdentityCheck(f"eta_parity_{suffix}", tolerance)
    reflection = IdentityCheck(f"theta_reflection_{suffix}", tolerance)
    swap = IdentityCheck(f"quantum_number_swap_{suffix}", tolerance)
    bounded = IdentityCheck(f"boundedness_{suffix}", 0.0)

    for n in states:

        def g(e, t, n=n):
            return f(n, e, t)

        labels = {"n1": n.n1, "n2": n.n2}
        _compare(parity, points, g, lambda e, t, g=g: g(-e, t), **labels)
        _compare(reflection, points, g, lambda e, t, g=g: g(e, math.pi - t), **labels)
        if n.n1 != n.n2:
            _compare(
                swap, points, g, lambda e, t, n=n: f(n.swapped(), e, t), **labels
            )
        for eta, theta in points:
            value = g(eta, theta)
            overshoot = max(value - (1 + 1e-9), -value, 0.0)
            bounded.record(overshoot, eta=eta, theta=theta, **labels)
    return [parity, reflection, swap, bounded]


def check_symmetries(
    config: RunConfig,
    max_order: int,
    u_scale: float = 1.0,
    include_oracle: bool = False,
) -> list[IdentityCheck]:
    """Parity in eta, reflection theta -> pi - theta and the swap n1 <-> n2.

    Each analytic number-state route is checked on its own, and the oracle too
    when ``include_oracle`` is set, on fewer points and states.
    """
    tolerances = {
        Route.APPENDIX_A: config.tolerance_analytic,
        Route.GENERATING_FUNCTION: config.tolerance_gf,
    }
    states = list(_states(min(max_order, 2)))
    checks = []
    for route, tolerance in tolerances.items():

        def analytic(n, e, t, route=route):
            return purity(e, t, n, route, cap=config.cap, u_scale=u_scale).value

        checks.extend(
            _symmetry_checks(route, tolerance, analytic, states, SYMMETRY_POINTS)
        )

    if include_oracle:

        def oracle(n, e, t):
            return oracle_purity(
                e,
                t,
                n=n,
                mk_over_hbar2=config.mk_over_hbar2,
                grid_points=config.grid_points,
                half_width_sigmas=config.half_width_sigmas,
            ).value

        checks.extend(
            _symmetry_checks(
                Route.ORACLE,
                config.tolerance_oracle,
                oracle,
                ORACLE_SYMMETRY_STATES,
                list(ORACLE_SYMMETRY_POINTS),
            )
        )

    decoupling = IdentityCheck("coherent_decoupling", config.tolerance_analytic)
    for theta in linspace(0.0, math.pi, 50):
        decoupling.record(abs(purity_coherent(0.0, theta).value - 1), theta=theta)
    checks.append(decoupling)
    return checks


def validate(
    config: RunConfig | None = None,
    max_order: int = 3,
    u_scale: float = 1.0,
    include_oracle: bool = True,
) -> ValidationReport:
    """Run every identity and collect the results.

    Parameters
    ----------
    config : RunConfig, optional
        Tolerances, grid size and cap.
    max_order : int
        Largest n1 + n2 compared between the two analytic number-state routes.
    u_scale : float
        Multiplier applied to the kernel parameter u in the appendix-a route.
        Anything but 1 must make the report fail.
    include_oracle : bool
        Whether to run the grid-oracle identities, the slowest part. This
        includes the oracle symmetries.

    Returns
    -------
    ValidationReport
        One IdentityCheck per identity.
    """
    config = config or RunConfig()
    if max_order > config.cap:
        raise CapExceeded(
            f"max_order={max_order} exceeds the configured cap of {config.cap}"
        )

    identities = check_closed_forms(config, u_scale)
    identities.append(check_generating_function(config, max_order, u_scale))
    if include_oracle:
        identities.extend(check_oracle(config, u_scale))
    identities.extend(check_symmetries(config, max_order, u_scale, include_oracle))

    for check in identities:
        log = logger.info if check.passed else logger.warning
        log(
            "%-34s %s max_error=%.3g tolerance=%.3g",
            check.name,
            "pass" if check.passed else "FAIL",
            check.max_error,
            check.tolerance,
        )
    return ValidationReport(identities)
