"""
Canonical reduction of two coupled harmonic oscillators.

The Hamiltonian

    H = P1**2 / (2 m1) + P2**2 / (2 m2) + (C1 X1**2 + C2 X2**2 + C3 X1 X2) / 2

is first brought to equal masses by x1 = mu X1, x2 = X2 / mu and then
diagonalised by a rotation through theta / 2. After both steps the two normal
modes have stiffnesses k * exp(+-2 eta) and every purity depends only on
(eta, theta). Which rotated coordinate carries which stiffness is fixed by
`CanonicalParams.mode_angle`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import pandas as pd

from oscillator_purity.config import HBAR, MASS, STIFFNESS
from oscillator_purity.errors import DomainError, NonPositiveMass, UnstablePotential

logger = logging.getLogger(__name__)


def _check_stability(c1: float, c2: float, c3: float) -> None:
    if not 4 * c1 * c2 > c3**2:
        raise UnstablePotential(
            "The condition 4*c1*c2 > c3**2 must be fulfilled, got "
            f"4*c1*c2 = {4 * c1 * c2:g} and c3**2 = {c3**2:g}"
        )


@dataclass(frozen=True)
class OscillatorSystem:
    """The raw physical parameters of the coupled pair."""

    m1: float
    m2: float
    C1: float
    C2: float
    C3: float

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise NonPositiveMass(
                f"Masses must be positive, got m1={self.m1}, m2={self.m2}"
            )
        _check_stability(*self.rescaled_stiffness)

    @property
    def rescaled_stiffness(self) -> tuple[float, float, float]:
        """The stiffnesses (c1, c2, c3) after rescaling to equal masses."""
        ratio = math.sqrt(self.m2 / self.m1)
        return self.C1 * ratio, self.C2 / ratio, self.C3


@dataclass(frozen=True)
class CanonicalParams:
    """Reduced parameters after rescaling and rotation."""

    mu: float
    m: float
    c1: float
    c2: float
    c3: float
    theta: float
    k: float
    eta: float
    omega: float

    def __repr__(self) -> str:
        return (
            f"<CanonicalParams eta={self.eta:.6g} theta={self.theta:.6g} "
            f"mu={self.mu:.6g} m={self.m:.6g} k={self.k:.6g}>"
        )

    def mk_over_hbar2(self, hbar: float = HBAR) -> float:
        return self.m * self.k / hbar**2

    @property
    def mode_angle(self) -> float:
        """The angle whose half rotates (x1, x2) onto (y1, y2), with y1 the mode of
        stiffness k * exp(2 eta).

        tan(theta) = c3 / (c2 - c1) fixes the rotation only up to pi. Rotating by
        theta / 2 leaves y1 with stiffness (c1 + c2) / 2 + split / 2, so when
        split and eta disagree in sign the modes are exchanged by rotating a
        further pi / 2.
        """
        split = (self.c1 - self.c2) * math.cos(self.theta) - self.c3 * math.sin(
            self.theta
        )
        if split * self.eta < 0:
            return self.theta + math.pi
        return self.theta


@dataclass(frozen=True)
class QuantumNumbers:
    """Excitation counts (n1, n2) of the two normal modes."""

    n1: int
    n2: int

    def __post_init__(self):
        for name in ("n1", "n2"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value}")

    @property
    def total(self) -> int:
        return self.n1 + self.n2

    def swapped(self) -> QuantumNumbers:
        return QuantumNumbers(self.n2, self.n1)


def mixing_angle(c1: float, c2: float, c3: float) -> float:
    """Solve tan(theta) = c3 / (c2 - c1) for theta in [0, pi).

    The branch is atan2(c3, c2 - c1) folded into [0, pi), which keeps
    sin(theta) >= 0. For c1 == c2 this gives pi/2 whenever c3 != 0 (a negative
    c3 lands on pi/2 after folding) and 0 when c3 == 0.
    """
    theta = math.atan2(c3, c2 - c1)
    if theta < 0:
        theta += math.pi
    if theta >= math.pi:
        theta -= math.pi
    return theta


def rescale(sys: OscillatorSystem) -> CanonicalParams:
    """Reduce a physical system to its canonical parameters.

    Note that with c3 = 0 but c1 != c2 the coupling formula still gives
    eta != 0, even though the decoupled case is usually identified with
    c3 = 0. The formula is applied as written; purities are unaffected because
    theta is then 0.

    Parameters
    ----------
    sys : OscillatorSystem
        The physical masses and stiffnesses.

    Returns
    -------
    CanonicalParams
        Scale factor, reduced mass, rescaled stiffnesses, mixing angle,
        effective stiffness, coupling strength and frequency.
    """
    if not (sys.m1 > 0 and sys.m2 > 0):
        raise NonPositiveMass(f"Masses must be positive, got m1={sys.m1}, m2={sys.m2}")
    c1, c2, c3 = sys.rescaled_stiffness
    _check_stability(c1, c2, c3)

    mu = (sys.m1 / sys.m2) ** 0.25
    m = math.sqrt(sys.m1 * sys.m2)
    k = math.sqrt(c1 * c2 - c3**2 / 4)
    eta = 0.5 * math.log((c1 + c2 + math.hypot(c1 - c2, c3)) / (2 * k))
    params = CanonicalParams(
        mu=mu,
        m=m,
        c1=c1,
        c2=c2,
        c3=c3,
        theta=mixing_angle(c1, c2, c3),
        k=k,
        eta=eta,
        omega=math.sqrt(k / m),
    )
    logger.debug("Rescaled %s to %r", sys, params)
    return params


def from_synthetic(
    eta: float,
    theta: float,
    m: float = MASS,
    k: float = STIFFNESS,
    *,
    division_safe: bool = True,
) -> CanonicalParams:
    """Build canonical parameters directly from (eta, theta).

    The stiffnesses are back-filled as the entries of
    k * R^T diag(exp(2 eta), exp(-2 eta)) R with equal masses (mu = 1), so that
    `rescale` of the corresponding system returns (|eta|, theta). With these
    entries y1 carries stiffness k * exp(2 eta) for either sign of eta, so
    `mode_angle` equals theta.

    Parameters
    ----------
    eta : float
        Coupling strength. May be negative.
    theta : float
        Mixing angle in radians.
    m, k : float
        Reduced mass and effective stiffness.
    division_safe : bool
        If True, theta must lie strictly inside (0, pi), as required by the
        number-state formulas that divide by sin(theta). Otherwise [0, pi] is
        accepted.
    """
    if not m > 0:
        raise NonPositiveMass(f"Reduced mass must be positive, got m={m}")
    if not k > 0:
        raise DomainError(f"Effective stiffness must be positive, got k={k}")
    if division_safe and not 0 < theta < math.pi:
        raise DomainError(
            f"theta must lie in the open interval (0, pi) where sin(theta) != 0, "
            f"got theta={theta}"
        )
    if not division_safe and not 0 <= theta <= math.pi:
        raise DomainError(f"theta must lie in [0, pi], got theta={theta}")

    ch2, sh2 = math.cosh(2 * eta), math.sinh(2 * eta)
    return CanonicalParams(
        mu=1.0,
        m=m,
        c1=k * (ch2 + sh2 * math.cos(theta)),
        c2=k * (ch2 - sh2 * math.cos(theta)),
        c3=-2 * k * sh2 * math.sin(theta),
        theta=theta,
        k=k,
        eta=eta,
        omega=math.sqrt(k / m),
    )


def energy(p: CanonicalParams, n: QuantumNumbers, hbar: float = HBAR) -> float:
    """The eigenvalue hbar*omega*(e^eta n1 + e^-eta n2 + cosh eta)."""
    return (
        hbar
        * p.omega
        * (math.exp(p.eta) * n.n1 + math.exp(-p.eta) * n.n2 + math.cosh(p.eta))
    )


def spectrum_table(p: CanonicalParams, n_max: int, hbar: float = HBAR) -> pd.DataFrame:
    """Tabulate the energy of every state with n1, n2 <= n_max."""
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")
    rows = []
    for n1 in range(n_max + 1):
        for n2 in range(n_max + 1):
            e = energy(p, QuantumNumbers(n1, n2), hbar)
            rows.append(
                {
                    "n1": n1,
                    "n2": n2,
                    "energy": e,
                    "energy_over_hbar_omega": e / (hbar * p.omega),
                }
            )
    return pd.DataFrame(rows)


def swap_oscillators(sys: OscillatorSystem) -> OscillatorSystem:
    """Exchange the roles of the two oscillators."""
    return OscillatorSystem(m1=sys.m2, m2=sys.m1, C1=sys.C2, C2=sys.C1, C3=sys.C3)
