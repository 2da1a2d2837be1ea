"""
Position-space wavefunctions of the coupled pair.

Two frames are used. The y-frame holds the decoupled normal modes, where every
state factorizes. The X-frame holds the physical coordinates; it is reached by
the mass rescaling x1 = mu X1, x2 = X2 / mu followed by the rotation through
half of `CanonicalParams.mode_angle`, which is theta or theta + pi. The
rescaling has unit Jacobian, so X-frame wavefunctions are normalized without
extra factors.

All evaluators broadcast over numpy arrays.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from oscillator_purity.config import HBAR
from oscillator_purity.model import CanonicalParams, QuantumNumbers

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class WidthParams:
    """Inverse lengths of the two normal modes."""

    lambda1: float
    lambda2: float


@dataclass(frozen=True)
class CoherentLabel:
    """Displacements (alpha, beta) of the two normal modes."""

    alpha: complex = 0.0
    beta: complex = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise ValueError(f"Displacements must be finite, got {self}")

    @property
    def is_real(self) -> bool:
        return np.imag(self.alpha) == 0 and np.imag(self.beta) == 0


def widths(p: CanonicalParams, hbar: float = HBAR) -> WidthParams:
    scale = p.mk_over_hbar2(hbar) ** 0.25
    return WidthParams(
        lambda1=math.exp(p.eta / 2) * scale,
        lambda2=math.exp(-p.eta / 2) * scale,
    )


def to_normal_modes(
    p: CanonicalParams, X1: np.ndarray, X2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Map physical coordinates (X1, X2) onto normal-mode coordinates (y1, y2).

    y1 is always the mode with inverse length lambda1, so n1 counts quanta of
    frequency omega * exp(eta).
    """
    x1 = p.mu * np.asarray(X1)
    x2 = np.asarray(X2) / p.mu
    angle = p.mode_angle
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return c * x1 - s * x2, s * x1 + c * x2


def hermite(n: int, x: np.ndarray | float) -> np.ndarray | float:
    """Physicists' Hermite polynomial H_n(x) by the three-term recurrence."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
    h_prev = np.ones_like(x) if np.ndim(x) else 1.0
    if n == 0:
        return h_prev
    h = 2 * x
    for k in range(1, n):
        h_prev, h = h, 2 * x * h - 2 * k * h_prev
    return h


def _eigenfunction(n: int, lam: float, y: np.ndarray) -> np.ndarray:
    """The normalized oscillator eigenfunction phi_n(lam * y)."""
    xi = lam * np.asarray(y, dtype=float)
    norm = math.sqrt(lam / (2**n * math.factorial(n) * math.sqrt(math.pi)))
    return norm * hermite(n, xi) * np.exp(-(xi**2) / 2)


def _coherent_factor(lam: float, a: complex, y: np.ndarray) -> np.ndarray:
    xi = lam * np.asarray(y, dtype=float)
    exponent = -(xi**2) / 2 + math.sqrt(2) * a * xi - a**2 / 2 - abs(a) ** 2 / 2
    return math.sqrt(lam / math.sqrt(math.pi)) * np.exp(exponent)


def ground_wavefunction_y(
    p: CanonicalParams, hbar: float, y1: np.ndarray, y2: np.ndarray
) -> np.ndarray:
    w = widths(p, hbar)
    y1, y2 = np.asarray(y1, dtype=float), np.asarray(y2, dtype=float)
    return np.sqrt(w.lambda1 * w.lambda2 / np.pi) * np.exp(
        -(w.lambda1**2 * y1**2 + w.lambda2**2 * y2**2) / 2
    )


def ground_wavefunction_x(
    p: CanonicalParams, hbar: float, X1: np.ndarray, X2: np.ndarray
) -> np.ndarray:
    return ground_wavefunction_y(p, hbar, *to_normal_modes(p, X1, X2))


def coherent_wavefunction_y(
    p: CanonicalParams,
    hbar: float,
    label: CoherentLabel,
    y1: np.ndarray,
    y2: np.ndarray,
) -> np.ndarray:
    """The displaced vacuum in normal-mode coordinates.

    The phase convention keeps the -alpha**2 / 2 term next to -|alpha|**2 / 2,
    so the value is real for real displacements and the state is normalized
    for any complex displacement.
    """
    w = widths(p, hbar)
    return _coherent_factor(w.lambda1, label.alpha, y1) * _coherent_factor(
        w.lambda2, label.beta, y2
    )


def coherent_wavefunction_x(
    p: CanonicalParams,
    hbar: float,
    label: CoherentLabel,
    X1: np.ndarray,
    X2: np.ndarray,
) -> np.ndarray:
    return coherent_wavefunction_y(p, hbar, label, *to_normal_modes(p, X1, X2))


def number_wavefunction_y(
    p: CanonicalParams,
    hbar: float,
    n: QuantumNumbers,
    y1: np.ndarray,
    y2: np.ndarray,
) -> np.ndarray:
    """The Fock state |n1, n2> as a product of oscillator eigenfunctions.

    This is the same function obtained by differentiating
    exp(|alpha|**2/2 + |beta|**2/2) times the coherent wavefunction n1 times in
    alpha and n2 times in beta at zero, divided by sqrt(n1! n2!).
    """
    w = widths(p, hbar)
    return _eigenfunction(n.n1, w.lambda1, y1) * _eigenfunction(n.n2, w.lambda2, y2)


def number_wavefunction_x(
    p: CanonicalParams,
    hbar: float,
    n: QuantumNumbers,
    X1: np.ndarray,
    X2: np.ndarray,
) -> np.ndarray:
    return number_wavefunction_y(p, hbar, n, *to_normal_modes(p, X1, X2))


def ground_state(p: CanonicalParams, hbar: float = HBAR) -> Evaluator:
    """Return the ground state as a function of physical coordinates."""

    def evaluate(X1, X2):
        return ground_wavefunction_x(p, hbar, X1, X2)

    return evaluate


def coherent_state(
    p: CanonicalParams, label: CoherentLabel, hbar: float = HBAR
) -> Evaluator:
    """Return the coherent state |alpha, beta> as a function of (X1, X2).

    Complex displacements give a complex-valued evaluator.
    """

    def evaluate(X1, X2):
        values = coherent_wavefunction_x(p, hbar, label, X1, X2)
        return values.real if label.is_real else values

    return evaluate


def number_state(
    p: CanonicalParams, n: QuantumNumbers, hbar: float = HBAR
) -> Evaluator:
    """Return the number state |n1, n2> as a function of (X1, X2)."""

    def evaluate(X1, X2):
        return number_wavefunction_x(p, hbar, n, X1, X2)

    return evaluate
