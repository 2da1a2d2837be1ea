"""
Purity of the reduced single-particle state.

Coherent states have a closed form in (eta, theta) alone. Number states
|n1, n2> are handled three ways:

* closed forms for (0, 1), (1, 0) and (1, 1),
* the coefficient sum over principal labels (``appendix-a``),
* direct coefficient extraction from the truncated exponential of the purity
  exponent (``generating-function``).

The numerical oracle in :mod:`oscillator_purity.oracle` is the independent
fourth route.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np

from oscillator_purity.config import DEFAULT_CAP, GF_REFERENCE_POINT, HBAR
from oscillator_purity.errors import CapExceeded, ConstraintViolation, DomainError
from oscillator_purity.model import CanonicalParams, QuantumNumbers
from oscillator_purity.polyalg import (
    KERNEL_SYMBOLS,
    N_VARIABLES,
    QuadraticForm8,
    exp_truncated,
    extract_coefficient,
    overlap_matrices,
    target_degree,
)
from oscillator_purity.states import CoherentLabel

logger = logging.getLogger(__name__)


class Route(str, Enum):
    CLOSED_FORM = "closed-form"
    APPENDIX_A = "appendix-a"
    GENERATING_FUNCTION = "generating-function"
    ORACLE = "oracle"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class PurityKernelParams:
    """The (eta, theta)-dependent scalars of the purity exponent.

    All carry the factor mk/hbar**2; only their ratios to rho enter a purity.
    """

    rho: float
    u: float
    v: float
    w: float
    t: float
    s: float

    def ratios(self) -> dict[str, float]:
        return {symbol: getattr(self, symbol) / self.rho for symbol in KERNEL_SYMBOLS}


@dataclass(frozen=True)
class PrincipalIndex:
    """Exponents (i, j, k, l, r) of the kernel monomial u^i v^j w^k t^l s^r."""

    i: int
    j: int
    k: int
    l: int  # noqa: E741
    r: int

    @property
    def total(self) -> int:
        return self.i + self.j + self.k + self.l + self.r

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.i, self.j, self.k, self.l, self.r)

    def check(self, n1: int, n2: int) -> None:
        if min(self.as_tuple()) < 0 or self.total != 2 * (n1 + n2):
            raise ConstraintViolation(
                f"Principal labels {self.as_tuple()} must be non-negative and sum "
                f"to 2*(n1 + n2) = {2 * (n1 + n2)}"
            )


@dataclass(frozen=True)
class CoefficientTerm:
    index: PrincipalIndex
    value: Fraction


@dataclass(frozen=True)
class PurityResult:
    """A purity value together with how and where it was computed.

    ``n1`` and ``n2`` are None for coherent states.
    """

    value: float
    route: Route
    error_estimate: float = 0.0
    eta: float | None = None
    theta: float | None = None
    n1: int | None = None
    n2: int | None = None

    def __repr__(self) -> str:
        return (
            f"<PurityResult value={self.value:.12g} route={self.route} "
            f"eta={self.eta} theta={self.theta} n=({self.n1}, {self.n2})>"
        )

    @property
    def linear_entropy(self) -> float:
        return linear_entropy(self)


def linear_entropy(p: PurityResult) -> float:
    return 1.0 - p.value


def _half_angle_squares(theta: float) -> tuple[float, float]:
    """tan**2(theta/2) and cot**2(theta/2)."""
    tan2 = math.tan(theta / 2) ** 2
    return tan2, 1 / tan2


def _check_theta(theta: float) -> None:
    if not 0 < theta < math.pi:
        raise DomainError(
            f"theta must lie in (0, pi) where sin(theta) != 0, got theta={theta}"
        )


def _check_order(n1: int, n2: int, cap: int) -> QuantumNumbers:
    n = QuantumNumbers(n1, n2)
    if n.total > cap:
        raise CapExceeded(
            f"n1 + n2 = {n.total} exceeds the configured cap of {cap}; raise the cap "
            "to evaluate higher states"
        )
    return n


def kernel_params(
    eta: float, theta: float, mk_over_hbar2: float = 1.0, u_scale: float = 1.0
) -> PurityKernelParams:
    """Evaluate (rho, u, v, w, t, s) at a point.

    ``u_scale`` multiplies u and exists only to perturb the kernel in
    sensitivity checks.
    """
    _check_theta(theta)
    if not mk_over_hbar2 > 0:
        raise DomainError(f"mk/hbar**2 must be positive, got {mk_over_hbar2}")
    a = mk_over_hbar2
    tan2, cot2 = _half_angle_squares(theta)
    ch2 = math.cosh(2 * eta)
    return PurityKernelParams(
        rho=4 * a * (2 * ch2 + cot2 + tan2),
        u=2 * a * math.sinh(2 * eta) * u_scale,
        v=2 * a * (ch2 + tan2),
        w=2 * a * (ch2 + cot2),
        t=4 * a * math.cosh(eta) / math.sin(theta),
        s=-4 * a * math.sinh(eta) * math.cos(theta) / math.sin(theta),
    )


def purity_coherent(eta: float, theta: float) -> PurityResult:
    """Purity of any coherent state |alpha, beta>, independent of the labels.

    Defined on the closed interval, including theta = 0 and pi where it is 1.
    """
    c2, s2 = math.cos(theta / 2) ** 2, math.sin(theta / 2) ** 2
    value = 1 / math.sqrt(2 * math.cosh(2 * eta) * s2 * c2 + c2**2 + s2**2)
    return PurityResult(value, Route.CLOSED_FORM, eta=eta, theta=theta)


def _coherent_prefactor(eta: float, theta: float) -> float:
    """2 / (sin(theta) * sqrt(2cosh(2eta) + tan**2 + cot**2)), equal to P00."""
    tan2, cot2 = _half_angle_squares(theta)
    return 2 / (math.sin(theta) * math.sqrt(2 * math.cosh(2 * eta) + tan2 + cot2))


def purity_p01(eta: float, theta: float) -> PurityResult:
    """Closed-form purity of |0, 1> (and, by symmetry, |1, 0>)."""
    _check_theta(theta)
    tan2, cot2 = _half_angle_squares(theta)
    numerator = (
        3 * math.cosh(4 * eta)
        + 4 * (tan2 + cot2) * math.cosh(2 * eta)
        + 2 * tan2**2
        + 2 * cot2**2
        + 1
    )
    denominator = math.sin(theta) * (2 * math.cosh(2 * eta) + tan2 + cot2) ** 2.5
    return PurityResult(
        numerator / denominator, Route.CLOSED_FORM, eta=eta, theta=theta, n1=0, n2=1
    )


def purity_p11(eta: float, theta: float) -> PurityResult:
    """Closed-form purity of |1, 1>."""
    _check_theta(theta)
    tan2, cot2 = _half_angle_squares(theta)
    numerator = (
        9 * math.cosh(8 * eta)
        + 16 * (tan2 + cot2) * math.cosh(6 * eta)
        + (96 * tan2**2 + 96 * cot2**2 - 36) * math.cosh(4 * eta)
        + 240 * (tan2 + cot2) * math.cosh(2 * eta)
        + 8 * tan2**4
        + 8 * cot2**4
        - 64 * tan2**2
        - 64 * cot2**2
        + 459
    )
    denominator = (
        4 * math.sin(theta) * (2 * math.cosh(2 * eta) + tan2 + cot2) ** 4.5
    )
    return PurityResult(
        numerator / denominator, Route.CLOSED_FORM, eta=eta, theta=theta, n1=1, n2=1
    )


def purity_p01_half_angle(eta: float) -> float:
    """P01 at theta = pi/2."""
    return (3 * math.cosh(4 * eta) + 8 * math.cosh(2 * eta) + 5) / (
        32 * math.cosh(eta) ** 5
    )


def purity_p11_half_angle(eta: float) -> float:
    """P11 at theta = pi/2."""
    numerator = (
        9 * math.cosh(8 * eta)
        + 32 * math.cosh(6 * eta)
        + 156 * math.cosh(4 * eta)
        + 480 * math.cosh(2 * eta)
        + 347
    )
    return numerator / (2048 * math.cosh(eta) ** 9)


class CoefficientReading(str, Enum):
    """How the reduced label sum is evaluated.

    ``consistent`` divides by the factorial of every chain step and takes the sign
    exponent of the u chain as i2 - c1 - c2, where c1 and c2 count the
    alpha3, alpha4 and the alpha1, alpha2 squares, so that c1 + c2 = i8.

    ``unweighted-vw`` leaves out the 1/m! of the v and w chain steps. It agrees
    with ``consistent`` while no v or w occurrence is used twice.

    ``shifted-sign`` takes c2 = (n1 - b2 + (i3 - i4) - b1) / 2, where b2 is the
    cross degree of alpha2 and b1 that of alpha1 without its u step. It shifts
    the exponent by n1 / 2 - (i3 - i4) and has no integer value for odd n1.
    """

    CONSISTENT = "consistent"
    UNWEIGHTED_VW = "unweighted-vw"
    SHIFTED_SIGN = "shifted-sign"

    def __str__(self) -> str:
        return self.value


# Each kernel symbol is expanded over its occurrences by a descending chain of
# labels x >= x1 >= x2 >= ... The step x_{m-1} - x_m (the last label for the
# final step) is the multiplicity of one occurrence and raises the degree of
# the listed variables, indexed as in polyalg.VARIABLES. The first four u
# steps are cross terms, the other eight are the squares of beta4, beta3,
# beta2, beta1, alpha4, alpha3, alpha2 and alpha1 in that order.
# fmt: off
_CHAINS = {
    "u": (
        (5, 7), (4, 6), (1, 3), (0, 2),
        (7,), (6,), (5,), (4,), (3,), (2,), (1,), (0,),
    ),
    "v": ((5, 6), (4, 7), (2, 3), (0, 1)),
    "w": ((0, 3), (6, 7), (4, 5), (1, 2)),
    "t": ((0, 7), (0, 5), (3, 6), (3, 4), (2, 7), (2, 5), (1, 4), (1, 6)),
    "s": ((0, 6), (0, 4), (3, 7), (3, 5), (2, 4), (1, 5), (1, 7), (2, 6)),
}
# fmt: on
_CROSS_STEPS = sorted(
    (
        (symbol, m, pair)
        for symbol, chain in _CHAINS.items()
        for m, pair in enumerate(chain)
        if len(pair) == 2
    ),
    key=lambda item: item[2],
)
_SQUARE_STEP = {pair[0]: m for m, pair in enumerate(_CHAINS["u"]) if len(pair) == 1}
_FIRST_SQUARE_STEP = min(_SQUARE_STEP.values())
# Position after which a variable appears in no further cross step
_LAST_USE = {
    var: max(pos for pos, (_, _, pair) in enumerate(_CROSS_STEPS) if var in pair)
    for var in range(N_VARIABLES)
}


def _chain_labels(steps: list[int]) -> list[int]:
    """The labels x, x1, x2, ... of a chain from its step multiplicities."""
    return list(itertools.accumulate(reversed(steps)))[::-1]


def _sign_exponent(
    n1: int,
    remaining: list[int],
    labels: dict[str, list[int]],
    reading: CoefficientReading,
) -> int:
    i, l, r = labels["u"], labels["t"], labels["s"]  # noqa: E741
    c1 = (remaining[2] + remaining[3]) // 2
    if reading is CoefficientReading.SHIFTED_SIGN:
        twice_c2 = remaining[0] + remaining[1] - n1 + 2 * (i[3] - i[4])
        if twice_c2 % 2:
            raise ConstraintViolation(
                f"The sign exponent i2 - c1 - c2 has c2 = {twice_c2}/2, which is "
                f"not an integer (n1 = {n1})"
            )
        c2 = twice_c2 // 2
    else:
        c2 = (remaining[0] + remaining[1]) // 2
    # fmt: off
    return (
        i[2] - c1 - c2
        + l[1] - l[3] + l[4] - l[5] + l[6] - l[7]
        + r[0] - r[1] + r[3] - r[5] + r[6] - r[7]
    )
    # fmt: on


def _label_sum(
    n1: int, n2: int, reading: CoefficientReading
) -> dict[tuple, Fraction]:
    """Sum over every set of chain labels with the principal labels fixed.

    The cross steps are chosen depth first under the per-variable degree
    budgets. Each variable's remaining budget must then be even, and half of
    it is the multiplicity c of its square, so the u chain below i4 is fixed
    by the other chains. A branch is pruned as soon as a variable with no
    cross steps left has an odd remainder. Every set of labels contributes

        2**-i4 * (-1)**exponent / (product of the step multiplicities m!)
    """
    reading = CoefficientReading(reading)
    unweighted_vw = reading is CoefficientReading.UNWEIGHTED_VW
    budget = list(target_degree(n1, n2))
    steps = {symbol: [0] * len(chain) for symbol, chain in _CHAINS.items()}
    table: dict[tuple, Fraction] = {}
    closing = {
        pos: [var for var, last in _LAST_USE.items() if last == pos]
        for pos in range(len(_CROSS_STEPS))
    }
    leaves = 0

    def collect(weight: Fraction) -> None:
        nonlocal leaves
        leaves += 1
        for var, remaining in enumerate(budget):
            steps["u"][_SQUARE_STEP[var]] = remaining // 2
        labels = {symbol: _chain_labels(s) for symbol, s in steps.items()}
        exponent = _sign_exponent(n1, budget, labels, reading)
        squares = steps["u"][_FIRST_SQUARE_STEP:]
        weight /= 2 ** labels["u"][_FIRST_SQUARE_STEP] * math.prod(
            math.factorial(c) for c in squares
        )
        index = tuple(labels[symbol][0] for symbol in KERNEL_SYMBOLS)
        table[index] = table.get(index, 0) + (-weight if exponent % 2 else weight)

    def visit(pos: int, weight: Fraction) -> None:
        if pos == len(_CROSS_STEPS):
            collect(weight)
            return

        symbol, m, (a, b) = _CROSS_STEPS[pos]
        weighted = not (unweighted_vw and symbol in ("v", "w"))
        for e in range(min(budget[a], budget[b]) + 1):
            budget[a] -= e
            budget[b] -= e
            if all(budget[var] % 2 == 0 for var in closing[pos]):
                steps[symbol][m] = e
                visit(pos + 1, weight / math.factorial(e) if weighted else weight)
            budget[a] += e
            budget[b] += e
        steps[symbol][m] = 0

    visit(0, Fraction(1))
    logger.debug(
        "Summed C_%d%d (%s): %d label sets, %d principal labels",
        n1,
        n2,
        reading,
        leaves,
        len(table),
    )
    return {index: value for index, value in table.items() if value != 0}


@lru_cache(maxsize=None)
def coefficient_table(
    n1: int, n2: int, reading: CoefficientReading = CoefficientReading.CONSISTENT
) -> tuple[CoefficientTerm, ...]:
    """Every nonzero coefficient C_{n1 n2}(i, j, k, l, r), in index order.

    The coefficients are exact rationals. In this normalization

        P_{n1 n2} = P00 * (n1! n2!)**2 * sum C * (2u/rho)**i (2v/rho)**j
                    (2w/rho)**k (2t/rho)**l (2s/rho)**r
    """
    QuantumNumbers(n1, n2)
    return tuple(
        CoefficientTerm(PrincipalIndex(*index), value)
        for index, value in sorted(_label_sum(n1, n2, reading).items())
    )


def coefficient_c(
    n1: int,
    n2: int,
    index: PrincipalIndex,
    reading: CoefficientReading = CoefficientReading.CONSISTENT,
) -> CoefficientTerm:
    """The single coefficient C_{n1 n2} at a principal index (zero if absent)."""
    index.check(n1, n2)
    for term in coefficient_table(n1, n2, reading):
        if term.index == index:
            return term
    return CoefficientTerm(index, Fraction(0))


def purity_number_appendix(
    n1: int,
    n2: int,
    eta: float,
    theta: float,
    mk_over_hbar2: float = 1.0,
    cap: int = DEFAULT_CAP,
    u_scale: float = 1.0,
    reading: CoefficientReading = CoefficientReading.CONSISTENT,
) -> PurityResult:
    """Number-state purity from the principal-label coefficient sum.

    Parameters
    ----------
    n1, n2 : int
        Quantum numbers of the state.
    eta, theta : float
        Coupling strength and mixing angle, with theta in (0, pi).
    mk_over_hbar2 : float
        Scale of the kernel parameters. The result does not depend on it.
    cap : int
        Largest n1 + n2 accepted.
    u_scale : float
        Perturbation factor for u, 1 in normal use.
    reading : CoefficientReading
        How the label sum is evaluated. Only the default reproduces the
        closed forms.

    Returns
    -------
    PurityResult
        The purity, tagged with the ``appendix-a`` route.
    """
    _check_theta(theta)
    _check_order(n1, n2, cap)
    ratios = kernel_params(eta, theta, mk_over_hbar2, u_scale).ratios()
    x = [2 * ratios[symbol] for symbol in KERNEL_SYMBOLS]
    total = math.fsum(
        float(term.value) * math.prod(xi**e for xi, e in zip(x, term.index.as_tuple()))
        for term in coefficient_table(n1, n2, reading)
    )
    value = (
        _coherent_prefactor(eta, theta)
        * (math.factorial(n1) * math.factorial(n2)) ** 2
        * total
    )
    return PurityResult(value, Route.APPENDIX_A, eta=eta, theta=theta, n1=n1, n2=n2)


def gaussian_prefactor(eta: float, theta: float) -> float:
    """The zeroth-order overlap integral, normalization of the four factors
    included, computed from the determinant of the Gaussian."""
    M, _ = overlap_matrices(eta, theta)
    return 4 / math.sqrt(np.linalg.det(M))


@lru_cache(maxsize=1)
def gf_calibration() -> float:
    """Overall constant of the generating-function route.

    Fixed once by requiring P00 to equal the closed coherent form at the
    reference point.
    """
    eta, theta = GF_REFERENCE_POINT
    gamma = purity_coherent(eta, theta).value / gaussian_prefactor(eta, theta)
    logger.debug("Generating-function calibration constant: %.17g", gamma)
    return gamma


def purity_number_gf(
    n1: int, n2: int, eta: float, theta: float, cap: int = DEFAULT_CAP
) -> PurityResult:
    """Number-state purity by expanding the purity exponent.

    The exponent comes from completing the square in the Gaussian overlap
    integral rather than from the kernel parameters. The coefficient of
    prod(alpha_i**n1 * beta_i**n2) in exp(q) is the mixed derivative at zero
    divided by (n1!)**4 (n2!)**4. That monomial has total degree
    4 * (n1 + n2), which sets the truncation.
    """
    _check_theta(theta)
    _check_order(n1, n2, cap)
    form = QuadraticForm8.from_gaussian_integral(eta, theta)
    target = target_degree(n1, n2)
    series = exp_truncated(form, cap=sum(target), bound=target)
    coefficient = float(extract_coefficient(series, target))
    f1, f2 = math.factorial(n1), math.factorial(n2)
    value = (
        gf_calibration()
        * gaussian_prefactor(eta, theta)
        * (f1 * f2) ** 2
        * coefficient
    )
    return PurityResult(
        value, Route.GENERATING_FUNCTION, eta=eta, theta=theta, n1=n1, n2=n2
    )


def _closed_form_number(n: QuantumNumbers, eta: float, theta: float) -> PurityResult:
    if n.total == 0:
        result = purity_coherent(eta, theta)
    elif sorted((n.n1, n.n2)) == [0, 1]:
        result = purity_p01(eta, theta)
    elif (n.n1, n.n2) == (1, 1):
        result = purity_p11(eta, theta)
    else:
        raise ValueError(
            f"No closed form for |{n.n1}, {n.n2}>; use the appendix-a, "
            "generating-function or oracle route"
        )
    return PurityResult(
        result.value, Route.CLOSED_FORM, eta=eta, theta=theta, n1=n.n1, n2=n.n2
    )


def purity(
    eta: float,
    theta: float,
    n: QuantumNumbers | tuple[int, int] | None = None,
    route: Route | str = Route.CLOSED_FORM,
    *,
    mk_over_hbar2: float = 1.0,
    cap: int = DEFAULT_CAP,
    label: CoherentLabel | None = None,
    grid_points: int | None = None,
    u_scale: float = 1.0,
    params: CanonicalParams | None = None,
    hbar: float = HBAR,
) -> PurityResult:
    """Evaluate the purity of a coherent state (``n=None``) or of |n1, n2>.

    Parameters
    ----------
    eta, theta : float
        Coupling strength and mixing angle.
    n : QuantumNumbers or tuple, optional
        The number state. None selects a coherent state, whose purity is
        independent of its displacement.
    route : Route or str
        How to compute the purity.
    mk_over_hbar2, cap
        Passed to the analytic routes.
    u_scale : float
        Perturbation factor for u in the appendix-a route.
    label : CoherentLabel, optional
        Displacements used by the oracle for coherent states.
    grid_points : int, optional
        Base grid size of the oracle.
    params : CanonicalParams, optional
        A physical system for the oracle, with Planck constant ``hbar``. Its
        own (eta, theta) are used.
    """
    route = Route(route)
    if n is not None and not isinstance(n, QuantumNumbers):
        n = QuantumNumbers(*n)

    if route is Route.ORACLE:
        from oscillator_purity.oracle import oracle_purity

        return oracle_purity(
            eta,
            theta,
            n=n,
            label=label,
            mk_over_hbar2=mk_over_hbar2,
            grid_points=grid_points,
            params=params,
            hbar=hbar,
        )

    if n is None:
        if route is Route.CLOSED_FORM:
            return purity_coherent(eta, theta)
        n1 = n2 = 0
    else:
        n1, n2 = n.n1, n.n2

    if route is Route.CLOSED_FORM:
        return _closed_form_number(n, eta, theta)

    if route is Route.APPENDIX_A:
        result = purity_number_appendix(
            n1, n2, eta, theta, mk_over_hbar2, cap, u_scale
        )
    else:
        result = purity_number_gf(n1, n2, eta, theta, cap)
    if n is None:
        return PurityResult(result.value, result.route, eta=eta, theta=theta)
    return result
