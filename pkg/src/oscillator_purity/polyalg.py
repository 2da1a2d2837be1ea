"""
Truncated polynomial algebra in the eight generating variables
(alpha1, ..., alpha4, beta1, ..., beta4).

Number-state purities are derivatives at zero of an exponential of a quadratic
form in these variables. Here that exponential is expanded as a sparse
polynomial and the derivative is read off as a single coefficient.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number

import numpy as np

logger = logging.getLogger(__name__)

VARIABLES = (
    "alpha1",
    "alpha2",
    "alpha3",
    "alpha4",
    "beta1",
    "beta2",
    "beta3",
    "beta4",
)
N_VARIABLES = len(VARIABLES)

# A monomial is the tuple of its exponents in VARIABLES order
MultiDegree = tuple[int, ...]

# (symbol, pair of variable indices, sign) for every term of the purity
# exponent. Squares enter as symbol/rho, cross terms as 2*symbol/rho.
_KERNEL_SLOTS = (
    # u: the eight squares and the four products of labels sharing no coordinate
    ("u", (0, 0), 1),
    ("u", (1, 1), 1),
    ("u", (2, 2), 1),
    ("u", (3, 3), 1),
    ("u", (4, 4), -1),
    ("u", (5, 5), -1),
    ("u", (6, 6), -1),
    ("u", (7, 7), -1),
    ("u", (0, 2), -1),
    ("u", (1, 3), -1),
    ("u", (4, 6), 1),
    ("u", (5, 7), 1),
    # v and w: labels sharing the traced-out or the kept coordinate
    ("v", (0, 1), 1),
    ("v", (2, 3), 1),
    ("v", (4, 7), 1),
    ("v", (5, 6), 1),
    ("w", (0, 3), 1),
    ("w", (1, 2), 1),
    ("w", (4, 5), 1),
    ("w", (6, 7), 1),
    # t and s: mixed alpha-beta products
    ("t", (0, 5), -1),
    ("t", (0, 7), 1),
    ("t", (1, 4), -1),
    ("t", (1, 6), 1),
    ("t", (2, 5), 1),
    ("t", (2, 7), -1),
    ("t", (3, 4), 1),
    ("t", (3, 6), -1),
    ("s", (0, 4), 1),
    ("s", (0, 6), -1),
    ("s", (1, 5), 1),
    ("s", (1, 7), -1),
    ("s", (2, 4), -1),
    ("s", (2, 6), 1),
    ("s", (3, 5), -1),
    ("s", (3, 7), 1),
)

KERNEL_SYMBOLS = ("u", "v", "w", "t", "s")


@dataclass(frozen=True)
class Slot:
    """One occurrence of a kernel symbol in the purity exponent."""

    pair: tuple[int, int]
    sign: int
    factor: int

    @property
    def is_square(self) -> bool:
        return self.pair[0] == self.pair[1]


def zero_degree() -> MultiDegree:
    return (0,) * N_VARIABLES


def target_degree(n1: int, n2: int) -> MultiDegree:
    """The monomial prod(alpha_i**n1) * prod(beta_i**n2)."""
    return (n1,) * 4 + (n2,) * 4


def _pair_degree(i: int, j: int) -> MultiDegree:
    d = [0] * N_VARIABLES
    d[i] += 1
    d[j] += 1
    return tuple(d)


def _fits(d: MultiDegree, cap: int | None, bound: MultiDegree | None) -> bool:
    if cap is not None and sum(d) > cap:
        return False
    return bound is None or all(x <= b for x, b in zip(d, bound))


class SparsePoly:
    """A polynomial stored as {MultiDegree: coefficient}.

    Zero coefficients are never stored. Terms above the total-degree ``cap`` or
    outside the per-variable ``bound`` are discarded on construction, so every
    product of truncated polynomials stays truncated.
    """

    def __init__(
        self,
        terms: dict[MultiDegree, Number] | None = None,
        cap: int | None = None,
        bound: MultiDegree | None = None,
    ):
        self.cap = cap
        self.bound = bound
        self.terms = {
            d: c
            for d, c in (terms or {}).items()
            if c != 0 and _fits(d, cap, bound)
        }

    def __repr__(self) -> str:
        return f"<SparsePoly terms={len(self)} cap={self.cap}>"

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.terms == other.terms

    @staticmethod
    def constant(c: Number = 1, cap: int | None = None) -> SparsePoly:
        return SparsePoly({zero_degree(): c}, cap=cap)

    @staticmethod
    def variable(name: str, c: Number = 1) -> SparsePoly:
        """The monomial c * name, e.g. ``SparsePoly.variable("alpha1")``."""
        d = [0] * N_VARIABLES
        d[VARIABLES.index(name)] = 1
        return SparsePoly({tuple(d): c})

    @property
    def max_degree(self) -> int:
        return max((sum(d) for d in self.terms), default=0)

    def __add__(self, other: SparsePoly) -> SparsePoly:
        terms = dict(self.terms)
        for d, c in other.terms.items():
            terms[d] = terms.get(d, 0) + c
        return SparsePoly(terms, cap=_min_cap(self.cap, other.cap), bound=self.bound)

    def __mul__(self, other: SparsePoly | Number) -> SparsePoly:
        if isinstance(other, SparsePoly):
            return poly_mul(self, other, cap=_min_cap(self.cap, other.cap))
        return SparsePoly(
            {d: c * other for d, c in self.terms.items()}, self.cap, self.bound
        )

    __rmul__ = __mul__

    def isclose(self, other: SparsePoly, atol: float = 1e-12) -> bool:
        """Compare two float polynomials coefficient by coefficient."""
        keys = set(self.terms) | set(other.terms)
        return all(
            abs(self.terms.get(d, 0) - other.terms.get(d, 0)) <= atol for d in keys
        )


def _min_cap(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True)
class QuadraticForm8:
    """A quadratic form in the eight generating variables.

    ``coefficients`` maps an index pair (i, j) with i <= j to the coefficient
    of the monomial x_i * x_j (not to a symmetric matrix entry).
    """

    coefficients: dict[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        for i, j in self.coefficients:
            if not 0 <= i <= j < N_VARIABLES:
                raise ValueError(f"Invalid index pair ({i}, {j})")

    def __len__(self) -> int:
        return sum(1 for c in self.coefficients.values() if c != 0)

    def __add__(self, other: QuadraticForm8) -> QuadraticForm8:
        coefficients = dict(self.coefficients)
        for key, c in other.coefficients.items():
            coefficients[key] = coefficients.get(key, 0) + c
        return QuadraticForm8(coefficients)

    @staticmethod
    def slots() -> dict[str, list[Slot]]:
        """Where each kernel symbol (u, v, w, t, s) enters the purity exponent."""
        slots: dict[str, list[Slot]] = {symbol: [] for symbol in KERNEL_SYMBOLS}
        for symbol, pair, sign in _KERNEL_SLOTS:
            factor = 1 if pair[0] == pair[1] else 2
            slots[symbol].append(Slot(pair=pair, sign=sign, factor=factor))
        return slots

    @classmethod
    def from_kernel(cls, kp) -> QuadraticForm8:
        """Build the purity exponent from kernel parameters.

        ``kp`` provides ``rho`` and the five symbols ``u, v, w, t, s``.
        """
        coefficients = {}
        for symbol, slots in cls.slots().items():
            ratio = getattr(kp, symbol) / kp.rho
            for slot in slots:
                coefficients[slot.pair] = slot.sign * slot.factor * ratio
        return cls(coefficients)

    @classmethod
    def from_gaussian_integral(cls, eta: float, theta: float) -> QuadraticForm8:
        """Derive the purity exponent by doing the Gaussian overlap integral.

        The four coherent-state factors of Tr(rho**2) are integrated over
        (X1, X1', X2, X2') by completing the square, without reference to the
        kernel parameters.
        """
        M, B = overlap_matrices(eta, theta)
        Q = 0.5 * (B.T @ np.linalg.solve(M, B) - np.eye(N_VARIABLES))
        coefficients = {}
        for i in range(N_VARIABLES):
            coefficients[(i, i)] = float(Q[i, i])
            for j in range(i + 1, N_VARIABLES):
                coefficients[(i, j)] = float(Q[i, j] + Q[j, i])
        return cls(coefficients)

    def to_poly(self) -> SparsePoly:
        terms = {_pair_degree(i, j): c for (i, j), c in self.coefficients.items()}
        return SparsePoly(terms)

    def isclose(self, other: QuadraticForm8, atol: float = 1e-12) -> bool:
        keys = set(self.coefficients) | set(other.coefficients)
        return all(
            abs(self.coefficients.get(k, 0) - other.coefficients.get(k, 0)) <= atol
            for k in keys
        )


def overlap_matrices(eta: float, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """The Gaussian data of the four-factor overlap integral.

    Factor j carries labels (alpha_j, beta_j) and sits at the coordinate pair
    (X1, X2), (X1', X2), (X1', X2'), (X1, X2') for j = 1..4. In units with
    mk/hbar**2 = 1 and mu = 1 the integrand is

        exp(-Z.M.Z / 2 + Z.B.g - g.g / 2)

    with Z = (X1, X1', X2, X2') and g the eight labels.

    Returns
    -------
    M : np.ndarray
        The 4x4 positive-definite matrix of the Gaussian.
    B : np.ndarray
        The 4x8 coupling between coordinates and labels.
    """
    lam1, lam2 = math.exp(eta / 2), math.exp(-eta / 2)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    # (index of the particle-1 coordinate, index of the particle-2 coordinate)
    positions = ((0, 2), (1, 2), (1, 3), (0, 3))

    M = np.zeros((4, 4))
    B = np.zeros((4, N_VARIABLES))
    for j, (a, b) in enumerate(positions):
        e1 = np.zeros(4)
        e2 = np.zeros(4)
        e1[a], e1[b] = lam1 * c, -lam1 * s
        e2[a], e2[b] = lam2 * s, lam2 * c
        M += np.outer(e1, e1) + np.outer(e2, e2)
        B[:, j] = math.sqrt(2) * e1
        B[:, 4 + j] = math.sqrt(2) * e2
    return M, B


def poly_mul(
    a: SparsePoly,
    b: SparsePoly,
    cap: int | None = None,
    bound: MultiDegree | None = None,
) -> SparsePoly:
    """Multiply two polynomials, discarding terms above ``cap`` or ``bound``."""
    bound = bound if bound is not None else a.bound or b.bound
    terms: dict[MultiDegree, Number] = {}
    for da, ca in a.terms.items():
        for db, cb in b.terms.items():
            d = tuple(x + y for x, y in zip(da, db))
            if not _fits(d, cap, bound):
                continue
            terms[d] = terms.get(d, 0) + ca * cb
    return SparsePoly(terms, cap=cap, bound=bound)


def exp_truncated(
    q: QuadraticForm8,
    cap: int,
    bound: MultiDegree | None = None,
) -> SparsePoly:
    """Expand exp(q) up to total degree ``cap``.

    q is homogeneous of degree 2, so the series stops at order cap // 2.
    With a ``bound``, only monomials whose exponents stay below it are kept.
    """
    q_poly = q.to_poly()
    term = SparsePoly({zero_degree(): 1}, cap=cap, bound=bound)
    result = term
    for p in range(1, cap // 2 + 1):
        term = poly_mul(term, q_poly, cap=cap, bound=bound) * Fraction(1, p)
        if not term.terms:
            break
        result = result + term
    logger.debug("Expanded exp(q) to cap %d with %d terms", cap, len(result))
    return result


def extract_coefficient(p: SparsePoly, d: MultiDegree) -> Number:
    """The coefficient of monomial ``d`` in ``p``, or 0 if absent."""
    if len(d) != N_VARIABLES:
        raise ValueError(f"Expected a degree tuple of length {N_VARIABLES}, got {d}")
    return p.terms.get(tuple(d), 0)
