import math
from fractions import Fraction

import numpy as np
import pytest

from oscillator_purity.polyalg import (
    N_VARIABLES,
    VARIABLES,
    QuadraticForm8,
    SparsePoly,
    exp_truncated,
    extract_coefficient,
    overlap_matrices,
    poly_mul,
    target_degree,
    zero_degree,
)
from oscillator_purity.purity import kernel_params

a1 = SparsePoly.variable("alpha1")
b1 = SparsePoly.variable("beta1")
b2 = SparsePoly.variable("beta2")
one = SparsePoly.constant(1)


def _degree(**exponents):
    return tuple(exponents.get(name, 0) for name in VARIABLES)


def test_product_of_binomials():
    p = poly_mul(one + a1, one + b1, cap=2)
    assert p == one + a1 + b1 + SparsePoly({_degree(alpha1=1, beta1=1): 1})


def test_product_truncates_above_cap():
    assert len(poly_mul(a1, a1, cap=1)) == 0


def test_binomial_square():
    p = poly_mul(a1 + b2, a1 + b2, cap=2)
    assert p.terms == {
        _degree(alpha1=2): 1,
        _degree(alpha1=1, beta2=1): 2,
        _degree(beta2=2): 1,
    }


def test_bound_discards_per_variable():
    p = poly_mul(one + a1, one + a1, bound=_degree(alpha1=1))
    assert p.terms == {zero_degree(): 1, _degree(alpha1=1): 2}


def test_zero_coefficients_are_dropped():
    assert len(a1 + a1 * -1) == 0
    assert SparsePoly({zero_degree(): 0}).terms == {}


@pytest.fixture
def polys():
    p = SparsePoly({_degree(alpha1=1): Fraction(1, 2), _degree(beta1=2): -3}) + one
    q = SparsePoly({_degree(alpha2=1, beta2=1): Fraction(2, 3)}) + a1
    r = SparsePoly({_degree(alpha1=2): Fraction(-1, 5)}) + b2 * 7
    return p, q, r


def test_ring_axioms(polys):
    p, q, r = polys
    cap = 6
    assert poly_mul(p, q, cap) == poly_mul(q, p, cap)
    left = poly_mul(poly_mul(p, q, cap), r, cap)
    assert left == poly_mul(p, poly_mul(q, r, cap), cap)
    assert poly_mul(p, q + r, cap) == poly_mul(p, q, cap) + poly_mul(p, r, cap)
    assert poly_mul(p, one, cap) == p


def test_exp_of_zero_is_one():
    assert exp_truncated(QuadraticForm8(), cap=8) == one


def test_exp_of_scalar_square():
    c = Fraction(3, 2)
    p = exp_truncated(QuadraticForm8({(0, 0): c}), cap=4)
    assert p.terms == {
        zero_degree(): 1,
        _degree(alpha1=2): c,
        _degree(alpha1=4): c**2 / 2,
    }


def test_exp_is_additive():
    q1 = QuadraticForm8({(0, 1): Fraction(1, 2), (2, 2): -1})
    q2 = QuadraticForm8({(0, 5): 3, (1, 1): Fraction(1, 3)})
    cap = 6
    assert exp_truncated(q1 + q2, cap) == exp_truncated(q1, cap) * exp_truncated(
        q2, cap
    )


def test_extract_coefficient():
    assert extract_coefficient(one + a1, zero_degree()) == 1
    series = exp_truncated(QuadraticForm8({(0, 4): 0.75}), cap=2)
    assert extract_coefficient(series, _degree(alpha1=1)) == 0
    assert extract_coefficient(series, _degree(alpha1=1, beta1=1)) == 0.75


def test_extract_coefficient_checks_length():
    with pytest.raises(ValueError, match="length"):
        extract_coefficient(one, (0, 0))


def test_invalid_index_pair():
    with pytest.raises(ValueError, match="Invalid index pair"):
        QuadraticForm8({(3, 1): 1.0})


def test_kernel_slot_counts():
    slots = QuadraticForm8.slots()
    assert {symbol: len(s) for symbol, s in slots.items()} == {
        "u": 12,
        "v": 4,
        "w": 4,
        "t": 8,
        "s": 8,
    }
    pairs = [slot.pair for s in slots.values() for slot in s]
    assert len(set(pairs)) == len(pairs) == N_VARIABLES * (N_VARIABLES + 1) // 2
    assert sum(slot.is_square for slot in slots["u"]) == N_VARIABLES


def test_from_kernel_has_every_monomial():
    assert len(QuadraticForm8.from_kernel(kernel_params(0.7, 1.0))) == 36


@pytest.mark.parametrize(
    ("eta", "theta"), [(0.0, math.pi / 2), (0.7, 1.0), (-1.3, 2.4), (2.0, 0.3)]
)
def test_gaussian_integral_reproduces_kernel(eta, theta):
    derived = QuadraticForm8.from_gaussian_integral(eta, theta)
    kernel = QuadraticForm8.from_kernel(kernel_params(eta, theta))
    assert derived.isclose(kernel, atol=1e-10)


def test_overlap_matrix_is_positive_definite():
    M, B = overlap_matrices(0.9, 1.2)
    assert M.shape == (4, 4)
    assert B.shape == (4, N_VARIABLES)
    assert np.allclose(M, M.T)
    assert np.all(np.linalg.eigvalsh(M) > 0)


def test_term_count_stays_bounded():
    form = QuadraticForm8.from_kernel(kernel_params(0.4, 1.1))
    full = exp_truncated(form, cap=8)
    assert full.max_degree == 8
    assert len(full) < math.comb(16, 8)
    bounded = exp_truncated(form, cap=8, bound=target_degree(1, 1))
    assert len(bounded) < len(full)
    assert all(max(d) <= 1 for d in bounded.terms)


def test_exp_matches_power_series_of_a_single_monomial():
    c = Fraction(-2, 7)
    series = exp_truncated(QuadraticForm8({(1, 6): c}), cap=8)
    for e in range(5):
        d = [0] * N_VARIABLES
        d[1] = d[6] = e
        assert extract_coefficient(series, tuple(d)) == c**e / math.factorial(e)
    assert len(series) == 5
    assert all(d[1] == d[6] for d in series.terms)
