import math

import numpy as np
import pytest
from scipy import integrate, special

from oscillator_purity.model import (
    OscillatorSystem,
    QuantumNumbers,
    energy,
    from_synthetic,
    rescale,
)
from oscillator_purity.states import (
    CoherentLabel,
    coherent_state,
    coherent_wavefunction_y,
    ground_state,
    hermite,
    number_state,
    number_wavefunction_y,
    to_normal_modes,
    widths,
)

SYSTEM = OscillatorSystem(m1=2.0, m2=0.5, C1=1.5, C2=0.8, C3=0.3)


def _norm(evaluator, half_width=12.0, n_points=401):
    x = np.linspace(-half_width, half_width, n_points)
    X1, X2 = np.meshgrid(x, x, indexing="ij")
    density = np.abs(evaluator(X1, X2)) ** 2
    return integrate.simpson(integrate.simpson(density, x=x, axis=1), x=x)


@pytest.mark.parametrize("n", range(7))
def test_hermite_matches_scipy(n):
    x = np.linspace(-3, 3, 13)
    assert np.allclose(hermite(n, x), special.eval_hermite(n, x))
    assert hermite(n, 0.5) == pytest.approx(special.eval_hermite(n, 0.5))


def test_hermite_accepts_lists():
    assert np.allclose(hermite(2, [0.0, 1.0]), [-2.0, 2.0])


def test_hermite_rejects_negative_order():
    with pytest.raises(ValueError, match="non-negative"):
        hermite(-1, 0.0)


def test_widths():
    w = widths(from_synthetic(0.8, 1.0, m=2.0, k=0.5), hbar=1.0)
    assert w.lambda1 == pytest.approx(math.exp(0.4))
    assert w.lambda2 == pytest.approx(math.exp(-0.4))
    assert w.lambda1 * w.lambda2 == pytest.approx(1.0)


def test_normal_modes_preserve_length_for_equal_masses():
    p = from_synthetic(0.5, 1.1)
    y1, y2 = to_normal_modes(p, 0.3, -1.2)
    assert y1**2 + y2**2 == pytest.approx(0.3**2 + 1.2**2)


@pytest.mark.parametrize(
    "params", [from_synthetic(0.7, 1.1), from_synthetic(-1.0, 2.6), rescale(SYSTEM)]
)
@pytest.mark.parametrize("n", [(0, 0), (1, 0), (0, 2), (2, 1)])
def test_number_states_are_normalized(params, n):
    assert _norm(number_state(params, QuantumNumbers(*n))) == pytest.approx(1, abs=1e-8)


@pytest.mark.parametrize(
    "label",
    [
        CoherentLabel(0.0, 0.0),
        CoherentLabel(1.2, -0.7),
        CoherentLabel(0.5 + 0.3j, -0.4j),
    ],
)
def test_coherent_states_are_normalized(label):
    psi = coherent_state(from_synthetic(0.6, 0.9), label)
    assert _norm(psi) == pytest.approx(1, abs=1e-8)


def test_complex_label_gives_complex_values():
    psi = coherent_state(from_synthetic(0.6, 0.9), CoherentLabel(0.5j, 0.0))
    assert np.iscomplexobj(psi(np.array([0.1]), np.array([0.2])))
    real = coherent_state(from_synthetic(0.6, 0.9), CoherentLabel(0.5, 0.0))
    assert not np.iscomplexobj(real(np.array([0.1]), np.array([0.2])))


def test_undisplaced_coherent_state_is_the_ground_state():
    p = from_synthetic(1.3, 0.7)
    X1, X2 = np.meshgrid(np.linspace(-3, 3, 9), np.linspace(-2, 2, 7), indexing="ij")
    ground = ground_state(p)(X1, X2)
    assert np.allclose(coherent_state(p, CoherentLabel())(X1, X2), ground)
    assert np.allclose(number_state(p, QuantumNumbers(0, 0))(X1, X2), ground)


def _coherent_generator(p, y1, y2):
    def generate(alpha, beta):
        scale = math.exp(abs(alpha) ** 2 / 2 + abs(beta) ** 2 / 2)
        return scale * coherent_wavefunction_y(
            p, 1.0, CoherentLabel(alpha, beta), y1, y2
        ).real

    return generate


@pytest.mark.parametrize("params", [from_synthetic(0.8, 1.0), rescale(SYSTEM)])
def test_number_states_from_coherent_derivatives(params):
    y1, y2 = np.meshgrid(np.linspace(-1.5, 1.5, 7), np.linspace(-1.2, 1.8, 7))
    generate = _coherent_generator(params, y1, y2)
    h = 5e-4

    d_alpha = (generate(h, 0) - generate(-h, 0)) / (2 * h)
    d_beta = (generate(0, h) - generate(0, -h)) / (2 * h)
    d_both = (
        generate(h, h) - generate(h, -h) - generate(-h, h) + generate(-h, -h)
    ) / (4 * h**2)

    for n, derivative in (((1, 0), d_alpha), ((0, 1), d_beta), ((1, 1), d_both)):
        expected = number_wavefunction_y(params, 1.0, QuantumNumbers(*n), y1, y2)
        assert np.allclose(derivative, expected, rtol=1e-5, atol=1e-8)


def test_label_must_be_finite():
    with pytest.raises(ValueError, match="finite"):
        CoherentLabel(math.inf, 0.0)


@pytest.mark.parametrize("n", [(0, 0), (1, 0), (1, 1), (0, 3)])
def test_parity(n):
    psi = number_state(from_synthetic(0.9, 2.0), QuantumNumbers(*n))
    X1, X2 = np.array([0.3, -1.1, 0.8]), np.array([0.5, 0.2, -0.9])
    assert np.allclose(psi(-X1, -X2), (-1) ** sum(n) * psi(X1, X2))


def _is_product(psi, a=0.4, b=-0.7, c=1.1, d=0.3):
    return math.isclose(psi(a, b) * psi(c, d), psi(a, d) * psi(c, b), rel_tol=1e-12)


def test_coupled_ground_state_does_not_factorize():
    assert not _is_product(ground_state(from_synthetic(0.8, math.pi / 3)))


@pytest.mark.parametrize("theta", [0.0, 1.0, math.pi])
def test_uncoupled_ground_state_factorizes(theta):
    assert _is_product(ground_state(from_synthetic(0.0, theta, division_safe=False)))


def _hamiltonian_residual(system, n, hbar, h=1e-3):
    """max |H psi - E psi| on a small grid, by central differences."""
    p = rescale(system)
    psi = number_state(p, QuantumNumbers(*n), hbar)
    x1, x2 = np.linspace(-1.5, 1.5, 7), np.linspace(-2, 2, 9)
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    d11 = (psi(X1 + h, X2) - 2 * psi(X1, X2) + psi(X1 - h, X2)) / h**2
    d22 = (psi(X1, X2 + h) - 2 * psi(X1, X2) + psi(X1, X2 - h)) / h**2
    potential = (system.C1 * X1**2 + system.C2 * X2**2 + system.C3 * X1 * X2) / 2
    h_psi = (
        -(hbar**2) / (2 * system.m1) * d11
        - hbar**2 / (2 * system.m2) * d22
        + potential * psi(X1, X2)
    )
    e = energy(p, QuantumNumbers(*n), hbar)
    return np.max(np.abs(h_psi - e * psi(X1, X2)))


@pytest.mark.parametrize(
    "system",
    [
        SYSTEM,
        OscillatorSystem(m1=1, m2=1, C1=1, C2=1, C3=1),
        OscillatorSystem(m1=1, m2=1, C1=1, C2=1, C3=-1),
        OscillatorSystem(m1=1, m2=1, C1=1, C2=2, C3=0),
        OscillatorSystem(m1=0.7, m2=1.9, C1=3.0, C2=0.4, C3=-0.9),
    ],
)
@pytest.mark.parametrize("n", [(0, 0), (1, 0), (0, 1), (2, 1)])
def test_schrodinger_equation_in_physical_coordinates(system, n):
    assert _hamiltonian_residual(system, n, hbar=0.8) < 1e-5
