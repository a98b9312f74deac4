import math

import numpy as np
import pytest
from scipy import integrate

from steinapprox.errors import AccuracyError, DimensionError, DomainError, HypothesisError
from steinapprox.gfunctions import make_monomial, make_pair_product, make_product, make_square_sum
from steinapprox.stein_solver import (SolverConfig, expected_derivative_at_Z, f_derivative,
                                      psi_residual, reference_value, solve_f, solve_psi,
                                      stein_residual)
from steinapprox.testfunctions import make_constant, make_linear, make_sin

SIN = make_sin()
SQ = make_square_sum(1)


def classical_f_prime(w, H, mean):
    """f'(w) = e^{w^2/2} int_{-inf}^w (H(t) - E H(Z)) e^{-t^2/2} dt, written via the
    upper tail for w > 0 (both are equal because the integrand has mean zero)."""
    f = lambda t: (H(t) - mean) * math.exp(-(t * t - w * w) / 2)
    if w <= 0:
        val = integrate.quad(f, -np.inf, w, epsabs=1e-13, limit=400)[0]
    else:
        val = -integrate.quad(f, w, np.inf, epsabs=1e-13, limit=400)[0]
    return val


def test_first_derivative_matches_classical_solution():
    H = lambda t: math.sin(t * t)
    mean = reference_value(SQ, SIN)
    ws = np.array([-2.0, -0.5, 0.0, 1.0, 2.5])
    got = f_derivative(1, ws, SQ, SIN)
    want = [classical_f_prime(w, H, mean) for w in ws]
    assert np.allclose(got, want, atol=1e-7)


def test_reference_value_is_gaussian_mean():
    # E sin(Z^2) = Im E e^{i Z^2} = Im (1 - 2i)^{-1/2}
    want = ((1 - 2j) ** -0.5).imag
    assert reference_value(SQ, SIN) == pytest.approx(want, abs=1e-12)


def test_constant_h_gives_zero_solution():
    h = make_constant(3.0)
    # zero up to the rounding of two weight sums
    assert np.max(np.abs(solve_f(np.linspace(-2, 2, 5), SQ, h))) < 1e-12
    assert np.max(stein_residual(np.linspace(-2, 2, 5), SQ, h)) < 1e-12
    assert np.max(np.abs(solve_psi(3, np.array([0.0, 1.0]), SQ, h))) < 1e-12


def test_even_g_gives_even_solution():
    a, b = solve_f(np.array([1.0, -1.0]), SQ, SIN)
    assert abs(a - b) < 1e-8
    pts = np.array([[0.7, -1.2], [-0.7, 1.2]])
    fa, fb = solve_f(pts, make_pair_product(1), SIN)
    assert abs(fa - fb) < 1e-8


def test_identity_g_residual():
    res = stein_residual(np.linspace(-3, 3, 13), make_monomial(1), SIN)
    assert np.max(res) < 1e-6


def test_residual_small_one_and_two_dims():
    assert np.max(stein_residual(np.linspace(-3, 3, 7), SQ, SIN)) < 1e-6
    axis = np.linspace(-2, 2, 3)
    pts = np.array([[x, y] for x in axis for y in axis])
    assert np.max(stein_residual(pts, make_pair_product(1), SIN)) < 1e-6


def test_dimension_limit():
    with pytest.raises(DimensionError):
        solve_f(np.zeros((1, 3)), make_product(3), SIN)


def test_expected_derivative_examples():
    assert abs(expected_derivative_at_Z(3, SQ, SIN)) < 1e-6
    assert abs(expected_derivative_at_Z(1, SQ, SIN)) < 1e-6
    # h(x) = x, g(w) = w: -E h'(Z) = -1
    assert expected_derivative_at_Z(1, make_monomial(1), make_linear()) == pytest.approx(-1.0, abs=1e-7)
    # integration by parts: E f'''(Z) = -(1/3) E[He_3(Z) H(Z)]
    he3 = lambda z: (z ** 3 - 3 * z) * math.sin(z ** 3) * math.exp(-z * z / 2) / math.sqrt(2 * math.pi)
    oracle = -integrate.quad(he3, -12, 12, limit=800, epsabs=1e-12)[0] / 3
    got = expected_derivative_at_Z(3, make_monomial(3), SIN)
    assert got == pytest.approx(oracle, abs=1e-6)
    assert abs(got) > 1e-3


def test_psi_requires_odd_order_and_even_g():
    with pytest.raises(HypothesisError):
        solve_psi(3, 0.0, make_monomial(3), SIN)
    with pytest.raises(HypothesisError):
        solve_psi(2, 0.0, SQ, SIN)


def test_psi_residual_small():
    res = psi_residual(3, np.array([0.0, 1.0, -1.5]), SQ, SIN)
    assert np.max(res) < 1e-3


def test_psi_is_odd_for_even_g():
    a, b = solve_psi(3, np.array([0.8, -0.8]), SQ, SIN)
    assert abs(a + b) < 1e-8


def test_config_validation_and_accuracy_error():
    with pytest.raises(DomainError):
        SolverConfig(outer_nodes=8)
    with pytest.raises(DomainError):
        SolverConfig(fd_step=0.5)
    # sin(w^3) on a thin inner rule: fine and coarse rules disagree beyond 1e-10
    cfg = SolverConfig(outer_nodes=48, inner_panels=48, tol=1e-10)
    with pytest.raises(AccuracyError) as exc:
        solve_f(np.array([0.5, 2.5]), make_monomial(3), make_sin(), cfg)
    assert exc.value.estimate > 1e-10
