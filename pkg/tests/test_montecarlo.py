import math

import numpy as np
import pytest
from scipy import integrate, stats

from steinapprox.errors import DimensionError, DomainError, InsufficientSignalError
from steinapprox.gfunctions import make_pair_product, make_square_sum
from steinapprox.montecarlo import (RatePoint, bound_validity, distance, estimate_EhgW, fit_points,
                                    rate_fit, reference_EhgZ)
from steinapprox.testfunctions import get_testfunction, make_constant, make_linear, make_sin

SQ, SIN = make_square_sum(1), make_sin()
E_SIN_CHI2_1 = ((1 - 2j) ** -0.5).imag


def rademacher_exact(n, H):
    k = np.arange(n + 1)
    w = (2 * k - n) / math.sqrt(n)
    return float(np.dot(stats.binom.pmf(k, n, 0.5), H(w)))


def exponential_exact(n, H):
    # W = (G - n) / sqrt(n) with G ~ Gamma(n)
    law = stats.gamma(n)
    f = lambda x: H((x - n) / math.sqrt(n)) * law.pdf(x)
    lo, hi = law.ppf(1e-15), law.ppf(1 - 1e-15)
    return integrate.quad(f, lo, hi, limit=800, epsabs=1e-13)[0]


def test_constant_h():
    h = make_constant(1.5)
    est = estimate_EhgW(SQ, h, "standardized_exponential", 9, 10_000, seed=1)
    assert est.mean == 1.5 and est.stderr == 0
    d = distance(SQ, h, "standardized_exponential", 9, 10_000, seed=1)
    assert d.mean == 0 and d.stderr == 0


def test_second_moment_through_linear_h():
    est = estimate_EhgW(SQ, make_linear(), "rademacher", 7, 1_000_000, seed=2)
    assert abs(est.mean - 1) < 4 * est.stderr


def test_reproducible():
    a = estimate_EhgW(SQ, SIN, "two_point(0.3)", 12, 100_000, seed=5)
    b = estimate_EhgW(SQ, SIN, "two_point(0.3)", 12, 100_000, seed=5, jobs=4)
    assert a == b


def test_reference_values():
    assert reference_EhgZ(SQ, make_linear()).mean == pytest.approx(1, abs=1e-10)
    assert reference_EhgZ(make_square_sum(2), make_linear()).mean == pytest.approx(2, abs=1e-9)
    assert reference_EhgZ(SQ, SIN).mean == pytest.approx(E_SIN_CHI2_1, abs=1e-12)
    quad = reference_EhgZ(make_pair_product(1), SIN)
    mc = reference_EhgZ(make_pair_product(1), SIN, method="mc", N=10_000_000, seed=3)
    assert abs(quad.mean - mc.mean) < 4 * mc.stderr
    with pytest.raises(DimensionError):
        reference_EhgZ(make_square_sum(3), SIN)


@pytest.mark.parametrize("n", [4, 25, 100])
def test_distance_matches_exact_binomial_law(n):
    H = lambda w: np.sin(w * w)
    exact = rademacher_exact(n, H) - E_SIN_CHI2_1
    est = distance(SQ, SIN, "rademacher", n, 1_000_000, seed=10 + n)
    assert abs(est.mean - exact) < 4 * est.stderr


@pytest.mark.parametrize("n", [16, 64])
def test_distance_matches_exact_gamma_law(n):
    H = lambda w: np.sin(w * w)
    exact = exponential_exact(n, H) - E_SIN_CHI2_1
    est = distance(SQ, SIN, "standardized_exponential", n, 2_000_000, seed=n)
    assert abs(est.mean - exact) < 4 * est.stderr


def test_exact_null():
    for n in (16, 64):
        est = distance(SQ, SIN, "standard_normal", n, 1_000_000, seed=n)
        assert abs(est.mean) < 4 * est.stderr


def test_distance_shrinks_with_n():
    d16 = distance(SQ, SIN, "rademacher", 16, 10_000_000, seed=1)
    d64 = distance(SQ, SIN, "rademacher", 64, 10_000_000, seed=1)
    assert abs(d16.mean) > 3 * d16.stderr and abs(d64.mean) > 3 * d64.stderr
    assert abs(d64.mean) < abs(d16.mean)


def test_monte_carlo_reference_above_two_dims():
    # E sin(chi^2_3) = Im (1 - 2i)^{-3/2}
    g = make_square_sum(3)
    est = distance(g, SIN, "standard_normal", 5, 200_000, seed=4)
    assert abs(est.mean) < 4 * est.stderr
    ref = reference_EhgZ(g, SIN, method="mc", N=1_000_000, seed=9)
    assert abs(ref.mean - ((1 - 2j) ** -1.5).imag) < 4 * ref.stderr


def test_fit_points_recovers_slope():
    pts = [RatePoint(n, 3.0 * n ** -0.75, 1e-6) for n in (16, 32, 64, 128)]
    fit = fit_points(pts)
    assert fit.slope == pytest.approx(-0.75, abs=1e-12)
    noisy = pts + [RatePoint(256, 1e-7, 1e-6)]
    fit = fit_points(noisy)
    assert [p.n for p in fit.excluded] == [256]
    assert fit.slope == pytest.approx(-0.75, abs=1e-12)


def test_insufficient_signal_and_grid_checks():
    with pytest.raises(InsufficientSignalError):
        rate_fit(SQ, SIN, "standard_normal", (16, 32, 64, 128), N=200_000, seed=1)
    with pytest.raises(DomainError):
        rate_fit(SQ, SIN, "rademacher", (16, 32, 64), N=200_000)
    with pytest.raises(DomainError):
        rate_fit(SQ, SIN, "rademacher", (16, 32, 50, 128), N=200_000)


def test_bound_validity_cor42():
    rep = bound_validity(SQ, SIN, "rademacher", (16, 32, 64, 128, 256), "cor42", N=1_000_000, seed=3)
    assert rep.all_ok and not rep.violations
    assert all(r.margin >= 0 for r in rep.rows)


def test_bound_validity_cor41_far_above_distance():
    rep = bound_validity(SQ, SIN, "rademacher", (100,), "cor41", N=1_000_000, seed=3)
    row = rep.rows[0]
    assert row.bound_total == pytest.approx(9.1098, abs=1e-4)
    assert abs(row.delta_mean) < 0.1


def test_bound_validity_trivial_scenario():
    h = get_testfunction({"name": "constant", "value": 2.0})
    rep = bound_validity(SQ, h, "rademacher", (16, 32), "cor42", N=10_000, seed=0)
    for row in rep.rows:
        assert row.bound_total == 0 and row.delta_mean == 0 and row.margin == 0
