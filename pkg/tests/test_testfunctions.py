import numpy as np
import pytest

from steinapprox.errors import ConfigError
from steinapprox.quadrature import central_difference
from steinapprox.testfunctions import (get_testfunction, make_bump, make_constant, make_linear,
                                       make_logistic_scaled, make_sin)

GRID = np.linspace(-8, 8, 16001)


@pytest.mark.parametrize("h", [make_sin(), make_bump(), make_logistic_scaled(), make_logistic_scaled(2.0)],
                         ids=lambda h: h.name)
def test_norms_are_sup_of_analytic_derivatives(h):
    for k in range(1, 5):
        sup = np.max(np.abs(h.derivative(k, GRID)))
        assert sup <= h.norms.norm(k) * (1 + 1e-9)
        assert sup >= h.norms.norm(k) * (1 - 1e-4), k


@pytest.mark.parametrize("h", [make_sin(), make_bump(), make_logistic_scaled()], ids=lambda h: h.name)
def test_analytic_derivatives_match_finite_differences(h):
    x = np.linspace(-3, 3, 13)
    for k in range(1, 5):
        fd = central_difference(lambda y: h(y), x, k, 1e-2)
        # fourth differences carry ~1e-6 stencil error at this step
        assert np.allclose(fd, h.derivative(k, x), atol=1e-6 if k < 4 else 1e-5), k


def test_presets_values():
    assert make_bump().norms.norm(1) == pytest.approx(np.exp(-0.5))
    assert make_logistic_scaled().norms.norm(1) == pytest.approx(0.25)
    lin = make_linear()
    assert lin.name == "linear_w1" and lin.norms.norm(1) == 1 and lin.norms.norm(2) == 0
    assert not lin.bounded
    c = make_constant(2.0)
    assert c.is_constant and c(np.array([1.0, 5.0])).tolist() == [2.0, 2.0]


def test_registry_and_norm_override():
    h = get_testfunction({"name": "sin", "norms": [0, 0, 0, 0]})
    assert h.is_constant is True
    assert get_testfunction("bump").name == "bump"
    with pytest.raises(ConfigError) as exc:
        get_testfunction({"name": "cosine"})
    assert exc.value.field == "h"
    with pytest.raises(ConfigError):
        get_testfunction({"name": "sin", "norms": [1, -1]})
