import math

import numpy as np
import pytest
from scipy.integrate import quad

from solitonlab.numerics.quadrature import QuadratureError, cumulative_integral, gauss_legendre_panels, quad_adaptive


def test_unit():
    assert quad_adaptive(lambda t: np.ones_like(t), 0.0, 1.0) == pytest.approx(1.0, abs=1e-14)


def test_sech_total_is_pi():
    v = quad_adaptive(lambda t: 1 / np.cosh(t), -20.0, 20.0, tol=1e-12)
    assert abs(v - math.pi) < 1e-6
    # tails beyond 20 are 4 e^-20 at most
    assert abs(v - 4 * math.atan(math.tanh(10.0))) < 1e-12


def test_logarithm():
    assert quad_adaptive(lambda t: 1 / (t + 1), 0.0, math.e - 1) == pytest.approx(1.0, abs=1e-10)


def test_kink_with_breakpoint():
    v = quad_adaptive(lambda t: np.abs(t - 0.3), 0.0, 1.0, breakpoints=[0.3])
    assert v == pytest.approx(0.5 * 0.09 + 0.5 * 0.49, abs=1e-13)


def test_against_scipy():
    f = lambda t: np.exp(-t) * np.sin(3 * t) ** 2
    ref, _ = quad(f, 0, 7, epsabs=1e-13, epsrel=1e-13)
    assert quad_adaptive(f, 0.0, 7.0, tol=1e-12) == pytest.approx(ref, abs=1e-11)


def test_nonintegrable_raises():
    with pytest.raises(QuadratureError):
        quad_adaptive(lambda t: 1 / t, 0.0, 1.0, max_panels=200)


def test_cumulative_and_panels():
    grid = np.linspace(0, 2, 9)
    c = cumulative_integral(np.cos, grid)
    assert np.allclose(c, np.sin(grid), atol=1e-11)
    x, w = gauss_legendre_panels(0.0, 3.0, 4)
    assert np.sum(w * x**5) == pytest.approx(3.0**6 / 6, rel=1e-14)
