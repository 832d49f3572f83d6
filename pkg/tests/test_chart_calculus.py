import math

import numpy as np
import pytest

from solitonlab import chart_calculus as cc
from solitonlab.errors import DegeneratePlaneError, MetricError
from solitonlab.numerics import jets as J


def test_euclidean_is_flat():
    m = cc.euclidean(3)
    assert np.all(cc.christoffel(m, (0.1, 0.2, 0.3)) == 0)
    assert np.all(cc.riemann(m, (0.1, 0.2, 0.3)) == 0)


def test_polar_christoffel():
    G = cc.christoffel(cc.polar_plane(), (2.0, 0.4))
    assert G[0, 1, 1] == pytest.approx(-2.0)
    assert G[1, 0, 1] == pytest.approx(0.5)


def test_conformal_christoffel_hand_formula():
    # g = phi^-2 (dx^2 + dy^2), w = -ln phi: Gamma^y_xx = -w_y, Gamma^x_xy = w_y, Gamma^y_yy = w_y
    phi = lambda y: 1 + 0.3 * y * y
    y0 = 0.7
    wy = -(0.6 * y0) / phi(y0)
    G = cc.christoffel(cc.conformal_plane(phi), (0.2, y0))
    assert G[1, 0, 0] == pytest.approx(-wy, rel=1e-13)
    assert G[0, 0, 1] == pytest.approx(wy, rel=1e-13)
    assert G[1, 1, 1] == pytest.approx(wy, rel=1e-13)


def test_hyperbolic_sectional():
    m = cc.hyperbolic_half_plane()
    assert cc.sectional(m, (0.0, 2.0), (1, 0), (0, 1)) == pytest.approx(-1.0, rel=1e-12)


def test_sphere_sectional_sign():
    assert cc.sectional(cc.round_sphere(), (1.0, 0.3), (1, 0), (0, 1)) == pytest.approx(1.0, rel=1e-12)


def test_degenerate_plane():
    with pytest.raises(DegeneratePlaneError):
        cc.sectional(cc.euclidean(), (0, 0), (1, 1), (2, 2))


def test_metric_validation():
    m = cc.ChartMetric(2, lambda x, y: [[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(MetricError):
        cc.riemann(m, (0, 0))
    with pytest.raises(MetricError):
        cc.gauss_curvature_conformal(lambda y: y - 1.0, 0.0)


def _random_metric(rng):
    a, b, c = rng.uniform(-0.3, 0.3, 3)
    return cc.ChartMetric(
        3,
        lambda x, y, z: [
            [1 + a * x * x + 0.1 * J.sin(y), 0.1 * x * z, 0.0],
            [0.1 * x * z, 2 + b * J.cos(z), 0.05 * y],
            [0.0, 0.05 * y, 1.5 + c * x * y],
        ],
    )


def test_riemann_symmetries(rng):
    for _ in range(5):
        m = _random_metric(rng)
        x = rng.uniform(-0.5, 0.5, 3)
        R = cc.riemann(m, x)
        scale = np.max(np.abs(R))
        assert np.max(np.abs(R + R.transpose(1, 0, 2, 3))) <= 1e-12 * scale
        assert np.max(np.abs(R + R.transpose(0, 1, 3, 2))) <= 1e-12 * scale
        assert np.max(np.abs(R - R.transpose(2, 3, 0, 1))) <= 1e-12 * scale
        bianchi = R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)
        assert np.max(np.abs(bianchi)) <= 1e-12 * scale
        Ric = cc.ricci(m, x)
        assert np.allclose(Ric, Ric.T, atol=1e-12 * scale)


def test_hessian_euclidean_line():
    m = cc.euclidean(1)
    assert cc.hessian(m, lambda x: x * x, (0.7,))[0, 0] == pytest.approx(2.0)
    assert cc.laplacian(m, lambda x: x * x, (0.7,)) == pytest.approx(2.0)


def test_laplacian_two_ways():
    m = cc.hyperbolic_half_plane()
    f = lambda x, y: J.log(y) + x * y
    for p in [(0.0, 1.0), (0.3, 2.5), (-1.0, 0.4)]:
        assert cc.laplacian(m, f, p) == pytest.approx(cc.laplacian_divergence(m, f, p), abs=1e-10)


def test_drift_laplacian_examples():
    m = cc.euclidean(1)
    assert cc.drift_laplacian(m, lambda x: x, lambda x: x * x, (1.0,)) == pytest.approx(-2.0)
    m2 = cc.euclidean(2)
    h = lambda x, y: x * x + y * y
    assert cc.drift_laplacian(m2, h, h, (0.0, 0.0)) == pytest.approx(4.0)
    g = lambda x, y: x * y + 0 * x
    assert cc.drift_laplacian(m2, g, lambda x, y: 3.0 + 0 * x, (0.4, 0.5)) == pytest.approx(cc.laplacian(m2, g, (0.4, 0.5)))


def test_conformal_curvature_closed_form_against_riemann(rng):
    phi = lambda y: 1.2 + 0.4 * J.sin(y) if not isinstance(y, float) else 1.2 + 0.4 * math.sin(y)
    m = cc.conformal_plane(phi)
    for y in rng.uniform(-2, 2, 50):
        K_closed = cc.gauss_curvature_conformal(phi, float(y))
        K_tensor = cc.sectional(m, (0.0, float(y)), (1, 0), (0, 1))
        assert K_closed == pytest.approx(K_tensor, rel=1e-10, abs=1e-12)


def test_conformal_flat_and_linear():
    assert cc.gauss_curvature_conformal(lambda y: 1.0 + 0 * y, 0.3) == 0.0
    # phi = 1 - y on y > 0: K = -(phi'^2 - phi phi'') = -1
    assert cc.gauss_curvature_conformal(lambda y: 1.0 - y, 0.75) == pytest.approx(-1.0)
