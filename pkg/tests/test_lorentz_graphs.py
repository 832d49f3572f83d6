import math

import numpy as np
import pytest

from solitonlab import lorentz_graphs as L
from solitonlab.chart_calculus import euclidean, round_sphere
from solitonlab.errors import GeometryError, NotASolitonError, SpacelikeViolation
from solitonlab.numerics import jets as J
from solitonlab.soliton_zoo import grim_reaper


@pytest.fixture(scope="module")
def grim():
    return grim_reaper(-1)


def flat_graph(u, eps=-1, soliton=False, n=2):
    return L.GraphHypersurface(L.ProductSpace(euclidean(n), eps), u, soliton=soliton)


def test_zero_graph_is_the_base():
    g = flat_graph(lambda x, y: 0.0 * x)
    m = L.induced_metric(g)
    assert np.allclose(m.at((0.3, 0.1)), np.eye(2))
    nuM, nuR = L.unit_normal(g, (0.3, 0.1))
    assert np.allclose(nuM, 0) and nuR == 1.0
    assert np.allclose(L.shape_operator(g, (0.3, 0.1)), 0)
    assert L.mean_curvature(g, (0.3, 0.1)) == 0.0


def test_grim_induced_metric(grim):
    m = L.induced_metric(grim)
    assert m.at((1.0, 0.0))[0, 0] == pytest.approx(1 / math.cosh(1.0) ** 2, rel=1e-13)


def test_grim_normal(grim):
    nuM, nuR = L.unit_normal(grim, (0.0, 0.0))
    assert np.allclose(nuM, 0) and nuR == pytest.approx(1.0)
    assert L.unit_normal(grim, (1.0, 0.0))[1] == pytest.approx(math.cosh(1.0), rel=1e-13)


@pytest.mark.parametrize("x1", [0.0, 0.5, 2.0, -3.0])
def test_grim_mean_curvature(grim, x1):
    assert L.mean_curvature(grim, (x1, 0.2)) == pytest.approx(math.cosh(x1), rel=1e-12)


def test_grim_residuals():
    for eps, lim in ((-1, 5.0), (1, 1.5)):
        g = grim_reaper(eps)
        res = [abs(L.soliton_residual(g, (x, 0.0))) for x in np.linspace(-lim, lim, 101)]
        assert max(res) < 1e-10


def test_parabola_residual():
    g = flat_graph(lambda x, y: x * x)
    assert L.soliton_residual(g, (0.0, 0.0)) == pytest.approx(1.0, abs=1e-14)


def test_height_gradient(grim):
    assert L.height_gradient_check(grim, (0.0, 0.0)).value == pytest.approx(0.0, abs=1e-14)
    p = grim.at((1.0, 0.0))
    dh = p.uJ.gradient()
    assert float(dh @ p.ginv0 @ dh) == pytest.approx(math.sinh(1.0) ** 2, rel=1e-12)


def test_nu_E(grim):
    lo, mid, hi = L.nu_E_bounds(grim, (0.0, 0.0))
    assert mid == pytest.approx(1.0)
    lo, mid, hi = L.nu_E_bounds(grim, (1.0, 0.0))
    assert mid == pytest.approx(math.cosh(2.0), rel=1e-12)
    assert lo <= mid < hi


def test_identity_checks_on_grim(grim, rng):
    for x in rng.uniform(-3, 3, 10):
        p = (float(x), float(rng.uniform(-1, 1)))
        X = L.sample_unit_tangent(grim, p, rng)
        for res in (
            L.height_gradient_check(grim, p),
            L.hessian_height_check(grim, p, X),
            L.drift_laplacian_H_check(grim, p),
            L.gauss_equation_ricci_check(grim, p, X),
            L.nu_E_relation_check(grim, p),
        ):
            assert res.passes(1e-6)
        assert L.qiu_chen_inequality_check(grim, p).passes(1e-8)
        assert L.bakry_emery_check(grim, p, X, lambda r: math.cosh(3.0), 0.0, 0.0).passes(1e-8)


def test_grim_origin_exact_terms(grim):
    # H = c at the vertex: f = -1/sqrt(2), 1 - f^2 = 1/2
    res = L.qiu_chen_inequality_check(grim, (0.0, 0.0))
    assert res.value >= 0
    assert L.qiu_chen_slack_from_values(-1.0, 0.0, 0.0, 1.0, 2) == 0.0


def test_gauss_equation_on_sphere_base():
    space = L.ProductSpace(round_sphere(), -1)
    g = L.GraphHypersurface(space, lambda t, p: 0.2 * J.sin(t) * J.cos(p))
    assert g.at((1.0, 0.5)).self_adjoint_defect < 1e-12
    rng = np.random.default_rng(3)
    X = L.sample_unit_tangent(g, (1.0, 0.5), rng)
    assert L.gauss_equation_ricci_check(g, (1.0, 0.5), X).passes(1e-10)


def test_lemma_X(rng):
    et = np.array([0.0, 0.0, 0.0, 1.0])
    xE, nE, d = L.lemma_X_property(et, np.array([1.0, 0.0, 0.0, 0.0]))
    assert xE == 1.0 == nE
    for _ in range(200):
        nu, X = L.sample_lorentz_pair(3, rng, coplanar=True)
        xE, nE, d = L.lemma_X_property(nu, X)
        assert xE == pytest.approx(nE, rel=1e-12)
        nu, X = L.sample_lorentz_pair(3, rng)
        xE, nE, d = L.lemma_X_property(nu, X)
        assert xE <= nE * (1 + 1e-12)
    with pytest.raises(ValueError):
        L.lemma_X_property(et, et)


def test_error_paths(grim):
    with pytest.raises(NotASolitonError):
        L.height_gradient_check(flat_graph(lambda x, y: x * x), (0.0, 0.0))
    with pytest.raises(SpacelikeViolation):
        flat_graph(lambda x, y: 2.0 * x).at((0.0, 0.0))
    with pytest.raises(GeometryError):
        L.nu_E_relation_check(grim_reaper(1), (0.1, 0.0))
    with pytest.raises(ValueError):
        L.ProductSpace(euclidean(2), 0)
    with pytest.raises(ValueError):
        flat_graph(lambda x, y: x).__class__(L.ProductSpace(euclidean(2)), lambda x, y: x, c=0.0)
    with pytest.raises(L.PreconditionError):
        L.bakry_emery_check(grim, (2.0, 0.0), (1.0, 0.0), lambda r: 1.0, 0.0, 0.0)
