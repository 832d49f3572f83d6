import numpy as np
import pytest

from solitonlab.chart_calculus import conformal_plane, euclidean
from solitonlab.errors import MetricError
from solitonlab.numerics import shortest_path as sp
from solitonlab.numerics.quadrature import quad_adaptive

BOX = ((0.0, 4.0), (0.0, 4.0))


def test_euclidean_three_four_five():
    d = sp.grid_shortest_path(euclidean(), ((0, 3), (0, 4)), 60, (0, 0), (3, 4))
    assert d == pytest.approx(5.0, rel=0.02)


def test_constant_conformal_rescale():
    m = conformal_plane(lambda y: 2.0 + 0.0 * y)
    d = sp.grid_shortest_path(m, ((0, 1), (-0.5, 0.5)), 40, (0, 0), (1, 0))
    assert d == pytest.approx(0.5, rel=0.02)


def test_vertical_line_in_strip_metric(phi):
    box = ((-1.0, 1.0), (0.0, 0.9))
    d = sp.grid_shortest_path(phi.metric(), box, 90, (0.0, 0.0), (0.0, 0.9))
    ref = quad_adaptive(lambda t: 1 / phi.value(t), 0.0, 0.9, tol=1e-12)
    assert d == pytest.approx(ref, rel=0.03)


@pytest.mark.skipif(sp.BACKEND != "cython", reason="compiled kernel not built")
def test_backends_bit_identical():
    m = conformal_plane(lambda y: 1.0 + 0.3 * y * y)
    a = sp.grid_distance_field(m, ((-1, 1), (-1, 1)), 30, (0.1, -0.2), backend="python")
    b = sp.grid_distance_field(m, ((-1, 1), (-1, 1)), 30, (0.1, -0.2), backend="cython")
    assert np.array_equal(a.dist, b.dist)


def test_stencil_sizes():
    assert len(sp.stencil(1)) == 8
    assert len(sp.stencil(3)) == 32
    with pytest.raises(ValueError):
        sp.stencil(0)


def test_distance_field_triangle_inequality():
    f = sp.grid_distance_field(euclidean(), BOX, 20, (0, 0), stencil_radius=2)
    assert f.at((0, 0)) == 0.0
    assert f.at((4, 4)) <= f.at((2, 2)) + sp.grid_shortest_path(euclidean(), BOX, 20, (2, 2), (4, 4), 2) + 1e-12


def test_richardson_cancels_first_order():
    assert sp.richardson(1.2, 1.1) == pytest.approx(1.0)


def test_indefinite_metric_rejected():
    bad = lambda x, y: np.array([[np.ones_like(x), 0 * x], [0 * x, -np.ones_like(x)]])
    with pytest.raises(MetricError):
        sp.grid_shortest_path(bad, BOX, 10, (0, 0), (1, 1))


def test_point_outside_box():
    with pytest.raises(ValueError):
        sp.grid_shortest_path(euclidean(), BOX, 10, (0, 0), (5, 1))


def test_unknown_backend():
    with pytest.raises(ValueError):
        sp.grid_shortest_path(euclidean(), BOX, 10, (0, 0), (1, 1), backend="fortran")


def test_pure_python_fallback_selected_by_env():
    import os
    import subprocess
    import sys

    env = dict(os.environ, SOLITONLAB_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from solitonlab.numerics import BACKEND; print(BACKEND)"],
                         capture_output=True, text=True, env=env, check=True).stdout.strip()
    assert out == "python"
