import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from solitonlab import lorentz_graphs as L
from solitonlab.soliton_zoo import (
    PhiProfile,
    ProfileError,
    SmoothStep,
    build_example_curve,
    directrix_length,
    directrix_length_closed_form,
    example_curve_checks,
    grim_reaper,
    growth_ratio_r,
    growth_ratio_rM,
    solve_profile_ode,
)

from conftest import GOLDEN_C


def _d1(f, y, h=1e-4):
    """Fourth-order central difference."""
    return (-f(y + 2 * h) + 8 * f(y + h) - 8 * f(y - h) + f(y - 2 * h)) / (12 * h)


def _C_oracle(beta):
    mpmath.mp.dps = 30
    step = lambda x: 1 / (1 + mpmath.exp(beta * (1 / x - 1 / (1 - x))))
    return float(1 - 2 * mpmath.quad(step, [0, 0.25, 0.5]))


# ------------------------------------------------------------------ phi
@pytest.mark.parametrize("beta", [0.3, 1.0, 2.5])
def test_phi_invariants(beta):
    phi = PhiProfile(beta)
    ys = np.linspace(-0.999, 0.999, 2001)
    v = phi.value(ys)
    assert np.all(v > 0) and np.max(v) <= 2
    assert np.array_equal(phi.value(-ys), v)
    tail = np.abs(ys) >= 0.5
    assert np.max(np.abs(v[tail] - (1 - np.abs(ys[tail])))) < 1e-14
    assert np.all(np.abs(phi.derivative(ys)) <= 1.0)
    assert 0.25 < phi.C < 1.0
    assert phi.derivative(0.0) == 0.0
    assert phi.C == pytest.approx(_C_oracle(beta), rel=1e-13)


def test_golden_constant(phi):
    assert phi.C == pytest.approx(GOLDEN_C, rel=1e-14)
    assert _C_oracle(1.0) == pytest.approx(GOLDEN_C, rel=1e-14)


def test_phi_derivative_against_finite_differences(phi):
    for y in (-0.4, 0.1, 0.3, 0.45):
        h = 1e-5
        fd = (phi.value(y + h) - phi.value(y - h)) / (2 * h)
        assert phi.derivative(y) == pytest.approx(fd, abs=1e-9)


def test_step_symmetry():
    s = SmoothStep(1.0)
    xs = np.linspace(-0.2, 1.2, 301)
    assert np.allclose(s.value(1 - xs), 1 - s.value(xs), atol=1e-15)
    assert s.integral(2.0) == pytest.approx(1.5)
    with pytest.raises(ValueError):
        SmoothStep(50.0)


def test_phi_domain(phi):
    with pytest.raises(ValueError):
        phi.value(1.0)


def test_tail_curvature_is_hyperbolic(phi):
    for y in (0.6, 0.75, 0.9, 0.99):
        assert phi.gauss_curvature(y) == pytest.approx(-1.0, rel=1e-12)
        assert phi.gauss_curvature(-y) == pytest.approx(-1.0, rel=1e-12)


# -------------------------------------------------------------- profile
def test_profile_shape(profile):
    ys = np.linspace(profile.y_lo, profile.y_hi, 4001)
    z = profile.z(ys)
    assert np.all(np.diff(z) > 0)
    assert np.all(np.abs(z) < 1)
    assert np.max(np.abs(profile.z(-ys) + z)) < 1e-9
    assert profile.z(1 - 1e-4) > 0.9
    assert profile.z_prime(0.0) == pytest.approx(1 / GOLDEN_C, rel=1e-12)
    assert profile.H(0.0) == 1.0


def test_profile_matches_scipy(profile, phi):
    def rhs(y, z):
        return (1 - z * z) * (phi.derivative(y) * z + 1) / phi.value(y)

    ref = solve_ivp(rhs, (0, 0.99), [0.0], method="DOP853", rtol=1e-12, atol=1e-14, dense_output=True)
    ys = np.linspace(0, 0.99, 60)
    assert np.max(np.abs(ref.sol(ys)[0] - profile.z(ys))) < 1e-8


def test_tail_oracle_agrees_with_ode(profile):
    ys = np.linspace(0.51, 0.9999, 40)
    assert np.max(np.abs(profile.z_tail(ys) - profile.z(ys))) < 1e-9


def test_w_normalisation_and_junction(profile):
    assert profile.w(0.0) == pytest.approx(0.0, abs=1e-15)
    h = 1e-5
    assert (profile.w(h) - profile.w(-h)) / (2 * h) == pytest.approx(1 / GOLDEN_C, rel=1e-8)
    zp = profile.z_plus
    assert profile.c_plus == pytest.approx(profile.w_numeric(0.5) - math.sqrt((1 + zp) / (1 - zp)), abs=1e-15)
    for y in (0.5 + 1e-7, 0.6, 0.9, 0.999):
        assert profile.w(y) == pytest.approx(profile.w_numeric(y), rel=1e-8)
    assert profile.c_minus == pytest.approx(-profile.c_plus, rel=1e-9)


def test_f_series_against_finite_differences(profile):
    f = profile.f
    for y in (-0.6, 0.0, 0.35, 0.8):
        co = profile.f_series(y, 3)
        d1 = _d1(f, y)
        d2 = _d1(lambda t: _d1(f, t, 1e-3), y, 1e-3)
        assert co[0] == pytest.approx(f(y), abs=1e-15)
        assert co[1] == pytest.approx(d1, rel=1e-7, abs=1e-9)
        assert 2 * co[2] == pytest.approx(d2, rel=1e-5, abs=1e-6)


def test_change_of_variables(profile, phi):
    for y in (0.2, 0.5, 0.8, 0.95):
        lhs = quad(lambda t: 1 / phi.value(t), 0, y, epsabs=1e-13, epsrel=1e-13)[0]
        zy = profile.z(y)
        inv = lambda z: brentq(lambda t: profile.z(t) - z, -1e-12, 0.99999, xtol=1e-15)
        rhs = quad(lambda z: 1 / ((1 - z * z) * (phi.derivative(inv(z)) * z + 1)), 0, zy,
                   epsabs=1e-12, epsrel=1e-12, limit=200, points=[profile.z_plus] if zy > profile.z_plus else None)[0]
        assert lhs == pytest.approx(rhs, abs=1e-8)


def test_metric_in_xw_coordinates(profile, rng):
    m = L.induced_metric(profile.graph())
    for y in rng.uniform(-0.95, 0.95, 50):
        g = m.at((0.3, float(y)))
        dw = _d1(profile.w_numeric, y)
        assert g[0, 0] == pytest.approx(profile.phi.value(y) ** -2, rel=1e-12)
        assert g[0, 1] == 0.0
        assert g[1, 1] == pytest.approx(dw * dw, rel=1e-8)


def test_strip_residual(profile):
    g = profile.graph()
    ys = np.linspace(-(1 - 1e-3), 1 - 1e-3, 50)
    assert max(abs(L.soliton_residual(g, (0.0, float(y)))) for y in ys) < 1e-8


def test_height_gradient_on_strip(profile):
    g = profile.graph()
    for y in (-0.7, 0.2, 0.6):
        p = g.at((0.0, y))
        dh = p.uJ.gradient()
        z = profile.z(y)
        assert float(dh @ p.ginv0 @ dh) == pytest.approx(z * z / (1 - z * z), rel=1e-10)
        assert L.nu_E_bounds(g, (0.0, y))[1] == pytest.approx((1 + z * z) / (1 - z * z), rel=1e-10)


def test_profile_errors(phi):
    with pytest.raises(ValueError):
        solve_profile_ode(phi, delta=0.1)
    with pytest.raises(ProfileError):
        # |z| = 1/2 is reached near the junction, far from the edge
        solve_profile_ode(phi, z_eps=0.5)


def test_profile_range_guard(profile):
    with pytest.raises(ValueError):
        profile.z(1 - 1e-7)


# ------------------------------------------------------------ reapers
def test_grim_members():
    assert L.mean_curvature(grim_reaper(-1), (2.0, 0.0)) == pytest.approx(math.cosh(2.0), rel=1e-12)
    with pytest.raises(ValueError):
        grim_reaper(0)


def test_directrix():
    assert abs(directrix_length(20.0) - math.pi) < 1e-6
    assert directrix_length(0.0) == 0.0
    Ss = [0.5, 1.0, 3.0, 8.0, 20.0]
    Ls = [directrix_length(S) for S in Ss]
    assert all(a < b for a, b in zip(Ls, Ls[1:]))
    assert all(v <= math.pi for v in Ls)
    for S, v in zip(Ss, Ls):
        assert v == pytest.approx(directrix_length_closed_form(S), abs=1e-7)


# ------------------------------------------------------------- growth
def test_growth_tables(profile):
    tr = growth_ratio_r(profile)
    assert 0.475 <= tr.column("H/w")[-1] <= 0.525
    tm = growth_ratio_rM(profile)
    assert 0.9 <= tm.column("H/sqrt(r_M)")[-1] <= 1.1
    with pytest.raises(ValueError):
        growth_ratio_r(profile, w_max=10)


def test_r_M_matches_quadrature(profile, phi):
    for y in (0.3, 0.7, 0.999):
        ref = quad(lambda t: 1 / phi.value(t), 0, y, epsabs=1e-13, epsrel=1e-13, points=[0.5] if y > 0.5 else None)[0]
        assert profile.r_M(y) == pytest.approx(ref, rel=1e-10)


# ---------------------------------------------------------- example curve
def test_example_curve():
    curve = build_example_curve(11)
    rep = example_curve_checks(curve, length_to=50.0)
    assert rep["spacelike"] and rep["max_abs_udot"] < 1
    assert rep["pattern_defect"] < 1e-12
    w3 = rep["witnesses"][3]
    assert w3["target"] == pytest.approx(16 / 17)
    assert w3["udot"] == pytest.approx(16 / 17, abs=1e-12)
    assert 17 / math.sqrt(33) >= 2
    assert all(w["ok"] for w in rep["witnesses"])
    assert rep["length"] >= 20


def test_example_curve_one_period_length():
    rep = example_curve_checks(build_example_curve(1))
    assert rep["length"] >= 2
