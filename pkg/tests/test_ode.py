import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from solitonlab.numerics.ode import NonFiniteRHS, OdeTrajectory, StepSizeUnderflow, integrate_ode


def test_exponential():
    tr = integrate_ode(lambda t, y: y, 0.0, 1.0, 1.0)
    assert abs(tr.ys[-1, 0] - math.e) < 1e-10


def test_constant_is_exact():
    tr = integrate_ode(lambda t, y: np.zeros_like(y), 0.0, 3.0, 5.0)
    assert tr.ys[-1, 0] == 3.0


def test_riccati_closed_form():
    tr = integrate_ode(lambda t, y: -y * y, 0.0, 1.0, 9.0)
    assert abs(tr.ys[-1, 0] - 0.1) < 1e-9


def test_backward_and_dense_output():
    tr = integrate_ode(lambda t, y: np.array([y[1], -y[0]]), 0.0, [0.0, 1.0], -4.0)
    ts = np.linspace(-4, 0, 77)
    assert np.max(np.abs(tr(ts)[:, 0] - np.sin(ts))) < 1e-8
    assert tr.direction == -1.0


def test_matches_scipy_oracle():
    def rhs(t, y):
        return np.array([y[1], -np.sin(y[0]) - 0.1 * y[1]])

    tr = integrate_ode(rhs, 0.0, [1.0, 0.0], 10.0, rtol=1e-11, atol=1e-13)
    ref = solve_ivp(rhs, (0, 10), [1.0, 0.0], method="DOP853", rtol=1e-12, atol=1e-14, dense_output=True)
    ts = np.linspace(0, 10, 50)
    assert np.max(np.abs(tr(ts) - ref.sol(ts).T)) < 1e-8


def test_error_shrinks_with_tolerance():
    errs = []
    for rtol in (1e-6, 1e-8, 1e-10):
        tr = integrate_ode(lambda t, y: np.cos(t) * y, 0.0, 1.0, 6.0, rtol=rtol, atol=rtol * 1e-2)
        errs.append(abs(tr.ys[-1, 0] - math.exp(math.sin(6.0))))
    assert errs[2] < errs[1] < errs[0]


def test_stop_event_locates_root():
    tr = integrate_ode(lambda t, y: np.ones(1), 0.0, 0.0, 10.0, stop=lambda t, y: y[0] - 2.5)
    assert tr.event_t == pytest.approx(2.5, abs=1e-12)
    assert tr.t1 == pytest.approx(2.5, abs=1e-12)


def test_blowup_raises_underflow():
    with pytest.raises((StepSizeUnderflow, NonFiniteRHS)):
        integrate_ode(lambda t, y: y * y, 0.0, 1.0, 2.0)


def test_nonfinite_rhs():
    with pytest.raises(NonFiniteRHS):
        integrate_ode(lambda t, y: np.array([np.nan]), 0.0, 1.0, 1.0)


def test_reproducible_bit_for_bit():
    a = integrate_ode(lambda t, y: -y + np.sin(t), 0.0, 1.0, 7.0)
    b = integrate_ode(lambda t, y: -y + np.sin(t), 0.0, 1.0, 7.0)
    assert np.array_equal(a.ts, b.ts) and np.array_equal(a.ys, b.ys)


def test_join_glues_runs():
    f = lambda t, y: np.array([1.0 + 0 * t])
    back = integrate_ode(f, 0.0, 0.0, -1.0)
    fwd = integrate_ode(f, 0.0, 0.0, 1.0)
    tr = OdeTrajectory.join(back, fwd)
    assert tr.t0 == -1.0 and tr.t1 == 1.0
    assert tr(0.4)[0] == pytest.approx(0.4, abs=1e-14)
    with pytest.raises(ValueError):
        tr(1.5)


def test_bad_tolerances():
    with pytest.raises(ValueError):
        integrate_ode(lambda t, y: y, 0.0, 1.0, 1.0, rtol=0.0)
