"""Adaptive Dormand-Prince 5(4) integrator with dense output and events."""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

__all__ = [
    "OdeError",
    "StepSizeUnderflow",
    "NonFiniteRHS",
    "OdeTrajectory",
    "integrate_ode",
]


class OdeError(RuntimeError):
    pass


class StepSizeUnderflow(OdeError):
    """The controller could not take a step; ``t_last`` is the last reached time."""

    def __init__(self, t_last: float, y_last: np.ndarray):
        super().__init__(f"step size underflow at t={t_last!r}")
        self.t_last = t_last
        self.y_last = y_last


class NonFiniteRHS(OdeError):
    def __init__(self, t: float):
        super().__init__(f"right-hand side is not finite at t={t!r}")
        self.t = t


# Dormand-Prince tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = _B - np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
# dense output coefficients (Shampine), polynomial in theta
_P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])


class OdeTrajectory:
    """Accepted steps of an integration run with a dense interpolant.

    ``ts`` is strictly monotone (in the direction of integration) and ``ys``
    holds the state at each breakpoint.  Calling the object with a scalar or
    an array of times evaluates the fourth-order Dormand-Prince interpolant.
    ``err_estimate`` is the largest accepted scaled local error times ``rtol``.
    """

    def __init__(self, ts, ys, ref_t, ref_h, ref_y, Q, err_estimate=0.0, event_t=None):
        self.ts = np.asarray(ts, dtype=float)
        self.ys = np.asarray(ys, dtype=float)
        # per-segment interpolant y = ref_y + sum_j Q[j] theta^(j+1), theta = (t - ref_t) / ref_h
        self._rt = np.asarray(ref_t, dtype=float)
        self._rh = np.asarray(ref_h, dtype=float)
        self._ry = np.asarray(ref_y, dtype=float).reshape(len(self._rt), -1)
        self._Q = np.asarray(Q, dtype=float).reshape(len(self._rt), 4, -1)
        self.err_estimate = float(err_estimate)
        self.event_t = event_t

    @classmethod
    def from_steps(cls, ts, ys, Qs, err_estimate=0.0, event_t=None):
        ts = np.asarray(ts, dtype=float)
        ys = np.asarray(ys, dtype=float)
        return cls(ts, ys, ts[:-1], np.diff(ts), ys[:-1], np.array(Qs).reshape(len(ts) - 1, 4, -1),
                   err_estimate, event_t)

    def __repr__(self) -> str:
        return f"OdeTrajectory(t0={self.t0}, t1={self.t1}, steps={len(self.ts) - 1})"

    @property
    def breakpoints(self) -> np.ndarray:
        return self.ts

    @property
    def states(self) -> np.ndarray:
        return self.ys

    @property
    def t0(self) -> float:
        return float(self.ts[0])

    @property
    def t1(self) -> float:
        return float(self.ts[-1])

    @property
    def direction(self) -> float:
        return 1.0 if self.ts[-1] >= self.ts[0] else -1.0

    def segment_of(self, t: np.ndarray) -> np.ndarray:
        d = self.direction
        return np.clip(np.searchsorted(d * self.ts, d * t, side="right") - 1, 0, len(self.ts) - 2)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tt = np.atleast_1d(t)
        lo, hi = sorted((self.t0, self.t1))
        slack = 1e-12 * (1.0 + hi - lo)
        if np.any(tt < lo - slack) or np.any(tt > hi + slack):
            raise ValueError("evaluation outside the integrated interval")
        if len(self.ts) == 1:
            out = np.repeat(self.ys[:1], tt.size, axis=0).reshape(tt.shape + (-1,))
        else:
            k = self.segment_of(tt.ravel())
            th = ((tt.ravel() - self._rt[k]) / self._rh[k])[:, None]
            Q = self._Q[k]
            poly = Q[:, 3]
            for j in (2, 1, 0):
                poly = poly * th + Q[:, j]
            out = (self._ry[k] + th * poly).reshape(tt.shape + (-1,))
        return out[0] if scalar else out

    @staticmethod
    def join(backward: "OdeTrajectory", forward: "OdeTrajectory") -> "OdeTrajectory":
        """Glue a backward run and a forward run sharing their initial point."""
        if backward.t0 != forward.t0:
            raise ValueError("runs must share their initial time")
        ts = np.concatenate([backward.ts[::-1], forward.ts[1:]])
        ys = np.concatenate([backward.ys[::-1], forward.ys[1:]])
        rt = np.concatenate([backward._rt[::-1], forward._rt])
        rh = np.concatenate([backward._rh[::-1], forward._rh])
        ry = np.concatenate([backward._ry[::-1], forward._ry])
        Q = np.concatenate([backward._Q[::-1], forward._Q])
        err = max(backward.err_estimate, forward.err_estimate)
        return OdeTrajectory(ts, ys, rt, rh, ry, Q, err)


def integrate_ode(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0,
    t1: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    stop: Optional[Callable[[float, np.ndarray], float]] = None,
    h0: Optional[float] = None,
    max_steps: int = 200_000,
) -> OdeTrajectory:
    """Integrate ``y' = rhs(t, y)`` from ``t0`` to ``t1`` (either direction).

    ``stop`` is an optional scalar event function; the run ends at the first
    sign change of ``stop(t, y)``, located on the dense output by bisection.
    """
    if not (rtol > 0 and atol > 0):
        raise ValueError("rtol and atol must be positive")
    y = np.atleast_1d(np.asarray(y0, dtype=float)).copy()
    t = float(t0)
    t1 = float(t1)
    direction = 1.0 if t1 >= t else -1.0
    ts, ys, coeffs = [t], [y.copy()], []
    if t1 == t:
        return OdeTrajectory.from_steps(np.array(ts), np.array(ys), np.zeros((0, 4, y.size)))

    def f(tt, yy):
        v = np.atleast_1d(np.asarray(rhs(tt, yy), dtype=float))
        if not np.all(np.isfinite(v)):
            raise NonFiniteRHS(tt)
        return v

    k1 = f(t, y)
    span = abs(t1 - t)
    if h0 is None:
        scale = atol + rtol * np.abs(y)
        d0 = np.sqrt(np.mean((y / scale) ** 2))
        d1 = np.sqrt(np.mean((k1 / scale) ** 2))
        h = 0.01 * d0 / d1 if d0 > 1e-5 and d1 > 1e-5 else 1e-6
        h = min(h, span)
    else:
        h = min(abs(h0), span)
    g_prev = stop(t, y) if stop is not None else None
    max_err = 0.0
    event_t = None
    hmin_rel = 16 * np.finfo(float).eps
    steps = 0
    while direction * (t1 - t) > 0:
        steps += 1
        if steps > max_steps:
            raise StepSizeUnderflow(t, y)
        hmin = hmin_rel * max(abs(t), 1.0)
        if h < hmin:
            raise StepSizeUnderflow(t, y)
        if h >= abs(t1 - t) * (1 - 1e-14):
            h = abs(t1 - t)
        hs = direction * h
        K = [k1]
        try:
            for s in range(1, 7):
                yi = y + hs * sum(a * K[j] for j, a in enumerate(_A[s]) if a != 0.0)
                K.append(f(t + _C[s] * hs, yi))
        except NonFiniteRHS:
            if h <= hmin * 2:
                raise
            h *= 0.25
            continue
        Km = np.array(K)
        y_new = y + hs * (_B @ Km)
        err = hs * (_E @ Km)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        en = float(np.sqrt(np.mean((err / scale) ** 2)))
        if not np.isfinite(en):
            h *= 0.25
            continue
        if en <= 1.0:
            t_new = t + hs if h != abs(t1 - t) else t1
            Q = hs * (_P.T @ Km)
            max_err = max(max_err, en)
            if stop is not None:
                g_new = stop(t_new, y_new)
                if np.sign(g_new) != np.sign(g_prev) and g_prev != 0:
                    traj_tmp = OdeTrajectory.from_steps(np.array([t, t_new]), np.array([y, y_new]), [Q])
                    a, b = t, t_new
                    ga = g_prev
                    for _ in range(200):
                        m = 0.5 * (a + b)
                        gm = stop(m, traj_tmp(m))
                        if np.sign(gm) == np.sign(ga):
                            a, ga = m, gm
                        else:
                            b = m
                        if abs(b - a) <= 4 * np.finfo(float).eps * max(1.0, abs(b)):
                            break
                    t_ev = b
                    y_ev = traj_tmp(t_ev)
                    # shrink the last interpolant onto [t, t_ev]
                    ratio = (t_ev - t) / (t_new - t)
                    Qs = np.array([Q[j] * ratio ** (j + 1) for j in range(4)])
                    ts.append(t_ev)
                    ys.append(y_ev)
                    coeffs.append(Qs)
                    event_t = t_ev
                    break
                g_prev = g_new
            t, y = t_new, y_new
            ts.append(t)
            ys.append(y.copy())
            coeffs.append(Q)
            k1 = K[6]
            fac = 0.9 * en ** -0.2 if en > 0 else 5.0
            h *= min(5.0, max(0.2, fac))
        else:
            h *= max(0.1, 0.9 * en ** -0.2)
    return OdeTrajectory.from_steps(np.array(ts), np.array(ys), np.array(coeffs), max_err * rtol, event_t)
