"""Explicit translating solitons.

* Grim reapers over the Euclidean plane, Lorentzian and Riemannian.
* A spacelike curve in the Lorentz-Minkowski plane that oscillates between
  heights 0 and 1 with ever steeper ramps.
* A translator ``t = f(y)`` over the strip ``R x (-1, 1)`` carrying the
  conformal metric ``phi(y)^-2 (dx^2 + dy^2)`` with ``phi = 1 - |y|`` near the
  edges.  Its profile ``z = phi f'`` solves
  ``phi z' = (1 - z^2)(phi' z + 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .chart_calculus import conformal_plane, euclidean, gauss_curvature_conformal
from .errors import GeometryError
from .lorentz_graphs import GraphHypersurface, ProductSpace
from .numerics import jets as J
from .numerics.jets import Jet, compose_series
from .numerics.ode import OdeTrajectory, integrate_ode
from .numerics.quadrature import gauss_legendre_panels, quad_adaptive

__all__ = [
    "SmoothStep",
    "PhiProfile",
    "build_phi",
    "SolitonProfile",
    "ProfileError",
    "solve_profile_ode",
    "grim_reaper",
    "directrix_length",
    "directrix_length_closed_form",
    "growth_ratio_r",
    "growth_ratio_rM",
    "GrowthTable",
    "PiecewiseCurve",
    "build_example_curve",
    "example_curve_checks",
]


class ProfileError(GeometryError):
    """The profile ODE or the conformal factor violated a structural property."""


# ------------------------------------------------------------------ step
class SmoothStep:
    """C-infinity step on [0, 1] built from the ``exp(-1/x)`` bump.

    ``step(x) = e^{-b/x} / (e^{-b/x} + e^{-b/(1-x)})`` for ``0 < x < 1``,
    evaluated in logistic form for stability.  It is 0 for ``x <= 0``, 1 for
    ``x >= 1``, and ``step(1 - x) = 1 - step(x)``.
    """

    _PANELS = 256
    _GL = 20

    def __init__(self, beta: float = 1.0):
        if not 0.05 <= beta <= 10.0:
            raise ValueError("step parameter beta must lie in [0.05, 10]")
        self.beta = float(beta)
        # beyond this distance from the ends, all derivatives are below 1e-300
        self.cut = self.beta / 1400.0
        nodes, weights = gauss_legendre_panels(0.0, 1.0, self._PANELS, self._GL)
        vals = self.value(nodes) * weights
        self._edges = np.linspace(0.0, 1.0, self._PANELS + 1)
        self._cum = np.concatenate([[0.0], np.cumsum(vals.reshape(self._PANELS, self._GL).sum(axis=1))])
        self._gx, self._gw = np.polynomial.legendre.leggauss(self._GL)

    def _arg(self, x):
        return 0.5 * self.beta * (1.0 / x - 1.0 / (1.0 - x))

    def value(self, x):
        x = np.asarray(x, dtype=float)
        inner = (x > self.cut) & (x < 1.0 - self.cut)
        xs = np.where(inner, x, 0.5)
        a2 = 2.0 * self._arg(xs)
        # logistic form keeps relative accuracy in both tails
        e = np.exp(-np.abs(a2))
        v = np.where(a2 > 0, e / (1.0 + e), 1.0 / (1.0 + e))
        out = np.where(inner, v, np.where(x >= 0.5, 1.0, 0.0))
        return out if out.ndim else float(out)

    def series(self, x0, order: int) -> np.ndarray:
        """Taylor coefficients of the step at ``x0`` (array-valued for array ``x0``)."""
        x0 = np.asarray(x0, dtype=float)
        inner = (x0 > self.cut) & (x0 < 1.0 - self.cut)
        xs = np.where(inner, x0, 0.5)
        (xj,) = Jet.variables([xs], order)
        sj = 0.5 * (1.0 - J.tanh(self._arg(xj)))
        coeffs = sj.c.copy()
        outer = np.where(x0 >= 0.5, 1.0, 0.0)
        coeffs[0] = np.where(inner, coeffs[0], outer)
        coeffs[1:] = np.where(inner, coeffs[1:], 0.0)
        return coeffs

    def integral(self, x):
        """``int_0^x step`` (equals ``x - 1/2`` for ``x >= 1``)."""
        x = np.asarray(x, dtype=float)
        xc = np.clip(x, 0.0, 1.0)
        k = np.clip(np.floor(xc * self._PANELS).astype(int), 0, self._PANELS - 1)
        a = self._edges[k]
        half = 0.5 * (xc - a)
        pts = (a + half)[..., None] + half[..., None] * self._gx
        part = half * np.sum(self.value(pts) * self._gw, axis=-1)
        out = self._cum[k] + part
        out = np.where(x > 1.0, x - 0.5, out)
        out = np.where(x <= 0.0, 0.0, out)
        return out if out.ndim else float(out)


# ------------------------------------------------------------------- phi
class PhiProfile:
    """Even conformal factor ``phi`` on ``(-1, 1)`` with ``phi = 1 - |y|`` for ``|y| >= 1/2``.

    ``phi(y) = C - int_0^y s`` where ``s(t) = 2 step(t + 1/2) - 1`` is odd,
    nondecreasing and equal to ``sign(t)`` for ``|t| >= 1/2``; this reduces to
    ``phi(y) = 1 + y - 2 S(y + 1/2)`` with ``S`` the step integral, and
    ``C = phi(0) = 1 - 2 S(1/2)``.

    Instances are callable on floats, arrays and jets.
    """

    def __init__(self, beta: float = 1.0, validate: bool = True):
        self.step = SmoothStep(beta)
        self.beta = self.step.beta
        if validate:
            self.validate()

    @cached_property
    def C(self) -> float:
        """``phi(0)``."""
        return float(self.value(0.0))

    def value(self, y):
        y = np.asarray(y, dtype=float)
        if np.any(np.abs(y) >= 1.0):
            raise ValueError("phi is defined on (-1, 1)")
        ay = np.abs(y)
        # evenness: evaluate on |y|
        v = 1.0 + ay - 2.0 * self.step.integral(ay + 0.5)
        v = np.where(ay >= 0.5, 1.0 - ay, v)
        return v if v.ndim else float(v)

    def derivative(self, y, k: int = 1):
        """``phi^(k)(y)`` for ``k >= 1``."""
        y = np.asarray(y, dtype=float)
        co = self.series(y, k)
        out = co[k] * math.factorial(k)
        return out if np.ndim(out) else float(out)

    def series(self, y0, order: int) -> np.ndarray:
        """Taylor coefficients ``[phi(y0), phi'(y0), phi''(y0)/2, ...]``."""
        y0 = np.asarray(y0, dtype=float)
        out = np.zeros((order + 1,) + y0.shape)
        out[0] = self.value(y0)
        if order >= 1:
            st = self.step.series(y0 + 0.5, order - 1)
            dphi = -2.0 * st
            dphi[0] = dphi[0] + 1.0
            out[1:] = dphi / np.arange(1, order + 1).reshape((-1,) + (1,) * y0.ndim)
        return out

    def __call__(self, y):
        if isinstance(y, Jet):
            return compose_series(y, self.series(y.c[0], y.order))
        return self.value(y)

    def validate(self, samples: int = 4001) -> None:
        ys = np.linspace(-0.999, 0.999, samples)
        ys = np.concatenate([ys, [-0.5, 0.5, 0.0]])
        ph = self.value(ys)
        d1 = self.derivative(ys, 1)
        d2 = self.derivative(ys, 2)
        tail = np.abs(ys) > 0.5
        centre = np.abs(ys) < 0.5
        if not np.all(ph > 0):
            raise ProfileError("phi must be positive")
        if np.max(np.abs(ph[tail] - (1 - np.abs(ys[tail])))) > 1e-14:
            raise ProfileError("phi must equal 1 - |y| for |y| > 1/2")
        # 1 - |phi'| = 2 step(1/2 - |y|); it underflows within ``cut`` of the junction
        gap_x = 0.5 - np.abs(ys[centre])
        gap = self.step.value(gap_x)
        if not (np.all(np.abs(d1[centre]) <= 1.0) and np.all(gap[gap_x > self.beta / 700.0] > 0)):
            raise ProfileError("|phi'| must be < 1 on |y| < 1/2")
        if not np.all(d2[centre] <= 0.0):
            raise ProfileError("phi'' must be <= 0 on |y| < 1/2")
        if np.max(np.abs(self.value(-ys) - ph)) > 1e-15:
            raise ProfileError("phi must be even")
        if not np.max(ph) <= 2.0:
            raise ProfileError("phi must take values in (0, 2]")

    def metric(self):
        return conformal_plane(self, name=f"conformal[phi beta={self.beta}]")

    def gauss_curvature(self, y) -> float:
        return gauss_curvature_conformal(self, y)


def build_phi(beta: float = 1.0) -> PhiProfile:
    return PhiProfile(beta)


# -------------------------------------------------------------- profile
def _psi(z):
    """Antiderivative of ``1 / ((1 - z)^2 (1 + z))``."""
    return 0.25 * np.log((1.0 + z) / (1.0 - z)) + 0.5 / (1.0 - z)


@dataclass
class SolitonProfile:
    """Numerical profile ``z(y)`` of the conformal-strip translator and its derived data."""

    phi: PhiProfile
    traj: OdeTrajectory
    delta: float
    z_eps: float
    y_lo: float
    y_hi: float
    _f_cum: np.ndarray = field(repr=False)
    _w_cum: np.ndarray = field(repr=False)
    c: float = 1.0

    _GL = 8

    # ------------------------------------------------------------ z, f, w
    def _check_range(self, y):
        y = np.asarray(y, dtype=float)
        if np.any(y < self.y_lo - 1e-15) or np.any(y > self.y_hi + 1e-15):
            raise ValueError(f"y outside the computed range [{self.y_lo}, {self.y_hi}]")
        return y

    def z(self, y):
        y = self._check_range(y)
        out = self.traj(y)[..., 0]
        return out if np.ndim(out) else float(out)

    def z_prime(self, y):
        y = np.asarray(y, dtype=float)
        z = self.z(y)
        return (1 - z * z) * (self.phi.derivative(y) * z + 1) / self.phi.value(y)

    def _cumulative(self, integrand, table, y):
        y = self._check_range(y)
        yy = np.atleast_1d(y).ravel()
        k = self.traj.segment_of(yy)
        a = self.traj.ts[k]
        x, w = np.polynomial.legendre.leggauss(self._GL)
        half = 0.5 * (yy - a)
        pts = (a + half)[:, None] + half[:, None] * x
        vals = integrand(pts.ravel()).reshape(pts.shape)
        out = table[k] + half * (vals @ w)
        out = out.reshape(np.shape(y))
        return out if out.ndim else float(out)

    def _f_integrand(self, y):
        return self.traj(y)[..., 0] / self.phi.value(y)

    def _w_integrand(self, y):
        z = self.traj(y)[..., 0]
        return np.sqrt(1.0 - z * z) / self.phi.value(y)

    def f(self, y):
        """Height ``f(y) = int_0^y z / phi`` (so ``f(0) = 0``)."""
        return self._cumulative(self._f_integrand, self._f_cum, y) - self._f0

    def w_numeric(self, y):
        """``int_0^y sqrt(1 - z^2) / phi`` by quadrature of the profile."""
        return self._cumulative(self._w_integrand, self._w_cum, y) - self._w0

    @cached_property
    def _f0(self) -> float:
        return float(self._cumulative(self._f_integrand, self._f_cum, 0.0))

    @cached_property
    def _w0(self) -> float:
        return float(self._cumulative(self._w_integrand, self._w_cum, 0.0))

    @cached_property
    def z_plus(self) -> float:
        return float(self.z(0.5))

    @cached_property
    def z_minus(self) -> float:
        return float(self.z(-0.5))

    @cached_property
    def c_plus(self) -> float:
        zp = self.z_plus
        return float(self.w_numeric(0.5) - math.sqrt((1 + zp) / (1 - zp)))

    @cached_property
    def c_minus(self) -> float:
        zm = self.z_minus
        return float(self.w_numeric(-0.5) + math.sqrt((1 - zm) / (1 + zm)))

    def w_of_z_tail(self, z):
        """Closed-form ``w`` on the tails (``z > z_+`` or ``z < z_-``)."""
        z = np.asarray(z, dtype=float)
        up = np.sqrt((1 + z) / (1 - z)) + self.c_plus
        down = -np.sqrt((1 - z) / (1 + z)) + self.c_minus
        out = np.where(z >= self.z_plus, up, np.where(z <= self.z_minus, down, np.nan))
        return out if out.ndim else float(out)

    def w(self, y):
        """``w(y)``: quadrature on ``|y| <= 1/2``, closed form beyond."""
        y = np.asarray(y, dtype=float)
        zt = self.z_extended(y)
        tail = np.abs(y) > 0.5
        centre = np.where(tail, 0.0, y)
        out = np.where(tail, self.w_of_z_tail(np.where(tail, zt, self.z_plus)), self.w_numeric(centre))
        return out if out.ndim else float(out)

    # -------------------------------------------------------- tails
    def z_tail(self, y):
        """``z`` for ``|y| > 1/2`` from ``Psi(z) - Psi(z_+) = ln(0.5 / (1 - y))`` (odd extension)."""
        y = np.asarray(y, dtype=float)
        if np.any(np.abs(y) <= 0.5) or np.any(np.abs(y) >= 1):
            raise ValueError("z_tail needs 1/2 < |y| < 1")
        ay = np.abs(y)
        target = _psi(self.z_plus) + np.log(0.5 / (1.0 - ay))
        lo = np.full(ay.shape, self.z_plus)
        hi = np.ones(ay.shape)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            go_up = _psi(mid) < target
            lo = np.where(go_up, mid, lo)
            hi = np.where(go_up, hi, mid)
            if np.all(hi - lo <= 2e-16):
                break
        out = np.sign(y) * 0.5 * (lo + hi)
        return out if out.ndim else float(out)

    def z_extended(self, y):
        """``z`` on all of ``(-1, 1)``: ODE inside the computed range, tail oracle beyond."""
        y = np.asarray(y, dtype=float)
        inside = (y >= self.y_lo) & (y <= self.y_hi)
        zi = self.z(np.where(inside, y, 0.0))
        if np.all(inside):
            return zi
        yo = np.where(inside, 0.75, y)
        zo = self.z_tail(yo)
        out = np.where(inside, zi, zo)
        return out if out.ndim else float(out)

    def H(self, y):
        """Mean curvature ``1 / sqrt(1 - z^2)`` at height ``y``."""
        z = np.asarray(self.z_extended(y))
        out = 1.0 / np.sqrt((1.0 - z) * (1.0 + z))
        return out if out.ndim else float(out)

    def z_of_w(self, w):
        w = np.asarray(w, dtype=float)
        wp, wm = self.w(0.5), self.w(-0.5)
        out = np.empty(w.shape)
        up = w >= wp
        dn = w <= wm
        mid = ~(up | dn)
        q = w[up] - self.c_plus
        out[up] = (q * q - 1) / (q * q + 1)
        p = self.c_minus - w[dn]
        out[dn] = (1 - p * p) / (1 + p * p)
        if np.any(mid):
            lo = np.full(mid.sum(), -0.5)
            hi = np.full(mid.sum(), 0.5)
            tgt = w[mid]
            for _ in range(80):
                m = 0.5 * (lo + hi)
                go = self.w_numeric(m) < tgt
                lo = np.where(go, m, lo)
                hi = np.where(go, hi, m)
            out[mid] = self.z(0.5 * (lo + hi))
        return out if out.ndim else float(out)

    def H_of_w(self, w):
        z = np.asarray(self.z_of_w(w))
        out = 1.0 / np.sqrt((1.0 - z) * (1.0 + z))
        return out if out.ndim else float(out)

    # ------------------------------------------------------------- r_M
    @cached_property
    def r_half(self) -> float:
        """``int_0^{1/2} dt / phi``."""
        return quad_adaptive(lambda t: 1.0 / self.phi.value(t), 0.0, 0.5, tol=1e-13)

    def r_M(self, y):
        """Base distance from the origin along the axis ``x = 0``: ``int_0^|y| dt / phi``."""
        y = np.asarray(y, dtype=float)
        ay = np.abs(y).ravel()
        out = np.empty(ay.shape)
        for i, a in enumerate(ay):
            if a > 0.5:
                out[i] = self.r_half + math.log(0.5 / (1.0 - a))
            else:
                out[i] = quad_adaptive(lambda t: 1.0 / self.phi.value(t), 0.0, float(a), tol=1e-13)
        out = out.reshape(y.shape)
        return out if out.ndim else float(out)

    # ------------------------------------------------------ Taylor jets
    def z_series(self, y0, order: int) -> np.ndarray:
        """Taylor coefficients of ``z`` at ``y0``, by Picard iteration on the ODE."""
        y0 = np.asarray(y0, dtype=float)
        z0 = np.asarray(self.z(y0), dtype=float)
        if order == 0:
            return z0[None].copy()
        (yj,) = Jet.variables([y0], order)
        ph = self.phi(yj)
        dph = ph.d(0)
        z = Jet.constant(z0, 1, order)
        for _ in range(order):
            zl = z.truncate(order - 1)
            rhs = (1.0 - zl * zl) * (dph * zl + 1.0) / ph.truncate(order - 1)
            z = rhs.integrate() + z0
        return z.c

    def f_series(self, y0, order: int) -> np.ndarray:
        y0 = np.asarray(y0, dtype=float)
        (yj,) = Jet.variables([y0], order - 1)
        z = Jet(self.z_series(y0, order - 1), 1, order - 1)
        fp = z / self.phi(yj)
        out = fp.integrate().c
        out[0] = self.f(y0)
        return out

    def u(self, x, y):
        """Height function of the graph ``t = f(y)`` (callable on jets)."""
        if isinstance(y, Jet):
            return compose_series(y, self.f_series(y.c[0], y.order))
        return self.f(y) + 0.0 * np.asarray(x, dtype=float)

    def graph(self, order: int = 4) -> GraphHypersurface:
        space = ProductSpace(self.phi.metric(), -1)
        return GraphHypersurface(space, self.u, c=self.c, soliton=True, order=order, name="conformal strip translator")

    # ----------------------------------------------------------- export
    def table(self, ys) -> dict:
        ys = np.asarray(ys, dtype=float)
        K = np.array([self.phi.gauss_curvature(float(y)) for y in ys])
        return {
            "y": ys,
            "z": np.asarray(self.z(ys)),
            "f": np.asarray(self.f(ys)),
            "w": np.asarray(self.w(ys)),
            "H": np.asarray(self.H(ys)),
            "phi": np.asarray(self.phi.value(ys)),
            "K": K,
        }


def solve_profile_ode(
    phi: Optional[PhiProfile] = None,
    delta: float = 1e-6,
    rtol: float = 1e-11,
    atol: float = 1e-13,
    z_eps: float = 1e-8,
) -> SolitonProfile:
    """Integrate ``phi z' = (1 - z^2)(phi' z + 1)``, ``z(0) = 0``, out to ``|y| = 1 - delta``."""
    if phi is None:
        phi = build_phi()
    if not 0 < delta <= 1e-3:
        raise ValueError("delta must lie in (0, 1e-3]")

    step = phi.step

    def rhs(y, zz):
        z = zz[0]
        ay = abs(y)
        if ay >= 0.5:
            p, dp = 1.0 - ay, -math.copysign(1.0, y)
        else:
            p = float(phi.value(y))
            dp = 1.0 - 2.0 * float(step.value(y + 0.5))
        return [(1.0 - z * z) * (dp * z + 1.0) / p]

    stop = lambda y, zz: (1.0 - z_eps) - abs(zz[0])
    runs = []
    for end in (-(1.0 - delta), 1.0 - delta):
        tr = integrate_ode(rhs, 0.0, [0.0], end, rtol=rtol, atol=atol, stop=stop)
        if tr.event_t is not None and abs(tr.event_t) < 0.99:
            raise ProfileError(f"|z| reached 1 - {z_eps} prematurely at y = {tr.event_t}")
        runs.append(tr)
    traj = OdeTrajectory.join(runs[0], runs[1])
    zs = traj.ys[:, 0]
    if not np.all(np.diff(zs) > 0):
        raise ProfileError("z is not strictly increasing")
    if not np.all(np.abs(zs) < 1):
        raise ProfileError("|z| must stay below 1")
    slopes = np.array([rhs(t, [z])[0] for t, z in zip(traj.ts, zs)])
    if not np.all(slopes > 0):
        raise ProfileError("z' must be positive while |z| < 1")

    # cumulative integrals of z/phi and sqrt(1-z^2)/phi from y_lo, per ODE step
    x, w = np.polynomial.legendre.leggauss(SolitonProfile._GL)
    a, b = traj.ts[:-1], traj.ts[1:]
    half = 0.5 * (b - a)
    pts = (0.5 * (a + b))[:, None] + half[:, None] * x
    zp = traj(pts.ravel())[:, 0].reshape(pts.shape)
    php = phi.value(pts)
    f_cum = np.concatenate([[0.0], np.cumsum(half * ((zp / php) @ w))])
    w_cum = np.concatenate([[0.0], np.cumsum(half * ((np.sqrt(1 - zp * zp) / php) @ w))])
    return SolitonProfile(phi, traj, delta, z_eps, traj.t0, traj.t1, f_cum, w_cum)


# ------------------------------------------------------------ grim reapers
def grim_reaper(epsilon: int = -1, c: float = 1.0, n: int = 2) -> GraphHypersurface:
    """Grim reaper translator over Euclidean ``R^n``, depending on ``x_1`` only.

    ``eps = -1``: ``u = ln(cosh(c x_1)) / c`` (entire, spacelike).
    ``eps = +1``: ``u = -ln(cos(c x_1)) / c`` on ``|x_1| < pi / (2c)``; this is
    the mirror image ``t -> -t`` of ``ln cos x_1``, which translates downward.
    """
    if epsilon == -1:
        u = lambda *x: J.log(J.cosh(c * x[0])) / c
        name = "lorentzian grim reaper"
    elif epsilon == 1:
        u = lambda *x: -J.log(J.cos(c * x[0])) / c
        name = "riemannian grim reaper"
    else:
        raise ValueError("epsilon must be +1 or -1")
    return GraphHypersurface(ProductSpace(euclidean(n), epsilon), u, c=c, soliton=True, name=name)


def directrix_length_closed_form(S: float) -> float:
    """``int_{-S}^{S} sech = 4 arctan(tanh(S / 2))``."""
    return 4.0 * math.atan(math.tanh(S / 2.0))


def directrix_length(S: float, c: float = 1.0, cutoff: float = 18.0) -> float:
    """Induced length of ``s -> (s, 0, u(s))`` on the Lorentzian grim reaper over ``[-S, S]``.

    Beyond ``c |s| = cutoff`` the speed ``sqrt(1 - tanh^2)`` is lost to rounding
    (``tanh`` rounds to 1 near 19), so integration stops there; the omitted
    tails weigh less than ``4 e^-cutoff / c`` in total.
    """
    from .bounds import CurveSample, curve_length

    if S < 0:
        raise ValueError("S must be non-negative")
    S_eff = min(S, cutoff / c)
    if S_eff == 0:
        return 0.0
    g = grim_reaper(-1, c)
    zero = lambda s: np.zeros_like(np.asarray(s, dtype=float))
    curve = CurveSample(lambda s: np.array([s, zero(s)]), lambda s: np.array([1.0 + zero(s), zero(s)]))
    return curve_length(g, curve, (-S_eff, S_eff), tol=1e-9)


# ---------------------------------------------------------------- growth
@dataclass(frozen=True)
class GrowthTable:
    columns: tuple
    rows: np.ndarray

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]


def growth_ratio_r(p: SolitonProfile, w_max: float = 100.0, num: int = 12) -> GrowthTable:
    """``H(0, w) / w`` along the axis ``x = 0``, where ``r(0, w) = |w|``."""
    if w_max < 50:
        raise ValueError("w_max must be at least 50")
    ws = np.geomspace(2.0, w_max, num)
    H = p.H_of_w(ws)
    return GrowthTable(("w", "H", "H/w"), np.column_stack([ws, H, H / ws]))


def growth_ratio_rM(p: SolitonProfile, y_max: float = 1 - 1e-6, num: int = 7) -> GrowthTable:
    """``H(0, y) / sqrt(r_M(0, y))`` for ``y -> 1``."""
    if y_max < 1 - 1e-6 - 1e-15:
        raise ValueError("y_max must reach 1 - 1e-6")
    gaps = np.geomspace(1e-1, 1.0 - y_max, num)
    ys = 1.0 - gaps
    H = np.asarray(p.H(ys))
    rM = np.asarray(p.r_M(ys))
    return GrowthTable(("y", "r_M", "H", "H/sqrt(r_M)"), np.column_stack([ys, rM, H, H / np.sqrt(rM)]))


# --------------------------------------------------- oscillating curve
@dataclass
class PiecewiseCurve:
    """Smooth spacelike ``u`` on ``[0, 5 N]`` rising to 1 and back in every period.

    In period ``n`` (``[5n, 5n+5]``): ``u = 0`` on ``[5n, 5n+1]`` and
    ``[5n+4, 5n+5]``, ``u = 1`` on ``[5n+2+e_n, 5n+3-e_n]`` with
    ``e_n = 2^-(n+1)``.  The rise on ``[5n+1, 5n+2+e_n]`` has speed
    ``m_n * (step((x-a)/rho) - step((x-b+rho)/rho))`` with ramp ``rho = e_n/2`` and
    ``m_n = 1/(1 + e_n - rho) < 1``; the fall mirrors it.
    """

    periods: int
    step: SmoothStep = field(default_factory=SmoothStep)

    def eps(self, n: int) -> float:
        return 2.0 ** -(n + 1)

    def ramp(self, n: int) -> float:
        return 0.5 * self.eps(n)

    def speed(self, n: int) -> float:
        return 1.0 / (1.0 + self.eps(n) - self.ramp(n))

    @property
    def breakpoints(self) -> list:
        pts = []
        for n in range(self.periods):
            e, r = self.eps(n), self.ramp(n)
            a, b = 5 * n + 1.0, 5 * n + 2.0 + e
            c, d = 5 * n + 3.0 - e, 5 * n + 4.0
            pts += [5.0 * n, a, a + r, b - r, b, c, c + r, d - r, d]
        pts.append(5.0 * self.periods)
        return pts

    def _bump(self, x, a, b, r):
        return self.step.value((x - a) / r) - self.step.value((x - b + r) / r)

    def _bump_int(self, x, a, b, r):
        return r * (self.step.integral((x - a) / r) - self.step.integral((x - b + r) / r))

    def _period(self, x):
        n = np.clip(np.floor(x / 5.0), 0, self.periods - 1)
        e = 2.0 ** -(n + 1)
        r = 0.5 * e
        m = 1.0 / (1.0 + e - r)
        a, b = 5 * n + 1.0, 5 * n + 2.0 + e
        c, d = 5 * n + 3.0 - e, 5 * n + 4.0
        inside = (x >= 0) & (x <= 5.0 * self.periods)
        return inside, r, m, a, b, c, d

    def udot(self, x):
        x = np.asarray(x, dtype=float)
        inside, r, m, a, b, c, d = self._period(x)
        out = np.where(inside, m * (self._bump(x, a, b, r) - self._bump(x, c, d, r)), 0.0)
        return out if out.ndim else float(out)

    def u(self, x):
        x = np.asarray(x, dtype=float)
        inside, r, m, a, b, c, d = self._period(x)
        out = np.where(inside, m * (self._bump_int(x, a, b, r) - self._bump_int(x, c, d, r)), 0.0)
        return out if out.ndim else float(out)

    def witness(self, n: int) -> float:
        """Point of the rise of period ``n`` where ``u' = 1 / (1 + e_n)``."""
        target = 1.0 / (1.0 + self.eps(n))
        a = 5 * n + 1.0
        lo, hi = a, a + self.ramp(n)
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            if self.udot(mid) < target:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def G(self, x):
        v = np.asarray(self.udot(x))
        return 1.0 / np.sqrt(1.0 - v * v)


def build_example_curve(periods: int = 11) -> PiecewiseCurve:
    return PiecewiseCurve(periods)


def example_curve_checks(curve: PiecewiseCurve, samples_per_unit: int = 400, length_to: Optional[float] = None) -> dict:
    """Spacelike, pattern, witness and length checks for :class:`PiecewiseCurve`."""
    from .bounds import CurveSample, curve_length

    N = curve.periods
    xs = np.linspace(0.0, 5.0 * N, 5 * N * samples_per_unit + 1)
    xs = np.union1d(xs, curve.breakpoints)
    ud = np.asarray(curve.udot(xs))
    max_speed = float(np.max(np.abs(ud)))
    pattern = 0.0
    for n in range(N):
        e = curve.eps(n)
        flat0 = np.concatenate([np.linspace(5 * n, 5 * n + 1, 11), np.linspace(5 * n + 4, 5 * n + 5, 11)])
        flat1 = np.linspace(5 * n + 2 + e, 5 * n + 3 - e, 11)
        pattern = max(pattern, float(np.max(np.abs(curve.u(flat0)))), float(np.max(np.abs(curve.u(flat1) - 1))))
    wit = []
    for n in range(N):
        xn = curve.witness(n)
        Gx = float(curve.G(xn))
        wit.append({
            "n": n,
            "x_n": xn,
            "udot": float(curve.udot(xn)),
            "target": 2.0 ** (n + 1) / (2.0 ** (n + 1) + 1),
            "G": Gx,
            "lower": 2.0 ** ((n - 1) / 2.0),
            "ok": Gx >= 2.0 ** ((n - 1) / 2.0),
        })
    minkowski = _minkowski_line()
    curve_s = CurveSample(lambda x: np.array([x, curve.u(x)]), lambda x: np.array([np.ones_like(np.asarray(x, dtype=float)), curve.udot(x)]))
    end = 5.0 * N if length_to is None else float(length_to)
    length = curve_length(minkowski, curve_s, (0.0, end), breakpoints=curve.breakpoints, tol=1e-9)
    return {
        "max_abs_udot": max_speed,
        "spacelike": max_speed < 1.0,
        "pattern_defect": pattern,
        "witnesses": wit,
        "length": length,
        "length_interval": (0.0, end),
        "periods": N,
    }


def _minkowski_line():
    from .chart_calculus import ChartMetric, LORENTZIAN

    return ChartMetric(2, lambda x, t: [[1.0, 0.0], [0.0, -1.0]], LORENTZIAN, name="minkowski plane")
