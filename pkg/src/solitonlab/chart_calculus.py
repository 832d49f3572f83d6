"""Tensor calculus for metrics given by closed-form components on a chart.

Curvature sign convention
-------------------------
The curvature operator is ``R(V, W) = nabla_[V,W] - [nabla_V, nabla_W]``,
the negative of the operator most textbooks use.  The lowered tensor is

    Rm[a, b, c, d] = g(R(d_a, d_b) d_c, d_d),

so that ``Rm(v, w, v, w) / (g(v,v) g(w,w) - g(v,w)^2)`` is the sectional
curvature (+1 on the round unit sphere) and ``Ric(Y, Z) = tr(X -> -R(X, Y) Z)``.

Metrics and scalar fields are plain callables built from the elementary
functions in :mod:`solitonlab.numerics.jets`; the same callable evaluates on
floats, numpy arrays and :class:`~solitonlab.numerics.jets.Jet` objects.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .errors import DegeneratePlaneError, MetricError
from .numerics import jets as J
from .numerics.jets import Jet, JetOrderError, jeinsum, jinv

__all__ = [
    "ChartMetric",
    "christoffel",
    "riemann",
    "ricci",
    "sectional",
    "hessian",
    "laplacian",
    "laplacian_divergence",
    "drift_laplacian",
    "gauss_curvature_conformal",
    "christoffel_jet",
    "riemann_jet",
    "ricci_jet",
    "euclidean",
    "conformal_plane",
    "polar_plane",
    "hyperbolic_half_plane",
    "round_sphere",
]

RIEMANNIAN = "riemannian"
LORENTZIAN = "lorentzian"


class ChartMetric:
    """Metric ``g_ij(x)`` on a coordinate box of dimension 2 or 3 (or 4 for products).

    ``components(*x)`` returns an ``n x n`` nested sequence; entries may be
    numbers or expressions in the coordinates.  ``signature`` is
    ``"riemannian"`` or ``"lorentzian"`` (timelike last coordinate).
    """

    def __init__(self, dim: int, components: Callable, signature: str = RIEMANNIAN, name: str = ""):
        if dim < 1 or dim > 4:
            raise ValueError("chart dimension must be between 1 and 4")
        if signature not in (RIEMANNIAN, LORENTZIAN):
            raise ValueError(f"unknown signature {signature!r}")
        self.dim = dim
        self.components = components
        self.signature = signature
        self.name = name

    def __repr__(self) -> str:
        return f"ChartMetric(dim={self.dim}, signature={self.signature!r}, name={self.name!r})"

    def jet(self, x: Sequence[float], order: int) -> Jet:
        """Metric as an ``(n, n)``-valued jet around ``x``; validated at ``x``."""
        xs = Jet.variables(x, order)
        g = Jet.stack(self.components(*xs), nvars=self.dim, order=order)
        self._validate(g.c[0], x)
        return g

    def values(self, *coords) -> np.ndarray:
        """Vectorised component values, shape ``(n, n, *broadcast_shape)``."""
        arrs = np.broadcast_arrays(*[np.asarray(c, dtype=float) for c in coords])
        comps = self.components(*arrs)
        flat = [np.broadcast_to(np.asarray(e, dtype=float), arrs[0].shape) for row in comps for e in row]
        return np.array(flat).reshape((self.dim, self.dim) + arrs[0].shape)

    def at(self, x: Sequence[float]) -> np.ndarray:
        g = self.values(*x)
        self._validate(g, x)
        return g

    def _validate(self, g0: np.ndarray, x) -> None:
        if not np.all(np.isfinite(g0)):
            raise MetricError(f"metric not finite at {tuple(x)}")
        if np.max(np.abs(g0 - g0.T)) > 1e-12 * (1 + np.max(np.abs(g0))):
            raise MetricError(f"metric not symmetric at {tuple(x)}")
        ev = np.linalg.eigvalsh(0.5 * (g0 + g0.T))
        scale = max(1.0, float(np.max(np.abs(ev))))
        if np.min(np.abs(ev)) <= 1e-14 * scale:
            raise MetricError(f"metric singular at {tuple(x)}")
        neg = int(np.sum(ev < 0))
        if self.signature == RIEMANNIAN and neg:
            raise MetricError(f"metric not positive definite at {tuple(x)}")
        if self.signature == LORENTZIAN and neg != 1:
            raise MetricError(f"metric not of Lorentzian signature at {tuple(x)}")


# ------------------------------------------------------------------ jet level
def christoffel_jet(g: Jet, ginv: Jet | None = None) -> Jet:
    """``Gamma[k, i, j]`` as a jet one order below ``g``."""
    if g.order < 1:
        raise JetOrderError("Christoffel symbols need a metric jet of order >= 1")
    n = g.shape[0]
    if ginv is None:
        ginv = jinv(g)
    ginv = ginv.truncate(g.order - 1)
    dg = Jet.stack([g.d(l) for l in range(n)])  # dg[l, i, j] = d_l g_ij
    # first kind [i, j, l] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    first = 0.5 * (dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0))
    return jeinsum("kl,ijl->kij", ginv, first)


def riemann_jet(g: Jet) -> Jet:
    """Lowered curvature ``Rm[a, b, c, d]`` (convention of the module docstring), order - 2."""
    if g.order < 2:
        raise JetOrderError("curvature needs a metric jet of order >= 2")
    n = g.shape[0]
    gam = christoffel_jet(g)
    dgam = Jet.stack([gam.d(i) for i in range(n)])   # [i, l, j, k] = d_i Gamma^l_jk
    gam = gam.truncate(g.order - 2)
    # textbook R^l_{k i j} = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik
    a = dgam.transpose(1, 3, 0, 2)                   # [l, k, i, j] = d_i G^l_jk
    quad = jeinsum("lim,mjk->lkij", gam, gam)
    R = a - a.transpose(0, 1, 3, 2) + quad - quad.transpose(0, 1, 3, 2)
    # Rm[a,b,c,d] = -g_dl R^l_{c a b}
    return -jeinsum("dl,lcab->abcd", g.truncate(g.order - 2), R)


def ricci_jet(g: Jet, rm: Jet | None = None) -> Jet:
    if rm is None:
        rm = riemann_jet(g)
    ginv = jinv(g.truncate(rm.order))
    # Ric(b, c) = tr(X -> -R(X, d_b) d_c) = -g^{ad} Rm[a, b, c, d]
    return -jeinsum("ad,abcd->bc", ginv, rm)


# --------------------------------------------------------------- numeric API
def christoffel(m: ChartMetric, x: Sequence[float]) -> np.ndarray:
    """``Gamma[k, i, j]`` at ``x``."""
    return christoffel_jet(m.jet(x, 1)).value


def riemann(m: ChartMetric, x: Sequence[float]) -> np.ndarray:
    """``Rm[a, b, c, d] = g(R(d_a, d_b) d_c, d_d)`` at ``x``."""
    return riemann_jet(m.jet(x, 2)).value


def ricci(m: ChartMetric, x: Sequence[float]) -> np.ndarray:
    return ricci_jet(m.jet(x, 2)).value


def sectional(m: ChartMetric, x: Sequence[float], v: Sequence[float], w: Sequence[float]) -> float:
    g = m.at(x)
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    q = (v @ g @ v) * (w @ g @ w) - (v @ g @ w) ** 2
    if abs(q) <= 1e-14 * (1 + (v @ v) * (w @ w)):
        raise DegeneratePlaneError("vectors span a degenerate plane")
    rm = riemann(m, x)
    return float(np.einsum("abcd,a,b,c,d->", rm, v, w, v, w) / q)


def _field_jet(f: Callable, x: Sequence[float], order: int) -> Jet:
    xs = Jet.variables(x, order)
    out = f(*xs)
    if not isinstance(out, Jet):
        out = Jet.constant(out, len(x), order)
    if out.order < order:
        raise JetOrderError(f"scalar field jet has order {out.order} < {order}")
    return out


def hessian_from_jets(g: Jet, fj: Jet) -> Jet:
    """``nabla^2 f`` as a jet, order two below the lower of the inputs."""
    n = g.shape[0]
    o = min(g.order, fj.order) - 2
    if o < 0:
        raise JetOrderError("Hessian needs jets of order >= 2")
    gam = christoffel_jet(g.truncate(o + 1))
    df = Jet.stack([fj.d(i) for i in range(n)]).truncate(o + 1)
    ddf = Jet.stack([df.d(j) for j in range(n)])   # [j, i] = d_j d_i f
    return ddf - jeinsum("kij,k->ij", gam, df.truncate(o))


def hessian(m: ChartMetric, f: Callable, x: Sequence[float]) -> np.ndarray:
    """``nabla^2 f(d_i, d_j) = d_i d_j f - Gamma^k_ij d_k f`` at ``x``."""
    return hessian_from_jets(m.jet(x, 2), _field_jet(f, x, 2)).value


def laplacian(m: ChartMetric, f: Callable, x: Sequence[float]) -> float:
    """Metric trace of the Hessian."""
    H = hessian(m, f, x)
    return float(np.einsum("ij,ij->", np.linalg.inv(m.at(x)), H))


def laplacian_divergence(m: ChartMetric, f: Callable, x: Sequence[float]) -> float:
    """Laplacian in divergence form ``|g|^{-1/2} d_i(|g|^{1/2} g^{ij} d_j f)``."""
    g = m.jet(x, 1)
    fj = _field_jet(f, x, 2)
    n = m.dim
    ginv = jinv(g)
    vol = J.sqrt(abs(J.jdet(g)))
    df = Jet.stack([fj.d(i) for i in range(n)])
    V = jeinsum("ij,j->i", ginv, df) * vol
    div = sum(V[i].d(i).value for i in range(n))
    return float(div / vol.value)


def drift_laplacian(m: ChartMetric, f: Callable, h: Callable, x: Sequence[float]) -> float:
    """``Delta f - g(grad h, grad f)``."""
    ginv = np.linalg.inv(m.at(x))
    df = _field_jet(f, x, 1).gradient()
    dh = _field_jet(h, x, 1).gradient()
    return laplacian(m, f, x) - float(dh @ ginv @ df)


def gauss_curvature_conformal(phi: Callable, y: float) -> float:
    """Gauss curvature of ``phi(y)^-2 (dx^2 + dy^2)`` at height ``y``.

    Writing the metric as ``e^{2 w} (dx^2 + dy^2)`` with ``w = -ln phi``, the
    curvature is ``-e^{-2w} Delta_0 w = -(phi'^2 - phi phi'')``.
    """
    (yj,) = Jet.variables([y], 2)
    pj = phi(yj)
    if not isinstance(pj, Jet):
        pj = Jet.constant(pj, 1, 2)
    p0 = pj.partial((0,))
    if not p0 > 0:
        raise MetricError(f"conformal factor must be positive, got phi({y}) = {p0}")
    p1 = pj.partial((1,))
    p2 = pj.partial((2,))
    return float(-(p1 * p1 - p0 * p2))


# ------------------------------------------------------------------ factories
def euclidean(n: int = 2) -> ChartMetric:
    def comps(*x):
        return [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]

    return ChartMetric(n, comps, name="euclidean")


def conformal_plane(phi: Callable, name: str = "conformal") -> ChartMetric:
    """``phi(y)^-2 (dx^2 + dy^2)`` on the plane ``(x, y)``."""

    def comps(x, y):
        s = 1.0 / phi(y) ** 2
        return [[s, 0.0], [0.0, s]]

    return ChartMetric(2, comps, name=name)


def polar_plane() -> ChartMetric:
    """``dr^2 + r^2 d theta^2``."""
    return ChartMetric(2, lambda r, t: [[1.0, 0.0], [0.0, r * r]], name="polar")


def hyperbolic_half_plane() -> ChartMetric:
    """``y^-2 (dx^2 + dy^2)``."""
    return ChartMetric(2, lambda x, y: [[1.0 / (y * y), 0.0], [0.0, 1.0 / (y * y)]], name="hyperbolic")


def round_sphere() -> ChartMetric:
    """``d theta^2 + sin^2 theta d phi^2`` on the unit sphere."""
    return ChartMetric(2, lambda t, p: [[1.0, 0.0], [0.0, J.sin(t) ** 2]], name="sphere")
