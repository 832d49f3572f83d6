"""Graphs ``t = u(x)`` in a product ``(M x R, g_M + eps dt^2)``.

Conventions (``eps = -1`` is the Lorentzian case):

* ``W = sqrt(1 + eps |grad u|^2)`` and the unit normal is
  ``nu = (-eps grad u, 1) / W``, so ``g(nu, nu) = eps`` and, when ``eps = -1``,
  ``nu`` is future pointing.
* The shape operator is ``A X = -nabla_X nu`` and the mean curvature is
  ``H = eps tr A``.  On a translating soliton of speed ``c`` one also has
  ``H = eps c g(d_t, nu) = c / W``.
* The height function is ``h = t`` restricted to the graph, i.e. ``h = u``.

All quantities at a point come from one Taylor jet of ``u`` (order 4 by
default), which is enough for the fourth-order identity involving ``Delta H``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .chart_calculus import (
    LORENTZIAN,
    RIEMANNIAN,
    ChartMetric,
    christoffel_jet,
    hessian_from_jets,
    ricci,
    ricci_jet,
    riemann,
)
from .errors import GeometryError, NotASolitonError, PreconditionError, SpacelikeViolation
from .numerics import jets as J
from .numerics.jets import Jet, JetOrderError, jeinsum, jinv

__all__ = [
    "ProductSpace",
    "GraphHypersurface",
    "PointGeometry",
    "CheckResult",
    "induced_metric",
    "unit_normal",
    "shape_operator",
    "mean_curvature",
    "soliton_residual",
    "height_gradient_check",
    "hessian_height_check",
    "drift_laplacian_H_check",
    "gauss_equation_ricci_check",
    "bakry_emery_check",
    "qiu_chen_inequality_check",
    "lemma_X_property",
    "sample_lorentz_pair",
    "nu_E_relation_check",
    "sample_unit_tangent",
]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a pointwise identity or inequality check.

    ``value`` is a residual (identities) or a slack (inequalities, where
    non-negative means the inequality holds).  ``scale`` is the magnitude of
    the largest term entering the check.
    """

    value: float
    scale: float = 1.0
    kind: str = "identity"

    @property
    def relative(self) -> float:
        return self.value / max(self.scale, 1.0)

    def passes(self, tol: float) -> bool:
        if self.kind == "identity":
            return abs(self.relative) <= tol
        return self.value >= -tol * max(self.scale, 1.0)


class ProductSpace:
    """``(M x R, g_M + eps dt^2)`` with ``M`` given by a Riemannian chart."""

    def __init__(self, base: ChartMetric, epsilon: int = -1):
        if base.signature != RIEMANNIAN:
            raise GeometryError("base metric must be Riemannian")
        if epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        self.base = base
        self.epsilon = int(epsilon)
        self.n = base.dim
        self.ambient = self._product(float(epsilon))
        self.ambient_euclidean = self._product(1.0)

    def _product(self, eps: float) -> ChartMetric:
        n, base = self.n, self.base

        def comps(*xt):
            g = base.components(*xt[:n])
            rows = [list(row) + [0.0] for row in g]
            rows.append([0.0] * n + [eps])
            return rows

        sig = LORENTZIAN if eps < 0 else RIEMANNIAN
        return ChartMetric(n + 1, comps, sig, name=f"{base.name} x R[{eps:+.0f}]")

    def __repr__(self) -> str:
        return f"ProductSpace(base={self.base!r}, epsilon={self.epsilon})"


class GraphHypersurface:
    """Graph of ``u`` over a chart of ``M`` inside a :class:`ProductSpace`.

    ``u`` is a callable on the chart coordinates built from
    :mod:`solitonlab.numerics.jets` functions.  Identity checks that only hold
    for translating solitons require ``soliton=True``.
    """

    def __init__(
        self,
        space: ProductSpace,
        u: Callable,
        c: float = 1.0,
        soliton: bool = False,
        order: int = 4,
        name: str = "",
    ):
        if not c > 0:
            raise ValueError("soliton speed c must be positive")
        if order < 2:
            raise ValueError("jet order must be at least 2")
        self.space = space
        self.u = u
        self.c = float(c)
        self.soliton = bool(soliton)
        self.order = int(order)
        self.name = name

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def epsilon(self) -> int:
        return self.space.epsilon

    def __repr__(self) -> str:
        return f"GraphHypersurface(name={self.name!r}, eps={self.epsilon}, c={self.c}, soliton={self.soliton})"

    def at(self, x: Sequence[float]) -> "PointGeometry":
        return PointGeometry(self, tuple(float(v) for v in x))

    def height(self, x: Sequence[float]) -> float:
        v = self.u(*[float(t) for t in x])
        return float(v)

    def _require_soliton(self) -> None:
        if not self.soliton:
            raise NotASolitonError(f"{self!r} is not flagged as a soliton")


def _u_jet(u: Callable, point, order: int) -> Jet:
    xs = Jet.variables(point, order)
    out = u(*xs)
    if not isinstance(out, Jet):
        out = Jet.constant(out, len(xs), order)
    return out


class PointGeometry:
    """All extrinsic and intrinsic quantities of a graph at one point."""

    def __init__(self, graph: GraphHypersurface, x: tuple):
        self.graph = graph
        self.x = x
        n, K, eps = graph.n, graph.order, graph.epsilon
        self.n, self.eps, self.c = n, eps, graph.c
        xs = Jet.variables(x, K)
        self.uJ = _u_jet(graph.u, x, K)
        self.gM = graph.space.base.jet(x, K)
        du = Jet.stack([self.uJ.d(i) for i in range(n)])            # order K-1
        gMinv = jinv(self.gM).truncate(K - 1)
        grad = jeinsum("ij,j->i", gMinv, du)
        norm2 = jeinsum("i,i->", du, grad)
        W2 = 1.0 + eps * norm2
        if not W2.value > 0:
            raise SpacelikeViolation(f"1 + eps|grad u|^2 = {W2.value} <= 0 at {x}")
        self.du, self.grad_u, self.W = du, grad, J.sqrt(W2)
        # induced metric g_M + eps du du
        self.g = self.gM.truncate(K - 1) + eps * jeinsum("i,j->ij", du, du)
        # ambient unit normal (n + 1 components)
        comps = [(-eps) * grad[i] / self.W for i in range(n)] + [1.0 / self.W]
        self.nu = Jet.stack(comps)
        # tangent frame e_i = d_i + du_i d_t
        eye = np.eye(n)
        self.frame = Jet.stack([[Jet.constant(eye[i, k], n, K - 1) for k in range(n)] + [du[i]] for i in range(n)])
        # ambient Christoffel symbols pulled back along the graph
        amb = graph.space.ambient
        p_amb = tuple(x) + (self.uJ.value,)
        gam_amb = christoffel_jet(amb.jet(p_amb, K))             # order K-1, n+1 vars
        self.gamma_bar = gam_amb.compose(list(xs) + [self.uJ])  # order K-1, n vars
        dnu = Jet.stack([self.nu.d(i) for i in range(n)])        # [i, c] order K-2
        conn = jeinsum("cab,ia->icb", self.gamma_bar.truncate(K - 2), self.frame.truncate(K - 2))
        conn = jeinsum("icb,b->ic", conn, self.nu.truncate(K - 2))
        self.A_amb = -(dnu + conn)                               # A(e_i) in ambient components
        self.A = self.A_amb[:, :n].transpose(1, 0)               # A[j, i] = A^j_i
        self.H = eps * Jet.stack([self.A[i, i] for i in range(n)]).sum()
        if graph.soliton and eps == -1 and self.H.value < graph.c * (1 - 1e-9):
            raise NotASolitonError(f"H = {self.H.value} < c = {graph.c} at {x}")

    # -------------------------------------------------------------- values
    @cached_property
    def g0(self) -> np.ndarray:
        return self.g.value

    @cached_property
    def ginv0(self) -> np.ndarray:
        return np.linalg.inv(self.g0)

    @cached_property
    def A0(self) -> np.ndarray:
        return self.A.value

    @property
    def H0(self) -> float:
        return float(self.H.value)

    @property
    def H_soliton(self) -> float:
        """``eps c g(d_t, nu)``, which equals ``H`` on solitons."""
        return float(self.eps * self.c * self.eps * self.nu.value[-1])

    @cached_property
    def tangency_defect(self) -> float:
        """t-component of ``A e_i`` minus that of ``A^j_i e_j``; zero when ``A e_i`` is tangent."""
        Aa = self.A_amb.value
        return float(np.max(np.abs(Aa[:, -1] - Aa[:, : self.n] @ self.du.value)))

    @cached_property
    def self_adjoint_defect(self) -> float:
        gA = self.g0 @ self.A0
        return float(np.max(np.abs(gA - gA.T)))

    @cached_property
    def A_norm2(self) -> float:
        return float(np.trace(self.A0 @ self.A0))

    @cached_property
    def nu_M(self) -> np.ndarray:
        return self.nu.value[: self.n]

    @cached_property
    def hess_ch(self) -> np.ndarray:
        return hessian_from_jets(self.g, self.c * self.uJ).value

    @cached_property
    def ric_sigma(self) -> np.ndarray:
        return ricci_jet(self.g.truncate(2)).value

    @cached_property
    def ric_M_nu(self) -> float:
        Ric = ricci_jet(self.gM.truncate(2)).value
        return float(self.nu_M @ Ric @ self.nu_M)

    def grad(self, fj: Jet) -> np.ndarray:
        """Induced gradient (contravariant) of a scalar jet."""
        return self.ginv0 @ fj.gradient()

    def laplacian(self, fj: Jet) -> float:
        return float(np.einsum("ij,ij->", self.ginv0, hessian_from_jets(self.g, fj).value))

    def push(self, X: np.ndarray) -> np.ndarray:
        """Ambient components of the tangent vector with chart components ``X``."""
        X = np.asarray(X, dtype=float)
        return np.concatenate([X, [X @ self.du.value]])


# ------------------------------------------------------------- public API
def _geom(g: GraphHypersurface, x) -> PointGeometry:
    return x if isinstance(x, PointGeometry) else g.at(x)


def induced_metric(g: GraphHypersurface) -> ChartMetric:
    """The metric ``g_M + eps du du`` as a chart metric on the base chart.

    Components are computed from a jet of ``u`` one order higher than the
    requested metric jet, so the result supports all of :mod:`chart_calculus`.
    """
    eps = g.epsilon
    n = g.n
    base = g.space.base

    def comps(*xs):
        if isinstance(xs[0], Jet):
            point = [v.c[0] for v in xs]
            order = xs[0].order
        else:
            point = list(xs)
            order = 0
        uj = _u_jet(g.u, point, order + 1)
        du = [uj.d(i) for i in range(n)]
        gm = base.components(*xs)
        if not isinstance(xs[0], Jet):
            du = [d.value for d in du]
        return [[gm[i][j] + eps * du[i] * du[j] for j in range(n)] for i in range(n)]

    def checked(*xs):
        out = comps(*xs)
        point = [v.c[0] if isinstance(v, Jet) else v for v in xs]
        W2 = _w2(g, point)
        if np.any(np.asarray(W2) <= 0):
            raise SpacelikeViolation("graph is not spacelike on the evaluated set")
        return out

    return ChartMetric(n, checked, RIEMANNIAN, name=f"induced[{g.name}]")


def _w2(g: GraphHypersurface, point):
    uj = _u_jet(g.u, point, 1)
    du = uj.gradient()
    gm = g.space.base.values(*point)
    gm = np.moveaxis(np.asarray(gm), (0, 1), (-2, -1))
    du = np.moveaxis(np.asarray(du), 0, -1)
    sol = np.linalg.solve(gm, du[..., None])[..., 0]
    return 1.0 + g.epsilon * np.sum(du * sol, axis=-1)


def unit_normal(g: GraphHypersurface, x) -> tuple[np.ndarray, float]:
    """``(nu_M, nu_R)``: base components and ``d_t`` component of the unit normal."""
    p = _geom(g, x)
    v = p.nu.value
    return v[: g.n].copy(), float(v[-1])


def shape_operator(g: GraphHypersurface, x) -> np.ndarray:
    """Matrix ``A[j, i] = A^j_i`` in the coordinate frame ``e_i = d_i + du_i d_t``."""
    return _geom(g, x).A0.copy()


def mean_curvature(g: GraphHypersurface, x) -> float:
    return _geom(g, x).H0


def soliton_residual(g: GraphHypersurface, x) -> float:
    """``div_M(grad u / W) - c / W`` at ``x`` (divergence form, independent of ``A``).

    The height function is expanded in extended precision: ``W^2 = 1 - |du|^2``
    cancels badly on steep Lorentzian graphs and the divergence amplifies the
    loss by ``W^-3``.
    """
    n = g.n
    order = 2
    gm = g.space.base.jet(x, order)
    uj = _u_jet(g.u, [np.longdouble(v) for v in x], order + 1)
    du = Jet.stack([uj.d(i) for i in range(n)]).truncate(order)
    grad = jeinsum("ij,j->i", jinv(gm), du)
    W2 = 1.0 + g.epsilon * jeinsum("i,i->", du, grad)
    if not W2.value > 0:
        raise SpacelikeViolation(f"graph not spacelike at {tuple(x)}")
    W = J.sqrt(W2)
    vol = J.sqrt(J.jdet(gm))
    V = grad * (vol / W)
    div = sum(V[i].d(i).value for i in range(n)) / vol.value
    return float(div - g.c / W.value)


def height_gradient_check(g: GraphHypersurface, x) -> CheckResult:
    """``|grad h|^2 - eps (1 - H^2 / c^2)`` with ``H`` from the trace of ``A``."""
    g._require_soliton()
    p = _geom(g, x)
    dh = p.uJ.gradient()
    lhs = float(dh @ p.ginv0 @ dh)
    rhs = p.eps * (1.0 - p.H0**2 / p.c**2)
    return CheckResult(lhs - rhs, max(abs(lhs), abs(rhs)))


def hessian_height_check(g: GraphHypersurface, x, X) -> CheckResult:
    """``nabla^2(ch)(X, X) - eps H g(AX, X)``."""
    g._require_soliton()
    p = _geom(g, x)
    X = np.asarray(X, dtype=float)
    lhs = float(X @ p.hess_ch @ X)
    rhs = float(p.eps * p.H0 * (X @ p.g0 @ (p.A0 @ X)))
    scale = max(abs(lhs), abs(rhs), abs(p.H0) * float(X @ p.g0 @ X))
    return CheckResult(lhs - rhs, scale)


def drift_laplacian_H_check(g: GraphHypersurface, x) -> CheckResult:
    """``-eps Delta H - g(grad H, grad ch) - (Ric_M(nu_M, nu_M) + |A|^2) H``."""
    g._require_soliton()
    p = _geom(g, x)
    if p.H.order < 2:
        raise JetOrderError("Delta H needs u to carry a jet of order >= 4")
    lap = p.laplacian(p.H)
    t1 = -p.eps * lap
    t2 = float(p.H.gradient() @ p.ginv0 @ (p.c * p.uJ.gradient()))
    t3 = (p.ric_M_nu + p.A_norm2) * p.H0
    return CheckResult(t1 - t2 - t3, max(abs(t1), abs(t2), abs(t3)))


def gauss_equation_ricci_check(g: GraphHypersurface, x, X) -> CheckResult:
    """Intrinsic ``Ric_Sigma(X, X)`` minus its Gauss-equation expression.

    With an orthonormal tangent frame ``E_i`` and ``g(nu, nu) = eps``:
    ``Ric_Sigma(X,X) = Ric_bar(X,X) - eps Rbar(X,nu,X,nu) - eps |AX|^2 + H g(AX,X)``.
    For ``eps = -1`` this is ``Ric_bar + Rbar(X,nu,X,nu) + H g(AX,X) + |AX|^2``.
    """
    p = _geom(g, x)
    X = np.asarray(X, dtype=float)
    lhs = float(X @ p.ric_sigma @ X)
    amb = g.space.ambient
    pt = tuple(p.x) + (float(p.uJ.value),)
    Rbar = riemann(amb, pt)
    Ricbar = ricci(amb, pt)
    Xb = p.push(X)
    nu = p.nu.value
    t_ric = float(Xb @ Ricbar @ Xb)
    t_rnu = float(np.einsum("abcd,a,b,c,d->", Rbar, Xb, nu, Xb, nu))
    AX = p.A0 @ X
    t_ax2 = float(AX @ p.g0 @ AX)
    t_h = p.H0 * float(AX @ p.g0 @ X)
    rhs = t_ric - p.eps * t_rnu - p.eps * t_ax2 + t_h
    return CheckResult(lhs - rhs, max(abs(lhs), abs(t_ric), abs(t_rnu), abs(t_ax2), abs(t_h)))


def bakry_emery_check(
    g: GraphHypersurface,
    x,
    X,
    G: Callable[[float], float],
    r_of_x: float,
    kappa: float,
) -> CheckResult:
    """Slack ``Ric_ch(X,X) + (n kappa / c^2) G(r)^2 |X|^2`` with ``Ric_ch = Ric_Sigma + nabla^2(ch)``.

    Raises :class:`PreconditionError` when ``H(x) > G(r_of_x)``.
    """
    g._require_soliton()
    p = _geom(g, x)
    Gr = float(G(r_of_x))
    if p.H0 > Gr * (1 + 1e-12):
        raise PreconditionError(f"H = {p.H0} exceeds G(r) = {Gr} at {p.x}")
    if kappa < 0:
        raise PreconditionError("kappa must be non-negative")
    X = np.asarray(X, dtype=float)
    ric_ch = float(X @ (p.ric_sigma + p.hess_ch) @ X)
    bound = (p.n * kappa / p.c**2) * Gr**2 * float(X @ p.g0 @ X)
    return CheckResult(ric_ch + bound, max(abs(ric_ch), abs(bound)), kind="inequality")


def qiu_chen_inequality_check(g: GraphHypersurface, x, ricci_tol: float = 1e-10) -> CheckResult:
    """Slack ``-f Delta_ch f + 3|grad f|^2 - (c^2/n)(1 - f^2)^2`` with ``f = -1/sqrt(1 + H^2/c^2)``.

    ``Delta_ch f = Delta f - g(grad ch, grad f)``.  Requires ``Ric_M >= 0`` at ``x``.
    """
    g._require_soliton()
    p = _geom(g, x)
    RicM = ricci_jet(p.gM.truncate(2)).value
    gm0 = p.gM.value
    # generalised eigenvalues of Ric_M w.r.t. g_M
    lam = np.linalg.eigvals(np.linalg.solve(gm0, RicM)).real
    if lam.min() < -ricci_tol:
        raise PreconditionError(f"base Ricci curvature negative ({lam.min()}) at {p.x}")
    c, n = p.c, p.n
    f = -1.0 / J.sqrt(1.0 + p.H * p.H / (c * c))
    df = f.gradient()
    lap_f = p.laplacian(f)
    drift = lap_f - float((c * p.uJ.gradient()) @ p.ginv0 @ df)
    f0 = float(f.value)
    lhs = -f0 * drift + 3.0 * float(df @ p.ginv0 @ df)
    rhs = (c * c / n) * (1.0 - f0 * f0) ** 2
    return CheckResult(lhs - rhs, max(abs(lhs), abs(rhs), abs(f0 * drift)), kind="inequality")


def qiu_chen_slack_from_values(f: float, drift_f: float, grad_f_norm2: float, c: float, n: int) -> float:
    """The same slack assembled from precomputed scalars."""
    return -f * drift_f + 3.0 * grad_f_norm2 - (c * c / n) * (1.0 - f * f) ** 2


def nu_E_relation_check(g: GraphHypersurface, x) -> CheckResult:
    """``|nu|_E^2 - (2 H^2 / c^2 - 1)``, plus the two-sided bound as ``scale``-free flags.

    The returned ``value`` is the residual; use :func:`nu_E_bounds` for the
    inequality ``H^2/c^2 <= |nu|_E^2 < 2 H^2/c^2``.
    """
    g._require_soliton()
    if g.epsilon != -1:
        raise GeometryError("the |nu|_E relation is stated for eps = -1")
    p = _geom(g, x)
    nuE2 = _nu_E2(g, p)
    rhs = 2.0 * p.H0**2 / p.c**2 - 1.0
    return CheckResult(nuE2 - rhs, max(abs(nuE2), abs(rhs)))


def _nu_E2(g: GraphHypersurface, p: PointGeometry) -> float:
    nu = p.nu.value
    return float(nu[: g.n] @ p.gM.value @ nu[: g.n] + nu[-1] ** 2)


def nu_E_bounds(g: GraphHypersurface, x) -> tuple[float, float, float]:
    """``(H^2/c^2, |nu|_E^2, 2 H^2/c^2)``."""
    p = _geom(g, x)
    h2 = p.H0**2 / p.c**2
    return h2, _nu_E2(g, p), 2.0 * h2


def sample_unit_tangent(g: GraphHypersurface, x, rng: np.random.Generator) -> np.ndarray:
    """A tangent vector uniformly distributed on the unit sphere of the induced metric."""
    p = _geom(g, x)
    L = np.linalg.cholesky(p.g0)
    z = rng.standard_normal(g.n)
    z /= np.linalg.norm(z)
    return np.linalg.solve(L.T, z)


# ------------------------------------------------------- Minkowski algebra
def _mink(a, b):
    return float(a[:-1] @ b[:-1] - a[-1] * b[-1])


def lemma_X_property(nu, X, tol: float = 1e-9) -> tuple[float, float, float]:
    """For a unit timelike ``nu`` and a unit spacelike ``X`` orthogonal to it in
    ``R^n x R`` with the Minkowski form, return ``(|X|_E, |nu|_E, defect)``.

    ``defect`` is the smallest singular value of ``[d_t, nu, X]`` relative to
    the largest; it vanishes exactly when the three vectors span a 2-plane.
    """
    nu = np.asarray(nu, dtype=float)
    X = np.asarray(X, dtype=float)
    if nu.shape != X.shape or nu.ndim != 1 or len(nu) < 2:
        raise ValueError("nu and X must be vectors of a common dimension >= 2")
    if abs(_mink(nu, nu) + 1) > tol or abs(_mink(X, X) - 1) > tol or abs(_mink(X, nu)) > tol:
        raise ValueError("need g(nu,nu) = -1, g(X,X) = 1, g(X,nu) = 0")
    et = np.zeros_like(nu)
    et[-1] = 1.0
    s = np.linalg.svd(np.stack([et, nu, X], axis=1), compute_uv=False)
    defect = float(s[-1] / s[0]) if len(nu) >= 3 else 0.0
    return float(np.linalg.norm(X)), float(np.linalg.norm(nu)), defect


def sample_lorentz_pair(dim: int, rng: np.random.Generator, coplanar: bool = False, scale: float = 2.0):
    """Random unit timelike ``nu`` (future pointing) and unit spacelike ``X`` with ``g(X, nu) = 0``.

    ``dim`` counts the space dimensions.  With ``coplanar=True``, ``X`` lies
    in the plane spanned by ``d_t`` and ``nu``.
    """
    v = rng.standard_normal(dim) * scale
    nu = np.concatenate([v, [np.sqrt(1.0 + v @ v)]])
    if coplanar:
        vhat = v / np.linalg.norm(v)
        Y = np.concatenate([vhat, [0.0]])
    else:
        Y = np.concatenate([rng.standard_normal(dim), [rng.standard_normal()]])
    # project Y orthogonally to nu in the Minkowski form, then normalise
    Y = Y + _mink(Y, nu) * nu
    return nu, Y / np.sqrt(_mink(Y, Y))
