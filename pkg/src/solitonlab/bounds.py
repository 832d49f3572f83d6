"""Growth functions ``G`` for completeness criteria and the tools built on them.

A :class:`BoundFunction` is a positive function on ``[0, inf)``.  The three
conditions that matter are

* (a) ``G > 0``,
* (b) ``int_0^inf dr / G = inf``,
* (c) ``G`` nondecreasing.

Sampled checks here are falsifiers: a violation found on a grid refutes a
bound, while "consistent" only means no sampled point refuted it.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .chart_calculus import LORENTZIAN, ChartMetric
from .errors import PreconditionError, SpacelikeViolation
from .lorentz_graphs import GraphHypersurface, induced_metric
from .numerics.divergence import divergence_probe
from .numerics.ode import integrate_ode
from .numerics.quadrature import QuadratureError, quad_adaptive

__all__ = [
    "BoundFunction",
    "ConditionReport",
    "affine",
    "log_affine",
    "power",
    "r_logk",
    "sampled",
    "constant",
    "from_callable",
    "parse_bound_spec",
    "classify_conditions",
    "build_GM",
    "polygonal_smooth",
    "JacobiReport",
    "jacobi_comparison",
    "lambda2",
    "CurveSample",
    "curve_length",
    "r_G_distance",
    "Verdict",
    "completeness_verdict",
]

DIVERGENT = "divergent"
CONVERGENT = "convergent"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ConditionReport:
    a: bool
    b: str
    c: bool
    method: str
    note: str = ""

    @property
    def all_hold(self) -> bool:
        return self.a and self.b == DIVERGENT and self.c

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "method": self.method, "note": self.note}


@dataclass(frozen=True)
class BoundFunction:
    """A growth function with a closed-form family tag.

    ``kind`` is one of ``affine`` (``A r + B``), ``log_affine``
    (``A ln(1 + r) + B``), ``power`` (``s (1 + r)^p``), ``r_logk``
    (``A r ln(1 + r)^k + B``), ``sampled`` (piecewise linear table) or
    ``callable`` (anything else, classified numerically unless ``flags`` given).
    """

    kind: str
    params: tuple = ()
    func: Optional[Callable] = field(default=None, compare=False)
    nodes: Optional[tuple] = None
    flags: Optional[ConditionReport] = field(default=None, compare=False)
    label: str = ""

    def __post_init__(self):
        if self.kind == "sampled":
            r, _ = self.nodes
            if len(r) < 2 or not np.all(np.diff(r) > 0):
                raise ValueError("sampled nodes must be strictly increasing (at least two)")
            if r[0] != 0.0:
                raise ValueError("sampled table must start at r = 0")
        elif self.kind == "callable" and self.func is None:
            raise ValueError("callable bound needs func")
        elif self.kind not in ("affine", "log_affine", "power", "r_logk", "sampled", "callable"):
            raise ValueError(f"unknown bound kind {self.kind!r}")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        k, p = self.kind, self.params
        if k == "affine":
            out = p[0] * r + p[1]
        elif k == "log_affine":
            out = p[0] * np.log1p(r) + p[1]
        elif k == "power":
            out = p[1] * (1.0 + r) ** p[0]
        elif k == "r_logk":
            out = p[0] * r * np.log1p(r) ** p[2] + p[1]
        elif k == "sampled":
            out = _sampled_eval(self.nodes, r)
        else:
            out = np.asarray(self.func(r), dtype=float)
            if out.shape != r.shape:
                out = np.broadcast_to(out, r.shape).copy()
        return out if out.ndim else float(out)

    def scaled(self, C: float) -> "BoundFunction":
        """``C G`` (the rescaled bound used by the comparison argument)."""
        if C <= 0:
            raise ValueError("scale must be positive")
        flags = self.flags or classify_conditions(self)
        return BoundFunction("callable", (C,), lambda r: C * np.asarray(self(r)), flags=flags,
                             label=f"{C}*{self.describe()}")

    def describe(self) -> str:
        if self.label:
            return self.label
        if self.kind == "sampled":
            return f"sampled[{len(self.nodes[0])} nodes]"
        return f"{self.kind}({', '.join(repr(v) for v in self.params)})"


def affine(A: float, B: float) -> BoundFunction:
    return BoundFunction("affine", (float(A), float(B)))


def constant(B: float) -> BoundFunction:
    return affine(0.0, B)


def log_affine(A: float, B: float) -> BoundFunction:
    return BoundFunction("log_affine", (float(A), float(B)))


def power(p: float, s: float = 1.0) -> BoundFunction:
    return BoundFunction("power", (float(p), float(s)))


def r_logk(A: float, B: float, k: float) -> BoundFunction:
    return BoundFunction("r_logk", (float(A), float(B), float(k)))


def sampled(r: Sequence[float], G: Sequence[float]) -> BoundFunction:
    return BoundFunction("sampled", nodes=(tuple(float(v) for v in r), tuple(float(v) for v in G)))


def from_callable(f: Callable, label: str = "", flags: Optional[ConditionReport] = None) -> BoundFunction:
    return BoundFunction("callable", func=f, flags=flags, label=label)


def _sampled_eval(nodes, r):
    """Linear interpolation; beyond the table, power-law continuation through the last two nodes."""
    rs = np.asarray(nodes[0])
    gs = np.asarray(nodes[1])
    out = np.interp(r, rs, gs)
    r1, r2, g1, g2 = rs[-2], rs[-1], gs[-2], gs[-1]
    beyond = r > r2
    if np.any(beyond):
        if r1 > 0 and g1 > 0 and g2 > 0:
            p = math.log(g2 / g1) / math.log(r2 / r1)
            ext = g2 * (np.where(beyond, r, r2) / r2) ** p
        else:
            ext = g2 + (g2 - g1) / (r2 - r1) * (r - r2)
        out = np.where(beyond, ext, out)
    return out


def parse_bound_spec(spec: str) -> BoundFunction:
    """Parse ``affine:A,B``, ``power:p,s``, ``rlogk:A,B,k``, ``logaffine:A,B`` or ``csv:<path>``."""
    if ":" not in spec:
        raise ValueError(f"bound spec {spec!r} lacks a ':'")
    head, body = spec.split(":", 1)
    head = head.strip().lower()
    if head == "csv":
        with open(body, newline="") as fh:
            rows = [row for row in csv.reader(fh) if row]
        try:
            float(rows[0][0])
        except ValueError:
            rows = rows[1:]
        data = np.array([[float(v) for v in row[:2]] for row in rows])
        return sampled(data[:, 0], data[:, 1])
    try:
        vals = [float(v) for v in body.split(",")]
    except ValueError as exc:
        raise ValueError(f"bad numbers in bound spec {spec!r}") from exc
    arity = {"affine": 2, "logaffine": 2, "power": 2, "rlogk": 3}
    if head not in arity:
        raise ValueError(f"unknown bound family {head!r}")
    if len(vals) != arity[head]:
        raise ValueError(f"{head} takes {arity[head]} parameters, got {len(vals)}")
    if head == "affine":
        return affine(*vals)
    if head == "logaffine":
        return log_affine(*vals)
    if head == "power":
        return power(*vals)
    return r_logk(*vals)


# ---------------------------------------------------------- classification
def classify_conditions(G: BoundFunction, scan_to: float = 1e4, scan_points: int = 20001) -> ConditionReport:
    """Decide (a), (b), (c): analytically for closed-form families, by scanning otherwise."""
    if G.flags is not None:
        return G.flags
    k, p = G.kind, G.params
    if k == "affine":
        A, B = p
        a = B > 0 and A >= 0
        return ConditionReport(a, DIVERGENT if a else CONVERGENT if A < 0 else INCONCLUSIVE, A >= 0, "analytic")
    if k == "log_affine":
        A, B = p
        a = B > 0 and A >= 0
        return ConditionReport(a, DIVERGENT if a else INCONCLUSIVE, A >= 0, "analytic")
    if k == "power":
        q, s = p
        a = s > 0
        b = DIVERGENT if q <= 1 else CONVERGENT
        return ConditionReport(a, b if a else INCONCLUSIVE, q >= 0 and s > 0, "analytic")
    if k == "r_logk":
        A, B, kk = p
        a = B > 0 and A >= 0
        if not a:
            return ConditionReport(False, INCONCLUSIVE, A >= 0 and kk >= 0, "analytic")
        # int dr / (r ln^k r) behaves like int du / u^k with u = ln r
        b = DIVERGENT if (A == 0 or kk <= 1) else CONVERGENT
        note = ""
        if kk > 1 and A > 0:
            note = ("condition (b) fails for k > 1: int dr/(r ln^k r) converges; "
                    "the family is admissible only for k <= 1")
        return ConditionReport(True, b, kk >= 0, "analytic", note)
    # numerical
    rs = np.linspace(0.0, scan_to, scan_points)
    if k == "sampled":
        rs = np.union1d(rs, G.nodes[0])
    vals = np.asarray(G(rs))
    a = bool(np.all(vals > 0) and np.all(np.isfinite(vals)))
    c = bool(np.all(np.diff(vals) >= -1e-12 * np.maximum(1.0, np.abs(vals[1:]))))
    if not a:
        return ConditionReport(False, INCONCLUSIVE, c, "scan")
    try:
        # (b) is a tail property; past the last node a table continues smoothly
        start = G.nodes[0][-1] if k == "sampled" else 0.0
        verdict = divergence_probe(lambda t: 1.0 / np.asarray(G(t)), start).verdict
    except (ValueError, QuadratureError):
        verdict = INCONCLUSIVE
    return ConditionReport(a, verdict, c, "scan+probe", "condition (b) is a numerical heuristic")


def _require(G: BoundFunction, what: str) -> ConditionReport:
    rep = classify_conditions(G)
    if not rep.all_hold:
        raise PreconditionError(f"{what} needs a bound satisfying (a), (b), (c); got {rep.as_dict()}")
    return rep


# ------------------------------------------------------------------ G^M
class _Primitive:
    """Cached ``rho(s) = int_0^s dr / G`` with monotone reuse of partial integrals."""

    def __init__(self, G: BoundFunction, tol: float):
        self.G = G
        self.tol = tol
        self._s = [0.0]
        self._v = [0.0]

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        flat = s.ravel()
        out = np.empty(flat.shape)
        for i in np.argsort(flat, kind="stable"):
            out[i] = self._one(float(flat[i]))
        out = out.reshape(s.shape)
        return out if out.ndim else float(out)

    def _one(self, s: float) -> float:
        if s < 0:
            raise ValueError("G^M is defined for s >= 0")
        j = int(np.searchsorted(self._s, s, side="right")) - 1
        s0, v0 = self._s[j], self._v[j]
        if s == s0:
            return v0
        v = v0 + quad_adaptive(lambda r: 1.0 / np.asarray(self.G(r)), s0, s, tol=self.tol * max(1.0, s - s0))
        self._s.insert(j + 1, s)
        self._v.insert(j + 1, v)
        return v


def build_GM(G: BoundFunction, tol: float = 1e-12, check_to: float = 1e3) -> BoundFunction:
    """``G^M(s) = G(int_0^s dr / G(r))``.

    Requires ``G >= 1`` (so ``G^M <= G``); inherits (a), (c) by composition and
    (b) from ``G^M <= G``.  The sample postconditions are asserted here.
    """
    _require(G, "build_GM")
    if G(0.0) < 1.0:
        raise PreconditionError("build_GM needs G >= 1 so that G^M <= G")
    rho = _Primitive(G, tol)
    flags = ConditionReport(True, DIVERGENT, True, "inherited", "G^M <= G gives (b)")
    GM = BoundFunction("callable", func=lambda s: np.asarray(G(rho(s))), flags=flags, label=f"GM[{G.describe()}]")
    ss = np.concatenate([[0.0], np.geomspace(1e-3, check_to, 60)])
    gm = np.asarray(GM(ss))
    if np.any(gm > np.asarray(G(ss)) * (1 + 1e-12)):
        raise PreconditionError("G^M <= G failed on samples")
    if np.any(np.diff(gm) < -1e-12) or np.any(gm <= 0):
        raise PreconditionError("G^M is not positive and nondecreasing on samples")
    return GM


# ---------------------------------------------------------- polygonal smoothing
class _Polygonal:
    """Polygon through ``(k, G0(k + 1))``, corners rounded on ``[k - h_k, k + h_k]``.

    The rounding is the quadratic fillet tangent to both adjacent segments; it
    is monotone and C1.  ``h_k`` starts at ``h`` and is halved at a corner if
    the fillet would dip below ``G0``.
    """

    def __init__(self, G0: BoundFunction, h: float):
        if not 0 < h < 0.5:
            raise ValueError("corner width h must lie in (0, 1/2)")
        self.G0 = G0
        self.h = h
        self._hk: dict[int, float] = {}

    def node(self, k):
        return np.asarray(self.G0(np.asarray(k, dtype=float) + 1.0))

    def polygon(self, r):
        r = np.asarray(r, dtype=float)
        k = np.floor(r)
        a, b = self.node(k), self.node(k + 1)
        return a + (b - a) * (r - k)

    def _fillet(self, r, k, h):
        P = self.node(k)
        ml = P - self.node(k - 1)
        mr = self.node(k + 1) - P
        return P + ml * (r - k) + (mr - ml) * (r - k + h) ** 2 / (4 * h)

    def width(self, k: int) -> float:
        if k not in self._hk:
            h = self.h
            for _ in range(30):
                xs = np.linspace(k - h, k + h, 201)
                if np.all(self._fillet(xs, k, h) >= np.asarray(self.G0(xs))):
                    break
                h *= 0.5
            self._hk[k] = h
        return self._hk[k]

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise ValueError("G is defined on r >= 0")
        out = self.polygon(r)
        kr = np.rint(r)
        near = np.flatnonzero((kr >= 1) & (np.abs(r - kr) < self.h))
        rn, kn = r.ravel()[near], kr.ravel()[near]
        flat = out.ravel()
        for k in np.unique(kn):
            h = self.width(int(k))
            sel = (kn == k) & (np.abs(rn - k) < h)
            flat[near[sel]] = self._fillet(rn[sel], k, h)
        return flat.reshape(out.shape) if out.ndim else float(flat[0])


def polygonal_smooth(G0: BoundFunction, h: float = 0.1, check_to: float = 200.0) -> BoundFunction:
    """C1 nondecreasing ``G >= G0`` with ``1/G`` not integrable, built from a polygon."""
    _require(G0, "polygonal_smooth")
    poly = _Polygonal(G0, h)
    flags = ConditionReport(True, DIVERGENT, True, "construction", "G <= 2 * polygon, polygon <= G0(r + 2)")
    G = BoundFunction("callable", func=poly, flags=flags, label=f"polygonal[{G0.describe()}]")
    rs = np.linspace(0.0, check_to, int(check_to * 1000) + 1)
    Gv = poly(rs)
    if np.any(Gv < np.asarray(G0(rs))):
        raise PreconditionError("polygonal smoothing fell below G0")
    if np.any(Gv > 2.0 * poly.polygon(rs)):
        raise PreconditionError("polygonal smoothing exceeded twice the polygon")
    if np.any(np.diff(Gv) < -1e-12):
        raise PreconditionError("polygonal smoothing is not nondecreasing")
    return G


# ------------------------------------------------------------- Jacobi ODE
def lambda2(Gbar: BoundFunction) -> float:
    """``e^{int_0^2 Gbar} / (e^{int_1^2 Gbar} - 1)``."""
    I02 = quad_adaptive(lambda t: np.asarray(Gbar(t)), 0.0, 2.0, tol=1e-13)
    I12 = quad_adaptive(lambda t: np.asarray(Gbar(t)), 1.0, 2.0, tol=1e-13)
    return math.exp(I02) / math.expm1(I12)


@dataclass
class JacobiReport:
    """Samples of ``w'' = Gbar^2 w``, ``w(0) = 0``, ``w'(0) = 1`` in log form.

    ``logw`` and ``v = w'/w`` avoid overflow; ``w`` itself is ``exp(logw)``.
    """

    t: np.ndarray
    logw: np.ndarray
    v: np.ndarray
    Gbar: np.ndarray
    lam2: float
    min_w: float
    min_wp: float
    min_wpp: float
    min_wronskian: float
    max_bound_ratio: float

    @property
    def positive(self) -> bool:
        return self.min_w > 0 and self.min_wp > 0 and self.min_wpp > 0

    @property
    def bound_holds(self) -> bool:
        return self.max_bound_ratio <= 1.0

    @property
    def comparison_holds(self) -> bool:
        return self.min_wronskian >= -1e-10

    @property
    def ok(self) -> bool:
        return self.positive and self.bound_holds and self.comparison_holds

    def w(self) -> np.ndarray:
        return np.exp(self.logw)


def jacobi_comparison(Gbar: BoundFunction, T: float, samples: int = 2001, rtol: float = 1e-12,
                      atol: float = 1e-14, switch: float = 0.5) -> JacobiReport:
    """Integrate the comparison ODE on ``[0, T]`` and check positivity and the ``lambda(2)`` bound."""
    if T <= 2:
        raise ValueError("T must exceed 2")
    _require(Gbar, "jacobi_comparison")
    G = lambda t: float(Gbar(t))

    # near 0 integrate (w, w', I) with I' = Gbar; then (ln w, v, I), v' = Gbar^2 - v^2
    near = integrate_ode(lambda t, y: [y[1], G(t) ** 2 * y[0], G(t)], 0.0, [0.0, 1.0, 0.0], switch,
                         rtol=rtol, atol=atol)
    ws, wps, Is = near.ys[-1]
    far = integrate_ode(lambda t, y: [y[1], G(t) ** 2 - y[1] ** 2, G(t)], switch,
                        [math.log(ws), wps / ws, Is], T, rtol=rtol, atol=atol)

    ts = np.linspace(0.0, T, samples)[1:]
    ts = np.union1d(ts, [2.0])
    lo = ts <= switch
    yn = near(ts[lo])
    yf = far(ts[~lo])
    logw = np.concatenate([np.log(yn[:, 0]), yf[:, 0]])
    v = np.concatenate([yn[:, 1] / yn[:, 0], yf[:, 1]])
    I = np.concatenate([yn[:, 2], yf[:, 2]])
    Gv = np.asarray(Gbar(ts))
    # w itself overflows for fast-growing Gbar; its minimum is what matters
    w = np.where(np.isfinite(logw), np.exp(np.minimum(logw, 700.0)), -1.0)
    lam = lambda2(Gbar)
    # f = (e^I - 1)/Gbar(0); f'/f = Gbar / (1 - e^-I); f'w - w'f >= 0  <=>  f'/f >= v
    fprime_over_f = Gv / -np.expm1(-I)
    wronsk = (fprime_over_f - v) / np.maximum(1.0, fprime_over_f)
    tail = ts >= 2.0
    ratio = v[tail] / (lam * Gv[tail])
    return JacobiReport(
        t=ts,
        logw=logw,
        v=v,
        Gbar=Gv,
        lam2=lam,
        min_w=float(np.min(w)),
        min_wp=float(np.min(v * w)),
        min_wpp=float(np.min(Gv ** 2 * w)),
        min_wronskian=float(np.min(wronsk)),
        max_bound_ratio=float(np.max(ratio)),
    )


# ---------------------------------------------------------------- curves
@dataclass(frozen=True)
class CurveSample:
    """Parametrized curve ``t -> position(t)`` in a chart with tangent ``velocity(t)``.

    Both callables accept a 1-D array of parameters and return an array of
    shape ``(dim, len(t))``.
    """

    position: Callable
    velocity: Callable


def _metric_of(g) -> ChartMetric:
    if isinstance(g, GraphHypersurface):
        return induced_metric(g)
    if isinstance(g, ChartMetric):
        return g
    raise TypeError("curve_length needs a GraphHypersurface or a ChartMetric")


def curve_length(g, curve: CurveSample, interval: tuple, breakpoints: Sequence[float] = (),
                 tol: float = 1e-10, max_panels: int = 20000) -> float:
    """Length of ``curve`` over ``interval`` in the metric of ``g``."""
    metric = _metric_of(g)
    lorentz = metric.signature == LORENTZIAN

    def speed(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        x = np.asarray(curve.position(t), dtype=float).reshape(metric.dim, -1)
        v = np.asarray(curve.velocity(t), dtype=float).reshape(metric.dim, -1)
        gm = np.asarray(metric.values(*x), dtype=float)
        if gm.ndim == 2:
            gm = np.repeat(gm[:, :, None], x.shape[1], axis=2)
        q = np.einsum("ijm,im,jm->m", gm.reshape(metric.dim, metric.dim, -1), v, v)
        if np.any(q < 0) or (lorentz and np.any(q <= 0)):
            raise SpacelikeViolation("curve tangent is not spacelike")
        return np.sqrt(q)

    a, b = interval
    bps = [p for p in breakpoints if a < p < b]
    return quad_adaptive(speed, a, b, tol=tol, max_panels=max_panels, breakpoints=bps)


def r_G_distance(G: BoundFunction, r_M_value, tol: float = 1e-12):
    """``r_G = int_0^{r_M} dr / G(r)``."""
    _require(G, "r_G_distance")
    rho = _Primitive(G, tol)
    return rho(np.asarray(r_M_value, dtype=float))


# ------------------------------------------------------------- verdicts
@dataclass
class Verdict:
    status: str
    checked: int
    violations: list
    quantity: str
    which: str

    @property
    def consistent(self) -> bool:
        return self.status == "consistent"


def completeness_verdict(g: GraphHypersurface, G: BoundFunction, points: Sequence, distances: Sequence[float],
                         which: str = "r_M", quantity: str = "nu_M", rtol: float = 1e-12) -> Verdict:
    """Sample ``quantity(x) <= bound(distance(x))`` and report every violation.

    ``which`` names the distance supplied in ``distances`` (``r``, ``r_M`` or
    ``r_E``).  ``quantity`` is ``nu_M`` (``|nu_M|`` against ``G``), ``nu_E``
    (``|nu|_E`` against ``G``) or ``H`` (``H`` against ``c G``; by
    ``|nu|_E^2 < 2 H^2 / c^2`` it implies ``|nu|_E < sqrt(2) G``).
    This falsifies bounds; it never certifies completeness.
    """
    if which not in ("r", "r_M", "r_E"):
        raise ValueError("which must be 'r', 'r_M' or 'r_E'")
    if quantity not in ("nu_M", "nu_E", "H"):
        raise ValueError("quantity must be 'nu_M', 'nu_E' or 'H'")
    rep = classify_conditions(G)
    if not (rep.a and rep.b == DIVERGENT):
        raise PreconditionError("completeness_verdict needs G with (a) and (b)")
    if which == "r_M" and not rep.c:
        raise PreconditionError("the r_M variant needs a nondecreasing G")
    if g.epsilon != -1:
        raise PreconditionError("completeness verdicts are for Lorentzian graphs")
    violations = []
    for x, d in zip(points, distances):
        p = g.at(tuple(x))
        if quantity == "nu_M":
            nuM = p.nu_M
            lhs = float(np.sqrt(max(nuM @ p.gM.value @ nuM, 0.0)))
            rhs = float(G(d))
        elif quantity == "nu_E":
            nuM = p.nu_M
            lhs = float(np.sqrt(nuM @ p.gM.value @ nuM + p.nu[-1] ** 2))
            rhs = float(G(d))
        else:
            lhs = float(p.H0)
            rhs = g.c * float(G(d))
        if lhs > rhs * (1 + rtol):
            violations.append({"point": tuple(float(v) for v in x), "distance": float(d), "lhs": lhs, "rhs": rhs})
    return Verdict("consistent" if not violations else "violated", len(points), violations, quantity, which)
