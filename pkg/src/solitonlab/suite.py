"""The verification suite behind ``solitonlab verify``.

Every check samples points with a seeded generator and reduces to one
number, ``max_residual``, compared against ``tolerance``.  Identity checks
report relative residuals; inequality checks report the largest violation
(zero when the inequality holds everywhere sampled).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from . import bounds as B
from . import lorentz_graphs as L
from .chart_calculus import gauss_curvature_conformal
from .lorentz_graphs import GraphHypersurface, ProductSpace, induced_metric
from .numerics.shortest_path import grid_distance_field
from .soliton_zoo import (
    SolitonProfile,
    build_example_curve,
    example_curve_checks,
    grim_reaper,
    solve_profile_ode,
)

__all__ = ["Check", "VerifyConfig", "run_verify", "distance_ordering", "strip_samples", "grim_samples"]


@dataclass(frozen=True)
class Check:
    check: str
    paper_ref: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


@dataclass(frozen=True)
class VerifyConfig:
    seed: int = 0
    samples: int = 100
    lemma_pairs: int = 10_000
    grid: int = 80
    delta: float = 1e-6
    tol: Optional[float] = None


def _check(name, ref, n, residual, tol, override):
    t = override if override is not None else tol
    residual = float(residual)
    return Check(name, ref, int(n), residual, float(t), bool(np.isfinite(residual) and residual <= t))


def grim_samples(rng: np.random.Generator, n: int, half_width: float = 3.0):
    return [(float(rng.uniform(-half_width, half_width)), float(rng.uniform(-2.0, 2.0))) for _ in range(n)]


def strip_samples(rng: np.random.Generator, n: int, y_max: float = 0.9):
    return [(float(rng.uniform(-1.0, 1.0)), float(rng.uniform(-y_max, y_max))) for _ in range(n)]


REFS = {
    "height_gradient": "|grad h|^2 = eps (1 - H^2/c^2)",
    "hessian_height": "nabla^2(ch)(X,X) = eps H g(AX,X)",
    "drift_laplacian_H": "-eps Delta H = g(grad H, grad ch) + (Ric_M(nu_M,nu_M) + |A|^2) H",
    "gauss_equation_ricci": "Ric_Sigma(X,X) = Ric_bar(X,X) + R_bar(X,nu,X,nu) + H g(AX,X) + |AX|^2",
    "nu_E_relation": "|nu|_E^2 = 2 H^2/c^2 - 1 and H^2/c^2 <= |nu|_E^2 < 2 H^2/c^2",
    "mean_curvature_agreement": "trace form eps tr A equals eps c g_bar(d_t, nu)",
    "self_adjoint": "g(AX,Y) = g(X,AY)",
    "bakry_emery": "Ric_ch(X,X) >= -(n kappa/c^2) G^2 |X|^2",
    "qiu_chen": "-f Delta_ch f + 3|grad f|^2 >= (c^2/n)(1 - f^2)^2, f = -1/sqrt(1 + H^2/c^2)",
    "lemma_X": "|X|_E <= |nu|_E, equality iff d_t, nu, X span a 2-plane",
    "jacobi": "w'' = Gbar^2 w: w, w', w'' > 0 and w'/w <= lambda(2) Gbar(t) for t >= 2",
    "soliton_residual": "div_M(grad u / W) = c / W",
    "example_curve": "oscillating spacelike curve: witnesses G(x_n) >= 2^((n-1)/2), length grows linearly",
    "distance_ordering": "r_G <= r <= r_M <= r_E",
}


def _identity_suite(name: str, g: GraphHypersurface, points, rng, cfg: VerifyConfig, tol: float) -> list[Check]:
    res = {k: 0.0 for k in ("height_gradient", "hessian_height", "drift_laplacian_H", "gauss_equation_ricci",
                            "nu_E_relation", "mean_curvature_agreement", "self_adjoint")}
    for x in points:
        p = g.at(x)
        X = L.sample_unit_tangent(g, p, rng)
        res["height_gradient"] = max(res["height_gradient"], abs(L.height_gradient_check(g, p).relative))
        res["hessian_height"] = max(res["hessian_height"], abs(L.hessian_height_check(g, p, X).relative))
        res["drift_laplacian_H"] = max(res["drift_laplacian_H"], abs(L.drift_laplacian_H_check(g, p).relative))
        res["gauss_equation_ricci"] = max(res["gauss_equation_ricci"], abs(L.gauss_equation_ricci_check(g, p, X).relative))
        nu_rel = abs(L.nu_E_relation_check(g, p).relative)
        lo, mid, hi = L.nu_E_bounds(g, p)
        if not (lo * (1 - 1e-12) <= mid < hi):
            nu_rel = math.inf
        res["nu_E_relation"] = max(res["nu_E_relation"], nu_rel)
        res["mean_curvature_agreement"] = max(res["mean_curvature_agreement"], abs(p.H0 - p.H_soliton) / abs(p.H0))
        res["self_adjoint"] = max(res["self_adjoint"], p.self_adjoint_defect)
    out = []
    for k, v in res.items():
        t = 1e-9 if k in ("mean_curvature_agreement", "self_adjoint") else tol
        out.append(_check(f"{k}.{name}", REFS[k], len(points), v, t, cfg.tol))
    return out


def _kappa_band(profile: SolitonProfile, y_max: float, n: int = 721) -> float:
    ys = np.linspace(-y_max, y_max, n)
    K = np.array([gauss_curvature_conformal(profile.phi, float(y)) for y in ys])
    return max(0.0, float(-K.min()))


def run_verify(cfg: VerifyConfig = VerifyConfig(), profile: Optional[SolitonProfile] = None,
               progress: Optional[Callable[[str], None]] = None) -> list[Check]:
    """Run every check; the list is sorted by check name."""
    say = progress or (lambda s: None)
    rng = np.random.default_rng(cfg.seed)
    checks: list[Check] = []
    if profile is None:
        profile = solve_profile_ode(delta=cfg.delta)
    strip = profile.graph()
    reaper = grim_reaper(-1)

    say("identities")
    gpts = grim_samples(rng, cfg.samples)
    spts = strip_samples(rng, cfg.samples)
    checks += _identity_suite("grim_reaper", reaper, gpts, rng, cfg, 1e-6)
    checks += _identity_suite("strip", strip, spts, rng, cfg, 1e-6)

    say("inequalities")
    # Bakry-Emery: flat base with kappa = 0; strip with measured kappa and G = sup H on the band
    G_grim = B.constant(math.cosh(3.0))
    viol = 0.0
    for x in gpts:
        p = reaper.at(x)
        X = L.sample_unit_tangent(reaper, p, rng)
        viol = max(viol, -L.bakry_emery_check(reaper, p, X, G_grim, 0.0, 0.0).value)
    checks.append(_check("bakry_emery.grim_reaper", REFS["bakry_emery"], len(gpts), max(viol, 0.0), 1e-8, cfg.tol))
    kappa = _kappa_band(profile, 0.9)
    G_strip = B.constant(float(profile.H(0.9)) * (1 + 1e-9))
    viol = 0.0
    for x in spts:
        p = strip.at(x)
        X = L.sample_unit_tangent(strip, p, rng)
        viol = max(viol, -L.bakry_emery_check(strip, p, X, G_strip, 0.0, kappa).value)
    checks.append(_check("bakry_emery.strip", REFS["bakry_emery"], len(spts), max(viol, 0.0), 1e-8, cfg.tol))

    viol = 0.0
    for x in gpts:
        viol = max(viol, -L.qiu_chen_inequality_check(reaper, x).value)
    checks.append(_check("qiu_chen.grim_reaper", REFS["qiu_chen"], len(gpts), max(viol, 0.0), 1e-8, cfg.tol))

    say("lemma X")
    viol = 0.0
    for k in range(cfg.lemma_pairs):
        coplanar = k % 10 == 0
        nu, X = L.sample_lorentz_pair(3, rng, coplanar=coplanar)
        xe, ne, defect = L.lemma_X_property(nu, X)
        viol = max(viol, (xe - ne) / ne)
        if coplanar:
            viol = max(viol, abs(xe - ne) / ne)
        elif defect > 1e-6 and not xe < ne:
            viol = max(viol, 1.0)
    checks.append(_check("lemma_X", REFS["lemma_X"], cfg.lemma_pairs, max(viol, 0.0), 1e-12, cfg.tol))

    say("jacobi")
    for label, Gb in (("const", B.constant(1.0)), ("affine", B.affine(1.0, 1.0))):
        rep = B.jacobi_comparison(Gb, 50.0)
        resid = max(0.0, rep.max_bound_ratio - 1.0, -rep.min_wronskian)
        if not rep.positive:
            resid = math.inf
        if label == "const":
            resid = max(resid, float(np.max(np.abs(np.exp(rep.logw - np.log(np.sinh(rep.t))) - 1.0))))
        checks.append(_check(f"jacobi.{label}", REFS["jacobi"], len(rep.t), resid, 1e-9, cfg.tol))

    say("residuals")
    xs = np.linspace(-5.0, 5.0, 500)
    r = max(abs(L.soliton_residual(reaper, (float(x), 0.0))) for x in xs)
    checks.append(_check("soliton_residual.grim_reaper", REFS["soliton_residual"], len(xs), r, 1e-10, cfg.tol))
    riem = grim_reaper(1)
    xs = np.linspace(-1.5, 1.5, 500)
    r = max(abs(L.soliton_residual(riem, (float(x), 0.0))) for x in xs)
    checks.append(_check("soliton_residual.grim_reaper_riemannian", REFS["soliton_residual"], len(xs), r, 1e-10, cfg.tol))
    ys = np.linspace(-(1 - 1e-3), 1 - 1e-3, 200)
    r = max(abs(L.soliton_residual(strip, (0.25, float(y)))) for y in ys)
    checks.append(_check("soliton_residual.strip", REFS["soliton_residual"], len(ys), r, 1e-8, cfg.tol))

    say("example curve")
    rep = example_curve_checks(build_example_curve(11), length_to=50.0)
    resid = max(0.0, rep["max_abs_udot"] - (1.0 - 1e-12))
    for w in rep["witnesses"]:
        resid = max(resid, (w["lower"] - w["G"]) / w["lower"], abs(w["udot"] - w["target"]))
    resid = max(resid, (20.0 - rep["length"]) / 20.0, rep["pattern_defect"])
    checks.append(_check("example_curve", REFS["example_curve"], len(rep["witnesses"]), resid, 1e-9, cfg.tol))

    say("distances")
    d = distance_ordering(profile, rng, cfg.grid)
    checks.append(_check("distance_ordering", REFS["distance_ordering"], len(d["points"]), d["max_violation"], 0.03, cfg.tol))

    return sorted(checks, key=lambda c: c.check)


def distance_ordering(profile: SolitonProfile, rng: np.random.Generator, resolution: int = 80, pairs: int = 10,
                      box=((-1.0, 1.0), (-0.9, 0.9)), G: Optional[B.BoundFunction] = None) -> dict:
    """Grid distances from the origin under ``g``, ``g_M`` and ``g_E``, plus ``r_G``.

    ``G`` defaults to ``r + 1``; the hypothesis ``H <= G(r_M)`` is checked on
    every grid node (with the grid ``r_M``) and a failure is reported as an
    infinite violation.  ``max_violation`` is the largest relative breach of
    the chain ``r_G <= r <= r_M <= r_E``.
    """
    G = G or B.affine(1.0, 1.0)
    strip = profile.graph()
    eucl = GraphHypersurface(ProductSpace(profile.phi.metric(), 1), profile.u, c=1.0, soliton=False, name="euclidean lift")
    fields = {
        "r": grid_distance_field(induced_metric(strip), box, resolution, (0.0, 0.0)),
        "r_M": grid_distance_field(profile.phi.metric(), box, resolution, (0.0, 0.0)),
        "r_E": grid_distance_field(induced_metric(eucl), box, resolution, (0.0, 0.0)),
    }
    fM = fields["r_M"]
    Hgrid = np.asarray(profile.H(fM.ys))[None, :]
    hyp_ok = bool(np.all(Hgrid <= np.asarray(G(fM.dist)) * (1 + 1e-12)))
    (x0, x1), (y0, y1) = box
    pts = [(float(rng.uniform(x0, x1)), float(rng.uniform(y0, y1))) for _ in range(pairs)]
    rows = []
    worst = 0.0
    for q in pts:
        r, rM, rE = (fields[k].at(q) for k in ("r", "r_M", "r_E"))
        rG = float(B.r_G_distance(G, rM))
        chain = [rG, r, rM, rE]
        for a, b in zip(chain, chain[1:]):
            worst = max(worst, (a - b) / max(b, 1e-300))
        rows.append({"point": q, "r_G": rG, "r": r, "r_M": rM, "r_E": rE})
    if not hyp_ok:
        worst = math.inf
    return {"points": rows, "max_violation": max(worst, 0.0), "hypothesis_H_le_G": hyp_ok}
