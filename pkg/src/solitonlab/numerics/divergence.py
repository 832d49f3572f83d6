"""Three-valued numerical probe for divergence of improper integrals on [a, oo)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .quadrature import QuadratureError, quad_adaptive

__all__ = ["DivergenceVerdict", "ProbeResult", "divergence_probe"]


class DivergenceVerdict:
    DIVERGENT = "divergent"
    CONVERGENT = "convergent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ProbeResult:
    verdict: str
    checkpoints: np.ndarray   # t - a at each checkpoint (1, 10, 100, ...)
    partial_sums: np.ndarray  # int_a^{a + checkpoint} f
    slope: float              # log-log slope of per-decade increments
    tail_estimate: float      # geometric tail bound (inf when not geometric)

    def __str__(self) -> str:
        return self.verdict


def divergence_probe(
    f: Callable,
    a: float = 0.0,
    decades: int = 12,
    tol: float = 1e-4,
    slope_threshold: float = -1.02,
    window: int = 3,
) -> ProbeResult:
    """Classify ``int_a^oo f`` by partial integrals at ``a + 10**k``.

    The integrand is pulled back through ``t = a + e^s - 1`` and integrated
    decade by decade.  With ``d_k`` the increment over decade ``k``:

    * convergent when the last ``window`` increment ratios are at most 1/2 and
      the resulting geometric tail is below ``tol`` relative to the partial sum;
    * divergent when ``d_k`` decays no faster than ``1/k`` (log-log slope of
      ``d_k`` against the decade midpoint ``k - 1/2`` at least
      ``slope_threshold``) over the last ``window`` decades;
    * inconclusive otherwise.

    This is a heuristic.  It cannot certify anything.
    """
    if decades < 8:
        raise ValueError("checkpoints must reach at least 1e8")

    def g(s):
        s = np.asarray(s, dtype=float)
        t = a + np.expm1(s)
        v = np.asarray(f(t), dtype=float) if _vectorised(f) else np.array([float(f(x)) for x in np.atleast_1d(t)]).reshape(t.shape)
        if np.any(~(v > 0)):
            raise ValueError("divergence_probe requires f > 0 on [a, oo)")
        return v * np.exp(s)

    cps = 10.0 ** np.arange(0, decades + 1)
    s_edges = np.concatenate([[0.0], np.log1p(cps)])
    incs = np.array([_increment(g, s_edges[k], s_edges[k + 1]) for k in range(len(cps))])
    partial = np.cumsum(incs)
    d = incs[1:]  # decade increments, decade k spans [10^(k-1), 10^k]
    k = np.arange(1, len(d) + 1)
    last = slice(len(d) - window - 1, len(d))
    dl = d[last]
    mid = k[last] - 0.5
    with np.errstate(divide="ignore"):
        slope = float(np.polyfit(np.log(mid), np.log(np.maximum(dl, 1e-300)), 1)[0])
    ratios = dl[1:] / dl[:-1]
    tail = np.inf
    if np.all(ratios <= 0.5):
        r = float(ratios.max())
        tail = float(d[-1] * r / (1.0 - r))
    if tail <= tol * abs(partial[-1]):
        verdict = DivergenceVerdict.CONVERGENT
    elif slope >= slope_threshold:
        verdict = DivergenceVerdict.DIVERGENT
    else:
        verdict = DivergenceVerdict.INCONCLUSIVE
    return ProbeResult(verdict, cps, partial, slope, tail)


def _increment(g, lo: float, hi: float, rel: float = 1e-10) -> float:
    """One decade to relative accuracy; kinked integrands may settle for 1e-6."""
    rough = quad_adaptive(g, lo, hi, tol=np.inf)
    tol = rel * abs(rough) + 1e-300
    try:
        return quad_adaptive(g, lo, hi, tol=tol, max_panels=4000)
    except QuadratureError as exc:
        if exc.error <= 1e-6 * abs(exc.estimate):
            return exc.estimate
        raise


def _vectorised(f) -> bool:
    try:
        x = np.array([1.0, 2.0])
        return np.asarray(f(x)).shape == (2,)
    except Exception:
        return False
