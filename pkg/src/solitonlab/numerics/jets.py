"""Truncated multivariate Taylor jets.

A :class:`Jet` stores the Taylor coefficients of a (possibly tensor- or
array-valued) function around a base point, truncated at a fixed total degree.
Coefficients live in an array of shape ``(m, *shape)`` where ``m`` is the
number of monomials of total degree ``<= order`` in ``nvars`` variables and
``shape`` is an arbitrary trailing shape.  The trailing axes are used both for
tensor components (metric matrices, Christoffel symbols) and for batches of
base points (grid evaluation); element-wise arithmetic broadcasts over them.

Monomials are sorted by total degree, so truncating to a lower order is a
prefix slice of the coefficient array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as _iproduct
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Jet",
    "JetOrderError",
    "compose_series",
    "jeinsum",
    "jinv",
    "jdet",
    "exp",
    "log",
    "sqrt",
    "sin",
    "cos",
    "tanh",
    "cosh",
    "sinh",
    "arctan",
    "where",
]


class JetOrderError(ValueError):
    """Raised when a computation needs more Taylor orders than a jet carries."""


@dataclass(frozen=True)
class _Table:
    nvars: int
    order: int
    exps: np.ndarray          # (m, nvars) exponents
    index: dict               # exponent tuple -> position
    counts: tuple             # counts[d] = number of monomials of degree <= d
    mul_i: np.ndarray         # pair operand indices, sorted by target
    mul_j: np.ndarray
    mul_starts: np.ndarray    # reduceat offsets, one per target monomial
    factorials: np.ndarray    # prod(alpha_i!) per monomial


@lru_cache(maxsize=None)
def _table(nvars: int, order: int) -> _Table:
    exps = [e for e in _iproduct(range(order + 1), repeat=nvars) if sum(e) <= order]
    exps.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    index = {e: k for k, e in enumerate(exps)}
    counts = tuple(sum(1 for e in exps if sum(e) <= d) for d in range(order + 1))
    pairs = []
    for a, ea in enumerate(exps):
        for b, eb in enumerate(exps):
            s = tuple(x + y for x, y in zip(ea, eb))
            if sum(s) <= order:
                pairs.append((index[s], a, b))
    pairs.sort()
    tgt = np.array([p[0] for p in pairs])
    starts = np.flatnonzero(np.r_[True, tgt[1:] != tgt[:-1]])
    fact = np.array([math.prod(math.factorial(x) for x in e) for e in exps], dtype=float)
    return _Table(
        nvars=nvars,
        order=order,
        exps=np.array(exps, dtype=int).reshape(len(exps), nvars),
        index=index,
        counts=counts,
        mul_i=np.array([p[1] for p in pairs]),
        mul_j=np.array([p[2] for p in pairs]),
        mul_starts=starts,
        factorials=fact,
    )


@lru_cache(maxsize=None)
def _deriv_map(nvars: int, order: int, var: int):
    """Source indices/factors mapping an order-``order`` jet to its ``var`` partial."""
    hi = _table(nvars, order)
    lo = _table(nvars, order - 1)
    src = np.empty(len(lo.exps), dtype=int)
    fac = np.empty(len(lo.exps))
    for k, e in enumerate(lo.exps):
        s = list(e)
        s[var] += 1
        src[k] = hi.index[tuple(s)]
        fac[k] = s[var]
    return src, fac


@lru_cache(maxsize=None)
def _integ_map(order: int):
    """Univariate antiderivative factors (coefficient k -> k+1)."""
    return 1.0 / np.arange(1, order + 1, dtype=float)


def _align(a: np.ndarray, b: np.ndarray):
    """Insert axes after the monomial axis so trailing shapes broadcast numpy-style."""
    if a.ndim < b.ndim:
        a = a.reshape(a.shape[:1] + (1,) * (b.ndim - a.ndim) + a.shape[1:])
    elif b.ndim < a.ndim:
        b = b.reshape(b.shape[:1] + (1,) * (a.ndim - b.ndim) + b.shape[1:])
    return a, b


def _expand(a: np.ndarray, ndim: int) -> np.ndarray:
    """Append singleton axes so a coefficient array broadcasts against ``ndim`` trailing axes."""
    return a.reshape(a.shape + (1,) * (ndim - a.ndim)) if a.ndim < ndim else a


def _real(a) -> np.ndarray:
    """Float array, keeping ``longdouble`` inputs in extended precision."""
    a = np.asarray(a)
    return a if a.dtype == np.longdouble else np.asarray(a, dtype=float)


class Jet:
    """Truncated Taylor expansion in ``nvars`` variables up to total degree ``order``."""

    __slots__ = ("c", "nvars", "order")
    __array_priority__ = 1000

    def __init__(self, coeffs, nvars: int, order: int):
        c = _real(coeffs)
        m = _table(nvars, order).counts[-1]
        if c.shape[0] != m:
            raise ValueError(f"expected {m} coefficients, got {c.shape[0]}")
        self.c = c
        self.nvars = nvars
        self.order = order

    # ------------------------------------------------------------ construction
    @classmethod
    def constant(cls, value, nvars: int, order: int) -> "Jet":
        value = _real(value)
        m = _table(nvars, order).counts[-1]
        c = np.zeros((m,) + value.shape, dtype=value.dtype)
        c[0] = value
        return cls(c, nvars, order)

    @classmethod
    def variables(cls, point: Sequence, order: int) -> tuple["Jet", ...]:
        """Independent variables ``x_i = point_i + t_i`` seeded at ``point``.

        Entries of ``point`` may be arrays (all of one shape) to seed a batch.
        """
        vals = np.broadcast_arrays(*[_real(p) for p in point])
        n = len(vals)
        out = []
        for i, v in enumerate(vals):
            j = cls.constant(v, n, order)
            if order >= 1:
                e = [0] * n
                e[i] = 1
                j.c[_table(n, order).index[tuple(e)]] = 1.0
            out.append(j)
        return tuple(out)

    @classmethod
    def stack(cls, items, nvars: int | None = None, order: int | None = None) -> "Jet":
        """Stack a (nested) sequence of jets/numbers into one tensor-valued jet."""
        flat, shape = _flatten(items)
        jets = [x for x in flat if isinstance(x, Jet)]
        if nvars is None:
            nvars = jets[0].nvars
        if order is None:
            order = min(j.order for j in jets) if jets else 0
        m = _table(nvars, order).counts[-1]
        parts = []
        for x in flat:
            if isinstance(x, Jet):
                parts.append(x.truncate(order).c)
            else:
                parts.append(cls.constant(x, nvars, order).c)
        parts = np.broadcast_arrays(*parts)
        c = np.stack(parts, axis=1)
        c = c.reshape((m,) + shape + c.shape[2:])
        return cls(c, nvars, order)

    # -------------------------------------------------------------- inspection
    @property
    def value(self) -> np.ndarray:
        v = self.c[0]
        return v if v.ndim else float(v)

    @property
    def shape(self) -> tuple:
        return self.c.shape[1:]

    def __repr__(self) -> str:
        return f"Jet(nvars={self.nvars}, order={self.order}, value={self.value!r})"

    def coeff(self, alpha: Sequence[int]):
        k = _table(self.nvars, self.order).index.get(tuple(alpha))
        if k is None:
            raise JetOrderError(f"monomial {tuple(alpha)} beyond order {self.order}")
        return self.c[k]

    def partial(self, alpha: Sequence[int]):
        """Mixed partial derivative of multi-index ``alpha`` at the base point."""
        return self.coeff(alpha) * math.prod(math.factorial(a) for a in alpha)

    def gradient(self) -> np.ndarray:
        """First partials, shape ``(nvars, *shape)``."""
        if self.order < 1:
            raise JetOrderError("gradient needs order >= 1")
        return self.c[1 : 1 + self.nvars].copy()

    def __getitem__(self, idx) -> "Jet":
        if not isinstance(idx, tuple):
            idx = (idx,)
        return Jet(self.c[(slice(None),) + idx], self.nvars, self.order)

    def __len__(self) -> int:
        return self.shape[0]

    def transpose(self, *axes) -> "Jet":
        return Jet(np.transpose(self.c, (0,) + tuple(a + 1 for a in axes)), self.nvars, self.order)

    def reshape(self, *shape) -> "Jet":
        return Jet(self.c.reshape((self.c.shape[0],) + tuple(shape)), self.nvars, self.order)

    def sum(self, axis=None) -> "Jet":
        if axis is None:
            axis = tuple(range(1, self.c.ndim))
        elif isinstance(axis, int):
            axis = axis + 1
        else:
            axis = tuple(a + 1 for a in axis)
        return Jet(self.c.sum(axis=axis), self.nvars, self.order)

    # ------------------------------------------------------------- truncation
    def truncate(self, order: int) -> "Jet":
        if order == self.order:
            return self
        if order > self.order:
            raise JetOrderError(f"cannot raise jet order {self.order} -> {order}")
        m = _table(self.nvars, self.order).counts[order]
        return Jet(self.c[:m], self.nvars, order)

    def d(self, var: int) -> "Jet":
        """Partial derivative with respect to variable ``var`` (order drops by one)."""
        if self.order < 1:
            raise JetOrderError("cannot differentiate an order-0 jet")
        src, fac = _deriv_map(self.nvars, self.order, var)
        return Jet(self.c[src] * _expand(fac, self.c.ndim), self.nvars, self.order - 1)

    def integrate(self) -> "Jet":
        """Antiderivative of a univariate jet vanishing at the base point (order rises by one)."""
        if self.nvars != 1:
            raise ValueError("integrate is defined for univariate jets")
        c = np.zeros((self.order + 2,) + self.shape, dtype=self.c.dtype)
        c[1:] = self.c * _expand(_integ_map(self.order + 1), self.c.ndim)
        return Jet(c, 1, self.order + 1)

    # -------------------------------------------------------------- arithmetic
    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.nvars != self.nvars:
                raise ValueError("jets in different numbers of variables")
            o = min(self.order, other.order)
            return self.truncate(o), other.truncate(o)
        return self, None

    def __neg__(self) -> "Jet":
        return Jet(-self.c, self.nvars, self.order)

    def __pos__(self) -> "Jet":
        return self

    def __add__(self, other) -> "Jet":
        a, b = self._coerce(other)
        if b is not None:
            ac, bc = _align(a.c, b.c)
            return Jet(ac + bc, a.nvars, a.order)
        other = _real(other)
        shape = np.broadcast_shapes(self.shape, other.shape)
        c = np.array(np.broadcast_to(self.c, (self.c.shape[0],) + shape), dtype=np.result_type(self.c, other))
        c[0] = c[0] + other
        return Jet(c, self.nvars, self.order)

    __radd__ = __add__

    def __sub__(self, other) -> "Jet":
        return self + (-other)

    def __rsub__(self, other) -> "Jet":
        return (-self) + other

    def __mul__(self, other) -> "Jet":
        a, b = self._coerce(other)
        if b is None:
            other = _real(other)
            return Jet(self.c * other, self.nvars, self.order)
        t = _table(a.nvars, a.order)
        ac, bc = _align(a.c, b.c)
        prod = ac[t.mul_i] * bc[t.mul_j]
        return Jet(np.add.reduceat(prod, t.mul_starts, axis=0), a.nvars, a.order)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1.0 / _real(other))

    def __rtruediv__(self, other) -> "Jet":
        return self.reciprocal() * other

    def __pow__(self, p) -> "Jet":
        if isinstance(p, (int, np.integer)) and 0 <= p <= 8:
            out = Jet.constant(np.ones(self.shape), self.nvars, self.order)
            for _ in range(int(p)):
                out = out * self
            return out
        return compose_series(self, _series_pow(self.c[0], float(p), self.order))

    def __abs__(self) -> "Jet":
        # smooth away from a zero of the base value
        return self * np.sign(self.c[0])

    def reciprocal(self) -> "Jet":
        return compose_series(self, _series_pow(self.c[0], -1.0, self.order))

    # ------------------------------------------------------------- composition
    def compose(self, subs: Sequence["Jet"]) -> "Jet":
        """Substitute ``t_i -> subs_i`` (each with vanishing constant term).

        The receiver must have scalar-per-point shape broadcastable against
        the substitution jets; the result lives in the variables of ``subs``.
        """
        if len(subs) != self.nvars:
            raise ValueError("need one substitution per variable")
        nv, order = subs[0].nvars, min(min(s.order for s in subs), self.order)
        subs = [s.truncate(order) for s in subs]
        subs = [s - s.c[0] for s in subs]
        powers = []
        for s in subs:
            pw = [Jet.constant(1.0, nv, order)]
            for _ in range(order):
                pw.append(pw[-1] * s)
            powers.append(pw)
        tab = _table(self.nvars, self.order)
        out = None
        for k, e in enumerate(tab.exps):
            if e.sum() > order:
                break
            term = None
            for i, p in enumerate(e):
                if p:
                    term = powers[i][p] if term is None else term * powers[i][p]
            ck = self.c[k]
            if term is None:
                contrib = Jet.constant(ck, nv, order)
            elif term.c.ndim == 1 or term.shape == ck.shape:
                # scalar substitution (outer) or matching batch (element-wise)
                contrib = Jet(_expand(term.c, 1 + ck.ndim) * ck, nv, order)
            elif ck.ndim == 0:
                contrib = Jet(term.c * ck, nv, order)
            else:
                raise ValueError("compose: incompatible substitution and value shapes")
            out = contrib if out is None else out + contrib
        return out


def _flatten(items):
    if isinstance(items, (list, tuple)):
        if not items:
            return [], (0,)
        subs = [_flatten(x) for x in items]
        flat = [y for s in subs for y in s[0]]
        return flat, (len(items),) + subs[0][1]
    return [items], ()


# ------------------------------------------------------------ tensor helpers
def jeinsum(spec: str, a, b) -> Jet:
    """Einstein summation over the trailing (tensor) axes of two jets.

    ``spec`` follows :func:`numpy.einsum` but only names the trailing axes.
    Either operand may be a plain array, treated as a constant.
    """
    lhs, out = spec.split("->")
    sa, sb = lhs.split(",")
    if not isinstance(a, Jet) and not isinstance(b, Jet):
        return np.einsum(spec, a, b)
    if not isinstance(a, Jet):
        return Jet(np.einsum(f"{sa},z{sb}->z{out}", np.asarray(a, float), b.c), b.nvars, b.order)
    if not isinstance(b, Jet):
        return Jet(np.einsum(f"z{sa},{sb}->z{out}", a.c, np.asarray(b, float)), a.nvars, a.order)
    a, b = a._coerce(b)
    t = _table(a.nvars, a.order)
    prod = np.einsum(f"z{sa},z{sb}->z{out}", a.c[t.mul_i], b.c[t.mul_j])
    return Jet(np.add.reduceat(prod, t.mul_starts, axis=0), a.nvars, a.order)


def jinv(g: Jet) -> Jet:
    """Inverse of a square-matrix-valued jet (trailing shape ``(n, n)``)."""
    g0 = g.c[0]
    g0inv = np.linalg.inv(g0)
    nil = g - g0
    x = -jeinsum("ij,jk->ik", g0inv, nil)
    term = Jet.constant(g0inv, g.nvars, g.order)
    out = term
    for _ in range(g.order):
        term = jeinsum("ij,jk->ik", x, term)
        out = out + term
    return out


def jdet(g: Jet) -> Jet:
    """Determinant of a 1x1, 2x2 or 3x3 matrix-valued jet."""
    n = g.shape[0]
    if n == 1:
        return g[0, 0]
    if n == 2:
        return g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    if n == 3:
        return (
            g[0, 0] * (g[1, 1] * g[2, 2] - g[1, 2] * g[2, 1])
            - g[0, 1] * (g[1, 0] * g[2, 2] - g[1, 2] * g[2, 0])
            + g[0, 2] * (g[1, 0] * g[2, 1] - g[1, 1] * g[2, 0])
        )
    raise ValueError("jdet supports dimension <= 3")


def where(mask, a, b):
    """Element-wise select between two jets (or constants) of a common layout."""
    mask = np.asarray(mask, dtype=bool)
    if not isinstance(a, Jet) and not isinstance(b, Jet):
        return np.where(mask, a, b)
    ref = a if isinstance(a, Jet) else b
    if not isinstance(a, Jet):
        a = Jet.constant(np.broadcast_to(a, ref.shape), ref.nvars, ref.order)
    if not isinstance(b, Jet):
        b = Jet.constant(np.broadcast_to(b, ref.shape), ref.nvars, ref.order)
    a, b = a._coerce(b)
    return Jet(np.where(mask, a.c, b.c), a.nvars, a.order)


# ---------------------------------------------------- univariate series core
def compose_series(x: Jet, coeffs: np.ndarray) -> Jet:
    """Evaluate ``sum_k coeffs[k] * (x - x0)**k`` by Horner's rule."""
    delta = x - x.c[0]
    out = Jet.constant(coeffs[x.order], x.nvars, x.order)
    for k in range(x.order - 1, -1, -1):
        out = out * delta + coeffs[k]
    return out


def _series_exp(a0, n):
    e = np.exp(a0)
    return np.array([e / math.factorial(k) for k in range(n + 1)])


def _series_log(a0, n):
    out = [np.log(a0)]
    for k in range(1, n + 1):
        out.append((-1.0) ** (k + 1) / (k * a0**k))
    return np.array(out)


def _series_pow(a0, p, n):
    a0 = _real(a0)
    out = [a0**p]
    for k in range(1, n + 1):
        out.append(out[-1] * (p - k + 1) / (k * a0))
    return np.array(out)


def _series_sin(a0, n, shift=0):
    s, c = np.sin(a0), np.cos(a0)
    cyc = (s, c, -s, -c)
    return np.array([cyc[(k + shift) % 4] / math.factorial(k) for k in range(n + 1)])


def _series_tanh(a0, n):
    t = [np.tanh(a0)]
    for k in range(n):
        conv = sum(t[i] * t[k - i] for i in range(k + 1))
        t.append(((1.0 if k == 0 else 0.0) - conv) / (k + 1))
    return np.array(t)


def _series_cosh(a0, n, sign=1.0):
    ep, em = np.exp(a0), np.exp(-a0)
    return np.array([(ep + sign * (-1.0) ** k * em) / (2 * math.factorial(k)) for k in range(n + 1)])


def _series_arctan(a0, n):
    # d/dx arctan = 1/(q0 + 2 a0 t + t^2); reciprocal series by recursion
    q0 = 1.0 + a0 * a0
    r = [1.0 / q0 * np.ones_like(a0)]
    for k in range(1, n):
        prev2 = r[k - 2] if k >= 2 else 0.0
        r.append(-(2 * a0 * r[k - 1] + prev2) / q0)
    return np.array([np.arctan(a0)] + [r[k - 1] / k for k in range(1, n + 1)])


def _unary(npfunc: Callable, series: Callable):
    def f(x):
        if isinstance(x, Jet):
            return compose_series(x, series(x.c[0], x.order))
        return npfunc(x)

    f.__name__ = npfunc.__name__
    return f


exp = _unary(np.exp, _series_exp)
log = _unary(np.log, _series_log)
tanh = _unary(np.tanh, _series_tanh)
cosh = _unary(np.cosh, _series_cosh)
sinh = _unary(np.sinh, lambda a, n: _series_cosh(a, n, -1.0))
sin = _unary(np.sin, _series_sin)
cos = _unary(np.cos, lambda a, n: _series_sin(a, n, 1))
arctan = _unary(np.arctan, _series_arctan)


def sqrt(x):
    if isinstance(x, Jet):
        return x**0.5
    return np.sqrt(x)
