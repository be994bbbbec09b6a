"""Doubling weights, block sequences and the integral regularization.

A weight is a positive nondecreasing function on ``[1, ∞)`` normalized by
``g(1) = 1``.  Arguments below 1 are clamped to 1, so ``g(0) = g(1)``.

Smooth families expose Taylor coefficients ``w^{(i)}(x) / i!``; products,
quotients and ``(1 + log w)^β`` compositions inherit them through series
arithmetic, which is what :func:`regularity_ratio` consumes.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy import integrate
from scipy.special import gammaln

__all__ = [
    "Weight",
    "PowerWeight",
    "LogPowerWeight",
    "ProductWeight",
    "LogOfWeight",
    "TabulatedWeight",
    "RegularizedWeight",
    "BlockSequence",
    "NotAWeightError",
    "QuadratureError",
    "QuadSpec",
    "doubling_constant",
    "blocks",
    "regularity_ratio",
    "regularize",
    "regularize_moments",
    "cesaro_power_series",
    "parse_weight",
]


class NotAWeightError(ValueError):
    """Raised for tables or combinations that are not nondecreasing."""


class QuadratureError(RuntimeError):
    """Quadrature did not reach its tolerance; ``partial`` holds the estimate."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


# -- truncated Taylor series arithmetic ------------------------------------
# Coefficient arrays have shape (m + 1, *x.shape); c[i] = w^{(i)}(x) / i!.


def _series_mul(a, b):
    out = np.zeros_like(a)
    for n in range(a.shape[0]):
        for k in range(n + 1):
            out[n] = out[n] + a[k] * b[n - k]
    return out


def _series_pow(c, e):
    # J.C.P. Miller recurrence for b = c**e, needs c[0] != 0
    b = np.zeros_like(c)
    b[0] = c[0] ** e
    for n in range(1, c.shape[0]):
        acc = np.zeros_like(c[0])
        for k in range(1, n + 1):
            acc = acc + ((e + 1) * k - n) * c[k] * b[n - k]
        b[n] = acc / (n * c[0])
    return b


def _series_log(c):
    out = np.zeros_like(c)
    out[0] = np.log(c[0])
    for n in range(1, c.shape[0]):
        acc = c[n].copy()
        for k in range(1, n):
            acc = acc - k * out[k] * c[n - k] / n
        out[n] = acc / c[0]
    return out


class Weight:
    """Base class; subclasses implement ``_eval`` and optionally ``_taylor``."""

    family = "abstract"
    smooth = True

    def __init__(self, name: str):
        self.name = name
        self._doubling: dict = {}

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = self._eval(np.maximum(x, 1.0))
        return float(out) if out.ndim == 0 else out

    def _eval(self, x):
        raise NotImplementedError

    def _taylor(self, x, m):
        raise NotImplementedError(f"{self.family} weights have no derivatives")

    def taylor(self, x, m: int):
        """Taylor coefficients ``w^{(i)}(x) / i!`` for ``i = 0..m``."""
        if not self.smooth:
            raise ValueError("regularity undefined for tables")
        x = np.asarray(x, dtype=float)
        return self._taylor(x, m)

    def derivative(self, x, m: int):
        """``w^{(m)}(x)`` for ``x >= 1``."""
        c = self.taylor(x, m)[m] * math.factorial(m)
        return float(c) if np.ndim(c) == 0 else c

    @property
    def doubling_D(self):
        """Most recently computed doubling constant, or ``None``."""
        if not self._doubling:
            return None
        return self._doubling[max(self._doubling)]

    def __mul__(self, other):
        if not isinstance(other, Weight):
            return NotImplemented
        return ProductWeight(((self, 1.0), (other, 1.0)))

    def __truediv__(self, other):
        if not isinstance(other, Weight):
            return NotImplemented
        return ProductWeight(((self, 1.0), (other, -1.0)))

    def __pow__(self, e):
        return ProductWeight(((self, float(e)),))


class PowerWeight(Weight):
    """``x^α``."""

    family = "power"

    def __init__(self, alpha: float):
        self.alpha = float(alpha)
        super().__init__(f"pow:{_fmt(self.alpha)}")

    def _eval(self, x):
        return x**self.alpha

    def _taylor(self, x, m):
        out = np.empty((m + 1,) + x.shape)
        coef = 1.0
        for i in range(m + 1):
            out[i] = coef * x ** (self.alpha - i)
            coef *= (self.alpha - i) / (i + 1)
        return out


class LogPowerWeight(Weight):
    """``(1 + log x)^β``; ``β = 0`` is the constant weight."""

    family = "logpower"

    def __init__(self, beta: float):
        self.beta = float(beta)
        super().__init__(f"logpow:{_fmt(self.beta)}")

    def _eval(self, x):
        return (1.0 + np.log(x)) ** self.beta

    def _taylor(self, x, m):
        c = np.zeros((m + 1,) + x.shape)
        c[0] = 1.0 + np.log(x)
        for i in range(1, m + 1):
            c[i] = (-1.0) ** (i + 1) / (i * x**i)
        return _series_pow(c, self.beta)


class ProductWeight(Weight):
    """``Π w_i(x)^{e_i}``; used for ``f·g``, ``g/f`` and powers."""

    family = "product"

    def __init__(self, terms):
        self.terms = tuple((w, float(e)) for w, e in terms)
        self.smooth = all(w.smooth for w, _ in self.terms)
        parts = []
        for w, e in self.terms:
            if e == 1.0:
                parts.append(w.name)
            elif e == -1.0:
                parts.append(f"inv({w.name})")
            else:
                parts.append(f"({w.name})^{_fmt(e)}")
        super().__init__("*".join(parts))

    def _eval(self, x):
        out = np.ones_like(x)
        for w, e in self.terms:
            out = out * w._eval(x) ** e
        return out

    def _taylor(self, x, m):
        out = np.zeros((m + 1,) + x.shape)
        out[0] = 1.0
        for w, e in self.terms:
            c = w._taylor(x, m)
            out = _series_mul(out, c if e == 1.0 else _series_pow(c, e))
        return out


class LogOfWeight(Weight):
    """``(1 + log w(x))^β`` for an inner weight ``w``."""

    family = "logof"

    def __init__(self, inner: Weight, beta: float = 1.0):
        self.inner = inner
        self.beta = float(beta)
        self.smooth = inner.smooth
        super().__init__(f"logof:{_fmt(self.beta)},{inner.name}")

    def _eval(self, x):
        return (1.0 + np.log(self.inner._eval(x))) ** self.beta

    def _taylor(self, x, m):
        lc = _series_log(self.inner._taylor(x, m))
        lc[0] = lc[0] + 1.0
        return _series_pow(lc, self.beta)


class TabulatedWeight(Weight):
    """Piecewise-linear weight through ``(x_i, g_i)`` with ``x_0 = 1``, ``g_0 = 1``.

    Past the last node the weight continues as a power law with the slope of
    the last segment in log-log coordinates.
    """

    family = "tabulated"
    smooth = False

    def __init__(self, x, g, name: str | None = None):
        x = np.asarray(x, dtype=float)
        g = np.asarray(g, dtype=float)
        if x.ndim != 1 or x.shape != g.shape or x.size < 2:
            raise ValueError("table needs at least two (x, g) rows")
        if x[0] != 1.0 or np.any(np.diff(x) <= 0):
            raise ValueError("table x must start at 1 and increase strictly")
        if not np.isclose(g[0], 1.0, rtol=0, atol=1e-12):
            raise ValueError("table must satisfy g(1) = 1")
        if np.any(g <= 0) or np.any(np.diff(g) < 0):
            raise NotAWeightError("not a weight: table values must be positive and nondecreasing")
        self.x = x
        self.g = g
        if g[-1] > g[-2]:
            self._tail_slope = math.log(g[-1] / g[-2]) / math.log(x[-1] / x[-2])
        else:
            self._tail_slope = 0.0
        super().__init__(name or f"table[{x.size}]")

    @classmethod
    def from_csv(cls, path):
        rows = []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError:
                    continue  # header line
        arr = np.array(rows)
        return cls(arr[:, 0], arr[:, 1], name=f"table:{path}")

    def _eval(self, x):
        inside = np.interp(x, self.x, self.g)
        tail = self.g[-1] * (x / self.x[-1]) ** self._tail_slope
        return np.where(x <= self.x[-1], inside, tail)


@dataclass(frozen=True)
class QuadSpec:
    """Controls the dyadic Stieltjes quadrature of :func:`regularize`."""

    rel_tol: float = 1e-13
    max_level: int = 400


def _pieces(alpha, q, k, spec: QuadSpec):
    """``j_k(α) = ∫_{1/2}^1 |log t|^k t^α d(-1/w(t))`` after integrating by parts.

    With ``u = 1 - t`` and ``L = -log(1 - u)`` this equals
    ``L(1/2)^k 2^{-α} / q(2) + ∫_0^{1/2} (1-u)^{α-1} (α L^k - k L^{k-1}) / q(1/u) du``.
    Pieces are dyadic in ``u``.
    """
    L_half = math.log(2.0)
    total = L_half**k * 0.5**alpha / float(q(2.0))

    def integrand(u):
        L = -math.log1p(-u)
        core = alpha * L**k - (k * L ** (k - 1) if k > 0 else 0.0)
        return math.exp((alpha - 1.0) * math.log1p(-u)) * core / float(q(1.0 / u))

    level = 1
    while level <= spec.max_level:
        lo, hi = 2.0 ** -(level + 1), 2.0**-level
        val, _ = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=max(spec.rel_tol, 1e-12), limit=200)
        total += val
        # remaining piece [0, lo]: integrand magnitude ≤ (α L^k + k L^{k-1}) / q(1/u)
        Lb = -math.log1p(-lo)
        bound = lo * (alpha * Lb**k + k * Lb ** max(k - 1, 0)) / float(q(1.0 / lo))
        if abs(bound) <= spec.rel_tol * abs(total) or bound == 0.0:
            return total
        level += 1
    raise QuadratureError(
        f"regularization tail above tolerance at level {spec.max_level}", partial=total
    )


def regularize_moments(q: Weight, alpha: float, kmax: int, spec: QuadSpec | None = None):
    """Return ``[j_0(α), ..., j_kmax(α)]``."""
    spec = spec or QuadSpec()
    return np.array([_pieces(float(alpha), q, k, spec) for k in range(kmax + 1)])


def regularize(q: Weight, alpha: float, quad: QuadSpec | None = None) -> float:
    """``f(α) = (∫_{1/2}^1 t^α d(-1/w(t)))^{-1}`` with ``w(t) = q(1/(1-t))``."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    return 1.0 / _pieces(float(alpha), q, 0, quad or QuadSpec())


class RegularizedWeight(Weight):
    """The regularization ``f`` of a doubling weight ``q``.

    Values are the raw integrals: ``f(1) = 8/3`` for ``q(x) = x``, so the
    ``g(1) = 1`` normalization does not hold for this family.  ``f(0)`` is
    the true moment value ``q(2)``, which is what ``I_q`` needs.
    """

    family = "regularized"

    def __init__(self, q: Weight, quad: QuadSpec | None = None):
        self.q = q
        self.quad = quad or QuadSpec()
        self.smooth = True
        super().__init__(f"reg:{q.name}")
        self._value = lru_cache(maxsize=None)(self._value_uncached)

    def _value_uncached(self, alpha: float) -> float:
        return regularize(self.q, alpha, self.quad)

    def __call__(self, x):
        # no clamping: the regularization is defined for every α >= 0
        x = np.asarray(x, dtype=float)
        return self._eval(x)

    def _eval(self, x):
        flat = np.array([self._value(float(a)) for a in np.ravel(x)])
        out = flat.reshape(np.shape(x))
        return float(out) if out.ndim == 0 else out

    def _taylor(self, x, m):
        xs = np.ravel(x)
        out = np.empty((m + 1, xs.size))
        for idx, a in enumerate(xs):
            j = regularize_moments(self.q, a, m, self.quad)
            c = np.array([(-1.0) ** i * j[i] / math.factorial(i) for i in range(m + 1)])
            out[:, idx] = _series_pow(c.reshape(m + 1, 1), -1.0)[:, 0]
        return out.reshape((m + 1,) + np.shape(x))


def _fmt(v: float) -> str:
    return f"{v:g}"


# -- doubling, blocks, regularity -------------------------------------------


def doubling_constant(g: Weight, x_max: float, n_grid: int = 512) -> float:
    """``sup g(2x)/g(x)`` over ``n_grid`` log-spaced points of ``[1, x_max]``."""
    if x_max < 2:
        raise ValueError("x_max must be at least 2")
    x = np.geomspace(1.0, x_max, n_grid)
    gx = np.asarray(g(x), dtype=float)
    g2x = np.asarray(g(2 * x), dtype=float)
    both = np.asarray(g(np.sort(np.concatenate([x, 2 * x]))), dtype=float)
    if np.any(np.diff(both) < -1e-12 * np.abs(both[1:])) or np.any(both <= 0):
        raise NotAWeightError(f"not a weight: {g.name} decreases on [1, {2 * x_max:g}]")
    D = float(np.max(g2x / gx))
    g._doubling[float(x_max)] = D
    return D


@dataclass(frozen=True)
class BlockSequence:
    """Cuts ``n_0 < n_1 < ...`` with ``n_{k+1} = min{l : f(l) >= A f(n_k)}``."""

    cuts: tuple
    ratio_A: float
    source_weight: Weight | None = None
    truncated: bool = False

    def __len__(self):
        return len(self.cuts)

    def block_of(self, k: int) -> int:
        """Index ``m`` with ``k ∈ J_m`` (``J_0 = {k <= n_0}``); -1 past the last cut."""
        idx = int(np.searchsorted(self.cuts, k, side="left"))
        return idx if idx < len(self.cuts) else -1

    def check_invariant(self, D: float | None = None) -> bool:
        f = self.source_weight
        if f is None:
            return True
        if D is None:
            D = doubling_constant(f, max(2.0, float(self.cuts[-1])))
        vals = np.asarray(f(np.array(self.cuts, dtype=float)))
        lo = self.ratio_A * vals[:-1]
        hi = self.ratio_A * D * vals[:-1]
        rt = 1e-12
        return bool(np.all(vals[1:] >= lo * (1 - rt)) and np.all(vals[1:] <= hi * (1 + rt)))


def blocks(f: Weight, A: float = 2.0, k_max: int = 10, n0: int = 1, cap: int = 2**53) -> BlockSequence:
    """Block cuts of ``f`` with ratio ``A``; ``k_max + 1`` cuts unless ``cap`` is hit."""
    if A <= 1:
        raise ValueError("A must exceed 1")
    cuts = [int(n0)]
    truncated = False
    for _ in range(k_max):
        target = A * float(f(cuts[-1]))
        lo = cuts[-1]  # f(lo) < target
        hi = lo + 1
        while float(f(hi)) < target:
            lo, hi = hi, 2 * hi
            if hi > cap:
                break
        if hi > cap:
            truncated = True
            break
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if float(f(mid)) >= target:
                hi = mid
            else:
                lo = mid
        cuts.append(hi)
    return BlockSequence(tuple(cuts), float(A), f, truncated)


def regularity_ratio(f: Weight, d: int, t_grid) -> float:
    """``max_{1<=m<=d+1, t} |f^{(m)}(t)| t^{m-1} / f'(t)``."""
    if not f.smooth:
        raise ValueError("regularity undefined for tables")
    t = np.asarray(t_grid, dtype=float)
    c = f.taylor(t, d + 1)
    f1 = c[1]
    if np.all(c[1:] == 0):
        return 0.0  # constant weight: every derivative vanishes
    if np.any(f1 <= 0):
        raise ValueError(f"{f.name} is not strictly increasing on the grid")
    best = 0.0
    for m in range(1, d + 2):
        fm = c[m] * math.factorial(m)
        best = max(best, float(np.max(np.abs(fm) * t ** (m - 1) / f1)))
    return best


def cesaro_power_series(g: Weight, m: float, r: float, rel_tail: float = 1e-13, cap: int = 10**8):
    """``Σ_k r^k A_k^m g(k)`` truncated once a chunk adds less than ``rel_tail``.

    Returns ``(value, terms_used)``.
    """
    if not 0 <= r < 1:
        raise ValueError("r must lie in [0, 1)")
    scale = 1.0 / (1.0 - r)
    chunk = int(max(64, 8 * scale))
    total = 0.0
    start = 0
    log_r = math.log(r) if r > 0 else -math.inf
    while start < cap:
        k = np.arange(start, start + chunk, dtype=float)
        # log A_k^m = lgamma(k+m+1) - lgamma(k+1) - lgamma(m+1)
        logA = gammaln(k + m + 1) - gammaln(k + 1) - gammaln(m + 1)
        with np.errstate(invalid="ignore"):
            logterm = logA + (k * log_r if r > 0 else np.where(k == 0, 0.0, -np.inf))
        terms = np.exp(logterm) * np.asarray(g(np.maximum(k, 1.0)))
        part = float(np.sum(terms))
        total += part
        start += chunk
        # terms eventually decrease geometrically; stop when the chunk is negligible
        if terms[-1] <= terms[0] and part <= rel_tail * total:
            return total, start
    raise QuadratureError("cesaro power series did not converge", partial=total)


# -- mini-language ----------------------------------------------------------


def _split_top(s: str):
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def _unwrap(s: str) -> str:
    s = s.strip()
    while s.startswith("(") and s.endswith(")"):
        s = s[1:-1].strip()
    return s


def parse_weight(text: str) -> Weight:
    """Parse ``pow:A``, ``logpow:B``, ``mul:W1,W2``, ``div:W1,W2``,
    ``logof:B,W``, ``reg:W`` or ``table:PATH``.  Nested arguments may be
    parenthesised, e.g. ``mul:(div:pow:1,logpow:1),pow:2``.
    """
    text = _unwrap(text)
    head, _, rest = text.partition(":")
    if not rest:
        raise ValueError(f"malformed weight spec {text!r}")
    try:
        if head == "pow":
            return PowerWeight(float(rest))
        if head == "logpow":
            return LogPowerWeight(float(rest))
        if head == "mul":
            args = _split_top(rest)
            if len(args) < 2:
                raise ValueError("mul needs at least two weights")
            return ProductWeight(tuple((parse_weight(a), 1.0) for a in args))
        if head == "div":
            a, b = _split_top(rest)
            return parse_weight(a) / parse_weight(b)
        if head == "logof":
            beta, inner = rest.split(",", 1)
            return LogOfWeight(parse_weight(inner), float(beta))
        if head == "reg":
            return RegularizedWeight(parse_weight(rest))
        if head == "table":
            return TabulatedWeight.from_csv(Path(rest))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, NotAWeightError):
            raise
        raise ValueError(f"malformed weight spec {text!r}: {exc}") from exc
    raise ValueError(f"unknown weight family {head!r}")
