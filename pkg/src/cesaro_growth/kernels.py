"""Zonal harmonics and polynomial kernels on ``S^N``.

``Z_k(x, y) = Σ_l Y_kl(x) Y_kl(y)`` for an orthonormal basis with respect to
the normalized surface measure, so ``Z_k(t) = L_k G_k(t) / G_k(1)`` with
``G_k`` the Gegenbauer polynomial of parameter ``(N-1)/2`` and
``L_k = dim H_k``.  On the circle this is ``2 cos kθ``.

A kernel ``Σ c_k Z_k`` is stored as a :class:`ZonalPoly`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import BPoly

from . import quadrature
from .seqcalc import cesaro_numbers
from .weights import Weight, regularity_ratio

__all__ = [
    "ZonalPoly",
    "CutoffProfile",
    "dim_harmonics",
    "dim_harmonics_array",
    "default_d",
    "zonal_value",
    "zonal_sum",
    "sphere_average",
    "l1_norm",
    "lp_norm",
    "min_on_nodes",
    "cesaro_kernel",
    "cutoff_profile",
    "cutoff_a",
    "vp_kernel",
    "band_weight_kernel",
    "band_inverse_kernel",
    "poisson_series",
    "poisson_degree",
]


def dim_harmonics(N: int, k: int) -> int:
    """``L_k``: dimension of degree-``k`` spherical harmonics on ``S^N``."""
    if N < 1 or k < 0:
        raise ValueError("need N >= 1 and k >= 0")
    # harmonic = homogeneous of degree k minus r^2·(homogeneous of degree k-2)
    return math.comb(k + N, N) - (math.comb(k - 2 + N, N) if k >= 2 else 0)


def dim_harmonics_array(N: int, K: int) -> np.ndarray:
    k = np.arange(K + 1, dtype=float)
    if N == 1:
        out = np.full(K + 1, 2.0)
        out[0] = 1.0
        return out
    # (2k+N-1)(k+N-2)!/(k!(N-1)!) = (2k+N-1)/(N-1) · C(k+N-2, k)
    logc = (
        np.vectorize(math.lgamma)(k + N - 1)
        - np.vectorize(math.lgamma)(k + 1)
        - math.lgamma(N - 1)
    )
    return np.rint((2 * k + N - 1) / (N - 1) * np.exp(logc))


def default_d(N: int) -> int:
    """Smallest integer strictly greater than ``(N-1)/2``."""
    return (N - 1) // 2 + 1


def _normalized_gegenbauer_sum(N: int, weights: np.ndarray, t: np.ndarray) -> np.ndarray:
    """``Σ_k w_k G_k(t)/G_k(1)`` by forward recurrence, ``λ = (N-1)/2``."""
    lam = (N - 1) / 2.0
    t = np.asarray(t, dtype=float)
    K = weights.size - 1
    acc = np.full_like(t, weights[0]) if K >= 0 else np.zeros_like(t)
    if K < 1:
        return acc
    p_prev = np.ones_like(t)
    p_cur = t.copy()
    acc = acc + weights[1] * p_cur
    for k in range(2, K + 1):
        p_next = (2 * (k + lam - 1) * t * p_cur - (k - 1) * p_prev) / (k + 2 * lam - 1)
        p_prev, p_cur = p_cur, p_next
        if weights[k] != 0.0:
            acc = acc + weights[k] * p_cur
    return acc


def zonal_value(N: int, k: int, t):
    """``Z_k(t)`` on ``S^N``; ``Z_k(1) = L_k``."""
    w = np.zeros(k + 1)
    w[k] = dim_harmonics(N, k)
    out = _normalized_gegenbauer_sum(N, w, np.asarray(t, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def zonal_sum(N: int, coeffs, t):
    """``Σ_k c_k Z_k(t)``."""
    c = np.asarray(coeffs, dtype=float)
    return _normalized_gegenbauer_sum(N, c * dim_harmonics_array(N, c.size - 1), np.asarray(t, dtype=float))


@dataclass(frozen=True)
class ZonalPoly:
    """Kernel ``Σ_{k<=K} c_k Z_k(x, y)`` on ``S^N``."""

    dim_N: int
    coeffs: np.ndarray
    label: str = field(default="", compare=False)

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        if self.dim_N < 1:
            raise ValueError("dim_N must be >= 1")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        nz = np.nonzero(self.coeffs)[0]
        return int(nz[-1]) if nz.size else 0

    def __call__(self, t):
        return zonal_sum(self.dim_N, self.coeffs, t)

    def at_theta(self, theta):
        return self(np.cos(theta))

    def value_at_pole(self) -> float:
        return float(np.dot(self.coeffs, dim_harmonics_array(self.dim_N, self.coeffs.size - 1)))

    def scaled(self, s: float) -> "ZonalPoly":
        return ZonalPoly(self.dim_N, s * self.coeffs, self.label)

    def multiply_coeffs(self, factors) -> "ZonalPoly":
        f = np.asarray(factors, dtype=float)
        n = min(f.size, self.coeffs.size)
        return ZonalPoly(self.dim_N, self.coeffs[:n] * f[:n], self.label)

    def __add__(self, other: "ZonalPoly") -> "ZonalPoly":
        if other.dim_N != self.dim_N:
            raise ValueError("dimension mismatch")
        n = max(self.coeffs.size, other.coeffs.size)
        c = np.zeros(n)
        c[: self.coeffs.size] += self.coeffs
        c[: other.coeffs.size] += other.coeffs
        return ZonalPoly(self.dim_N, c)

    def __sub__(self, other: "ZonalPoly") -> "ZonalPoly":
        return self + other.scaled(-1.0)


def sphere_average(P: ZonalPoly, order: int | None = None) -> float:
    """``∫_S P(⟨x, y⟩) ds(x)`` by Gauss–Jacobi quadrature."""
    K = P.degree
    if order is None:
        order = max(K // 2 + 2, 16)
    elif 2 * order - 1 < K:
        raise ValueError(f"quadrature order {order} below degree {K}")
    t, w = quadrature.gauss_jacobi_sphere(P.dim_N, order)
    return float(np.dot(w, P(t)))


def _n_cells(K: int) -> int:
    return 2 * K + 16


def lp_norm(P: ZonalPoly, p: float = 1.0, refine_check: bool = False):
    """``(∫_S |P(⟨x, y⟩)|^p ds(x))^{1/p}``; ``p = inf`` gives ``max |P|``.

    With ``refine_check`` the integral is recomputed on twice as many cells
    and ``(value, change)`` is returned.
    """
    K = P.degree
    N = P.dim_N

    def f(th):
        return P(np.cos(th))

    if np.isinf(p):
        val, corr = quadrature.abs_sup(f, 0.0, np.pi, _n_cells(K))
        return (val, corr) if refine_check else val
    dens = quadrature.theta_measure(N)
    val = quadrature.abs_power_integral(f, 0.0, np.pi, _n_cells(K), p, dens) ** (1.0 / p)
    if refine_check:
        val2 = quadrature.abs_power_integral(f, 0.0, np.pi, 2 * _n_cells(K), p, dens, gl_order=16) ** (1.0 / p)
        return val, abs(val2 - val)
    return val


def l1_norm(P: ZonalPoly, refine_check: bool = False):
    """``∥P(·, y)∥_1`` with respect to the normalized measure."""
    return lp_norm(P, 1.0, refine_check)


def min_on_nodes(P: ZonalPoly, order: int | None = None) -> float:
    """Minimum of the kernel over Gauss–Jacobi nodes and the endpoints ``t = ±1``."""
    order = order or quadrature.default_order(P.degree)
    t, _ = quadrature.gauss_jacobi_sphere(P.dim_N, order)
    vals = P(np.concatenate([t, [-1.0, 1.0]]))
    return float(np.min(vals))


def cesaro_kernel(N: int, k: int, m: float) -> ZonalPoly:
    """``W_k^m = (1/A_k^m) Σ_{j<=k} A_{k-j}^m Z_j``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    A = cesaro_numbers(k, m)
    return ZonalPoly(N, A[::-1] / A[k], label=f"W_{k}^{m:g}")


def cutoff_a(m: int) -> float:
    """``a_m = (1 - 1/m)^{-m}`` for ``m >= 2`` and ``a_0 = 1``."""
    if m == 0:
        return 1.0
    if m == 1 or m < 0:
        raise ValueError("cutoff order m must be 0 or at least 2")
    return (1.0 - 1.0 / m) ** (-m)


@dataclass(frozen=True)
class CutoffProfile:
    """``q_m``: ``a_m^t`` on ``[0, 1]``, a Hermite bridge on ``[1, 2]``, 0 after.

    The bridge has degree ``2d + 3`` and matches derivatives up to order
    ``d + 1`` at both ends, so ``q_m`` is ``C^{d+1}``.
    """

    order_m: int
    smooth_d: int
    a_m: float
    bridge: BPoly = field(repr=False, compare=False)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        left = t <= 1.0
        mid = (t > 1.0) & (t < 2.0)
        out[left] = self.a_m ** t[left]
        out[mid] = self.bridge(t[mid])
        return float(out) if out.ndim == 0 else out

    def derivative(self, t, j: int):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        left = t <= 1.0
        mid = (t > 1.0) & (t < 2.0)
        out[left] = math.log(self.a_m) ** j * self.a_m ** t[left]
        out[mid] = self.bridge.derivative(j)(t[mid]) if j > 0 else self.bridge(t[mid])
        return out

    @cached_property
    def deriv_bound(self) -> float:
        t = np.linspace(0.0, 2.0, 4001)
        return max(float(np.max(np.abs(self.derivative(t, j)))) for j in range(self.smooth_d + 2))


def cutoff_profile(m: int, d: int) -> CutoffProfile:
    if d < 1:
        raise ValueError("smoothness d must be at least 1")
    a = cutoff_a(m)
    la = math.log(a)
    left = [a * la**j for j in range(d + 2)]
    right = [0.0] * (d + 2)
    bridge = BPoly.from_derivatives([1.0, 2.0], [left, right])
    return CutoffProfile(m, d, a, bridge)


def vp_kernel(N: int, m: int, n: int, d: int | None = None) -> ZonalPoly:
    """``Q_{m,n} = Σ_{k<=2n} q_m(k/n) Z_k``; ``R_n = Q_{0,n}``, ``Q_n = Q_{n,n}``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    d = default_d(N) if d is None else d
    q = cutoff_profile(m, d)
    k = np.arange(2 * n + 1)
    return ZonalPoly(N, q(k / n), label=f"Q_{m},{n}")


def _check_regular(f: Weight, d: int, upper: float):
    grid = np.geomspace(1.0, max(upper, 2.0), 8)
    try:
        ratio = regularity_ratio(f, d, grid)
    except (ValueError, NotImplementedError) as exc:
        raise ValueError(f"irregular weight {f.name}: {exc}") from exc
    if not np.isfinite(ratio):
        raise ValueError(f"irregular weight {f.name}")
    return ratio


def band_weight_kernel(N: int, n: int, f: Weight, d: int | None = None, check: bool = True) -> ZonalPoly:
    """``T_{n,f}`` with coefficients ``f(j) a(j/n)``: equal to ``f(j)`` for ``j <= n``."""
    d = default_d(N) if d is None else d
    if check:
        _check_regular(f, d, 2 * n)
    a = cutoff_profile(0, d)
    j = np.arange(2 * n + 1)
    fj = np.asarray(f(np.maximum(j, 1)), dtype=float)
    return ZonalPoly(N, fj * a(j / n), label=f"T_{n},{f.name}")


def band_inverse_kernel(N: int, n: int, m: int, f: Weight, d: int | None = None, check: bool = True) -> ZonalPoly:
    """``S_{n,m,f}`` with ``b_j = (b(j/m) - b(2j/n)) / f(j)``: ``1/f(j)`` for ``n <= j <= m``."""
    if n > m:
        raise ValueError("need n <= m")
    d = default_d(N) if d is None else d
    if check:
        _check_regular(f, d, 2 * m)
    b = cutoff_profile(0, d)
    j = np.arange(2 * m + 1)
    fj = np.asarray(f(np.maximum(j, 1)), dtype=float)
    return ZonalPoly(N, (b(j / m) - b(2 * j / n)) / fj, label=f"S_{n},{m},{f.name}")


def poisson_degree(N: int, t: float, tol: float = 1e-14) -> int:
    """Smallest ``K`` with ``t^K L_K < tol``."""
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    K = 1
    while t**K * dim_harmonics(N, K) >= tol:
        K += 1
    return K


def poisson_series(N: int, t: float, K: int | None = None, tol: float = 1e-14) -> ZonalPoly:
    """``S_t = Σ_{k<=K} t^k Z_k``, the Poisson kernel truncated at ``K``."""
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    if K is None:
        K = poisson_degree(N, t, tol)
    elif t**K * dim_harmonics(N, K) >= tol:
        raise ValueError(f"K={K} leaves a tail above {tol:g}; use K >= {poisson_degree(N, t, tol)}")
    return ZonalPoly(N, t ** np.arange(K + 1), label=f"S_{t:g}")
