"""Quadrature on the sphere and composite integration of ``|F|^p``.

Zonal functions on ``S^N`` reduce to ``t = cos θ`` with the normalized
measure ``c_N (1 - t^2)^{N/2 - 1} dt``, which is a Gauss–Jacobi weight with
``α = β = N/2 - 1``.  Integrals of ``|F|^p`` are done in ``θ``: sign changes of
``F`` are located and every piece between breakpoints gets its own
Gauss–Legendre rule, so the kinks of ``|F|`` never sit inside a rule.
"""

from __future__ import annotations

import math
import os
from functools import lru_cache

import numpy as np
from scipy import optimize, special

__all__ = [
    "QUAD_ORDER_ENV",
    "default_order",
    "gauss_jacobi_sphere",
    "theta_measure",
    "abs_power_integral",
    "abs_sup",
]

QUAD_ORDER_ENV = "CESARO_GROWTH_QUAD_ORDER"
_GL_ORDER = 10


def default_order(degree: int) -> int:
    """Gauss–Jacobi order for a degree-``degree`` integrand.

    ``CESARO_GROWTH_QUAD_ORDER`` overrides the default ``max(4·degree, 256)``.
    """
    env = os.environ.get(QUAD_ORDER_ENV)
    if env:
        return int(env)
    return max(4 * int(degree), 256)


@lru_cache(maxsize=64)
def _gauss_jacobi_cached(N: int, order: int):
    a = N / 2.0 - 1.0
    if N == 1:
        k = np.arange(1, order + 1)
        t = np.cos((2 * k - 1) * np.pi / (2 * order))
        w = np.full(order, 1.0 / order)
    elif N == 2:
        t, w = special.roots_legendre(order)
    else:
        t, w = special.roots_jacobi(order, a, a)
    w = np.asarray(w) / np.sum(w)
    t = np.asarray(t)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def gauss_jacobi_sphere(N: int, order: int):
    """Nodes in ``t`` and weights summing to 1 for the zonal measure on ``S^N``.

    Exact for polynomials in ``t`` of degree ``2·order - 1``.
    """
    if N < 1 or order < 1:
        raise ValueError("need N >= 1 and order >= 1")
    return _gauss_jacobi_cached(int(N), int(order))


def theta_measure(N: int):
    """Density of the normalized zonal measure in ``θ ∈ [0, π]``."""
    norm = math.sqrt(math.pi) * math.gamma(N / 2.0) / math.gamma((N + 1) / 2.0)
    if N == 1:
        return lambda th: np.full_like(th, 1.0 / norm)
    return lambda th: np.sin(th) ** (N - 1) / norm


@lru_cache(maxsize=8)
def _gl(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


def _refine_roots(func, lo, hi, flo, fhi, iters: int = 40, xtol: float = 1e-13):
    """Vectorized Illinois iteration on sign-changing brackets."""
    lo, hi, flo, fhi = lo.copy(), hi.copy(), flo.copy(), fhi.copy()
    x = (lo + hi) / 2.0
    side = np.zeros(lo.size, dtype=int)
    for _ in range(iters):
        denom = fhi - flo
        x_new = np.where(denom != 0, hi - fhi * (hi - lo) / np.where(denom != 0, denom, 1.0), (lo + hi) / 2)
        x_new = np.clip(x_new, np.minimum(lo, hi), np.maximum(lo, hi))
        fx = func(x_new)
        same_hi = np.sign(fx) == np.sign(fhi)
        # replace the endpoint sharing the sign of fx; halve the stale one
        lo_stale = same_hi & (side == 1)
        hi_stale = ~same_hi & (side == -1)
        flo = np.where(lo_stale, flo / 2.0, flo)
        fhi = np.where(hi_stale, fhi / 2.0, fhi)
        hi = np.where(same_hi, x_new, hi)
        fhi = np.where(same_hi, fx, fhi)
        lo = np.where(~same_hi, x_new, lo)
        flo = np.where(~same_hi, fx, flo)
        side = np.where(same_hi, 1, -1)
        done = np.abs(x_new - x) <= xtol
        x = x_new
        if np.all(done | (fx == 0)):
            break
    return x


def _breakpoints(func, a, b, n_intervals):
    grid = np.linspace(a, b, n_intervals + 1)
    vals = func(grid)
    # values at rounding level are treated as zeros, not sign changes
    s = np.sign(np.where(np.abs(vals) > 1e-13 * np.max(np.abs(vals)), vals, 0.0))
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    if idx.size:
        roots = _refine_roots(func, grid[idx], grid[idx + 1], vals[idx], vals[idx + 1])
        grid = np.sort(np.concatenate([grid, roots]))
    return grid


def abs_power_integral(func, a, b, n_intervals: int, p: float, density=None, gl_order: int = _GL_ORDER):
    """``∫_a^b |F(θ)|^p ρ(θ) dθ`` with sign changes of ``F`` as breakpoints.

    ``func`` is vectorized over ``θ``.  ``n_intervals`` uniform cells are used
    to locate sign changes; each cell should see at most a few oscillations.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    bp = _breakpoints(func, a, b, n_intervals)
    xs, ws = _gl(gl_order)
    left, width = bp[:-1], np.diff(bp)
    keep = width > 0
    left, width = left[keep], width[keep]
    nodes = (left[:, None] + width[:, None] * xs[None, :]).ravel()
    weights = (width[:, None] * ws[None, :]).ravel()
    vals = np.abs(func(nodes))
    if density is not None:
        weights = weights * density(nodes)
    if p == 1:
        return float(np.dot(weights, vals))
    return float(np.dot(weights, vals**p))


def abs_sup(func, a, b, n_intervals: int, gl_order: int = _GL_ORDER):
    """``max |F|`` on ``[a, b]``: dense sampling plus a bounded local search.

    Returns ``(value, correction)`` where ``correction`` is the gain of the
    local search over the best sampled value.
    """
    grid = np.linspace(a, b, n_intervals * gl_order + 1)
    vals = np.abs(func(grid))
    i = int(np.argmax(vals))
    best = float(vals[i])
    h = (b - a) / (n_intervals * gl_order)
    lo, hi = max(a, grid[i] - h), min(b, grid[i] + h)
    if hi > lo:
        res = optimize.minimize_scalar(
            lambda th: -abs(float(func(np.array([th]))[0])),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-13 * max(1.0, abs(b - a))},
        )
        if -res.fun > best:
            return float(-res.fun), float(-res.fun - best)
    return best, 0.0
