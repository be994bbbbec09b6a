"""Difference calculus on real sequences.

Sequences are finitely supported and zero-extended: indexing past the stored
values returns exactly 0.  The sign convention for the forward difference is
``(Δb)_k = b_k - b_{k+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

__all__ = [
    "RealSequence",
    "as_array",
    "forward_difference",
    "cesaro_number",
    "cesaro_numbers",
    "cesaro_means",
    "summation_by_parts_check",
    "weighted_difference_sum",
]


@dataclass(frozen=True)
class RealSequence:
    """Finitely supported real sequence indexed from 0."""

    values: np.ndarray

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.values, dtype=float))
        if v.ndim != 1:
            raise ValueError("sequence values must be one-dimensional")
        if v.size == 0:
            v = np.zeros(1)
        object.__setattr__(self, "values", v)

    @property
    def support_bound(self) -> int:
        return self.values.size - 1

    def __getitem__(self, k: int) -> float:
        if k < 0:
            raise IndexError("sequences are indexed from 0")
        if k > self.support_bound:
            return 0.0
        return float(self.values[k])

    def __len__(self) -> int:
        return self.values.size

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(max(length, self.values.size))
        out[: self.values.size] = self.values
        return out


def as_array(b) -> np.ndarray:
    if isinstance(b, RealSequence):
        return b.values
    return np.atleast_1d(np.asarray(b, dtype=float))


def forward_difference(b, l: int = 1) -> RealSequence:
    """Return ``Δ^l b`` with ``Δ^l b_k = Σ_j (-1)^j C(l, j) b_{k+j}``.

    The result has the same support bound as ``b``; beyond it every value is
    a combination of zeros.
    """
    if l < 0:
        raise ValueError("difference order must be nonnegative")
    v = as_array(b)
    n = v.size
    if l == 0:
        return RealSequence(v.copy())
    ext = np.concatenate([v, np.zeros(l)])
    out = np.zeros(n)
    for j in range(l + 1):
        out += (-1) ** j * comb(l, j) * ext[j : j + n]
    return RealSequence(out)


def cesaro_number(k: int, m: float, allow_zero: bool = False) -> float:
    """``A_k^m = C(k+m, k)`` through the product ``Π_{i=1}^k (m+i)/i``.

    For negative integer ``m`` the product vanishes once ``k > -m``; such a
    value is only returned when ``allow_zero`` is set.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    value = 1.0
    for i in range(1, k + 1):
        value *= (m + i) / i
    if value == 0.0 and k > 0 and not allow_zero:
        raise ValueError(f"A_{k}^{m} vanishes; pass allow_zero=True to accept it")
    return value


def cesaro_numbers(kmax: int, m: float) -> np.ndarray:
    """Vector ``(A_0^m, ..., A_kmax^m)`` by the multiplicative recurrence."""
    if kmax < 0:
        return np.zeros(0)
    k = np.arange(1, kmax + 1, dtype=float)
    return np.concatenate([[1.0], np.cumprod((k + m) / k)])


def cesaro_means(b, n: int, m: float) -> float:
    """``s_n^m(b) = (1/A_n^m) Σ_{k=0}^n A_{n-k}^m b_k``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    v = np.zeros(n + 1)
    src = as_array(b)[: n + 1]
    v[: src.size] = src
    A = cesaro_numbers(n, m)
    return float(np.dot(A[::-1], v) / A[n])


def _to_scaled_ints(values: np.ndarray) -> tuple[list[int], int]:
    """Exact integers ``n_i`` and a shift ``e`` with ``values_i = n_i / 2^e``."""
    fracs = [Fraction(float(v)) for v in values]
    e = max((f.denominator.bit_length() - 1 for f in fracs), default=0)
    return [f.numerator << (e - (f.denominator.bit_length() - 1)) for f in fracs], e


def summation_by_parts_check(a, b, m: int) -> tuple[float, float]:
    """Evaluate both sides of ``Σ a_k b_k = Σ (Δ^{m+1} a_k) A_k^m s_k^m(b)``.

    ``a`` must be finitely supported, which makes every boundary term vanish.
    Both sums run over the joint support plus ``m + 1`` guard terms.  Floats
    are dyadic rationals and ``A_k^m`` is an integer, so both sides are
    computed in exact integer arithmetic and rounded once at the end.
    """
    if m < 0 or int(m) != m:
        raise ValueError("m must be a nonnegative integer")
    m = int(m)
    av, bv = as_array(a), as_array(b)
    if not (np.all(np.isfinite(av)) and np.all(np.isfinite(bv))):
        raise ValueError("sequences must be finite")
    length = max(av.size, bv.size) + m + 1
    ai, ea = _to_scaled_ints(av)
    bi, eb = _to_scaled_ints(bv)
    ai += [0] * (length - len(ai))
    bi += [0] * (length - len(bi))
    scale = 1 << (ea + eb)

    lhs = sum(x * y for x, y in zip(ai, bi))

    diff = ai
    for _ in range(m + 1):
        diff = [diff[k] - (diff[k + 1] if k + 1 < length else 0) for k in range(length)]
    A = [comb(k + m, m) for k in range(length)]
    # A_k^m s_k^m(b) = Σ_{j<=k} A_{k-j}^m b_j
    rhs = 0
    for k in range(length):
        if diff[k]:
            rhs += diff[k] * sum(A[k - j] * bi[j] for j in range(k + 1) if bi[j])
    return float(Fraction(lhs, scale)), float(Fraction(rhs, scale))


def weighted_difference_sum(f, n: int, d: int, absolute: bool = True) -> float:
    """``Σ_{j=0}^n |Δ^{d+1}(A_{n-j}^d f(j))| A_j^d / A_n^d``.

    The inner sequence ``h_j = A_{n-j}^d f(j)`` is zero for ``j > n``.  ``f``
    is evaluated at integers only, with ``f(0) = f(1)``.  Without absolute
    values the sum telescopes to ``f(0)``; the bound it feeds needs them.
    """
    if n < 0 or d < 0:
        raise ValueError("n and d must be nonnegative")
    j = np.arange(n + 1, dtype=float)
    fj = np.asarray(f(np.maximum(j, 1.0)), dtype=float)
    A = cesaro_numbers(n, d)
    h = A[::-1] * fj
    diff = forward_difference(h, d + 1).values
    if absolute:
        diff = np.abs(diff)
    return float(np.dot(diff, A) / A[n])
