"""Finite spherical-harmonic expansions of harmonic functions in the ball.

Coefficients are stored sparsely as ``{k: array}``.  In ``full`` mode
(``N`` in {1, 2}) the array for degree ``k`` has ``L_k`` entries in the
real orthonormal basis below; in ``zonal`` mode it holds one number ``a_k``
and the function is ``Σ a_k r^k Z_k(⟨x, e⟩)`` with ``e`` the pole.

Real bases, orthonormal for the normalized measure:

* circle: ``Y_0 = 1``, ``Y_{k,1} = √2 cos kθ``, ``Y_{k,2} = √2 sin kθ``;
* ``S^2``: ``Y_{k,1} = P̄_k^0``, then ``√2 P̄_k^m cos mφ``, ``√2 P̄_k^m sin mφ``
  for ``m = 1..k``, with ``P̄_k^m`` the Legendre functions normalized to
  ``(2k+1)(k-m)!/(k+m)!``.

The pole is ``θ = 0``: ``(1, 0)`` on the circle and ``(0, 0, 1)`` on ``S^2``;
for larger ``N`` it is the last coordinate axis.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import poch

from . import quadrature
from .kernels import ZonalPoly, cutoff_profile, default_d, dim_harmonics, zonal_sum
from .seqcalc import cesaro_numbers

__all__ = [
    "HarmonicExpansion",
    "SphereGrid",
    "pole",
    "sphere_grid",
    "evaluate",
    "evaluate_angles",
    "radial_lp_profile",
    "parseval_norm",
    "cesaro_mean",
    "convolve",
    "vp_sum",
    "vp_difference",
    "gap_series",
    "dyadic_gap_series",
    "write_expansion_csv",
    "read_expansion_csv",
]

SQRT2 = math.sqrt(2.0)
_DENSE_CESARO_LIMIT = 1 << 16


@dataclass(frozen=True)
class HarmonicExpansion:
    dim_N: int
    mode: str
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("full", "zonal"):
            raise ValueError("mode must be 'full' or 'zonal'")
        if self.mode == "full" and self.dim_N not in (1, 2):
            raise ValueError("full mode is available for N = 1 and N = 2 only")
        clean = {}
        for k, v in self.coeffs.items():
            k = int(k)
            arr = np.atleast_1d(np.asarray(v, dtype=float)).copy()
            size = 1 if self.mode == "zonal" else dim_harmonics(self.dim_N, k)
            if arr.size != size:
                raise ValueError(f"degree {k} needs {size} coefficients, got {arr.size}")
            if np.any(arr != 0):
                arr.setflags(write=False)
                clean[k] = arr
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, N: int, mode: str = "full"):
        return cls(N, mode, {})

    @classmethod
    def constant(cls, N: int, c: float, mode: str = "full"):
        return cls(N, mode, {0: [c]})

    @classmethod
    def zonal(cls, N: int, a):
        return cls(N, "zonal", {k: [v] for k, v in enumerate(np.asarray(a, dtype=float))})

    @classmethod
    def single(cls, N: int, k: int, l: int = 1, value: float = 1.0):
        """One basis function ``value · Y_{k,l}`` with ``1 <= l <= L_k``."""
        L = dim_harmonics(N, k)
        if not 1 <= l <= L:
            raise ValueError(f"l must lie in 1..{L}")
        arr = np.zeros(L)
        arr[l - 1] = value
        return cls(N, "full", {k: arr})

    @classmethod
    def random(cls, N: int, K: int, rng=None, mode: str = "full"):
        rng = np.random.default_rng(rng)
        size = (lambda k: 1) if mode == "zonal" else (lambda k: dim_harmonics(N, k))
        return cls(N, mode, {k: rng.standard_normal(size(k)) for k in range(K + 1)})

    # -- structure ---------------------------------------------------------

    @property
    def degree_K(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    @property
    def degrees(self) -> np.ndarray:
        return np.fromiter(self.coeffs, dtype=np.int64, count=len(self.coeffs))

    def coefficient(self, k: int, l: int = 1) -> float:
        arr = self.coeffs.get(k)
        return 0.0 if arr is None else float(arr[l - 1])

    def scale_degrees(self, factors) -> "HarmonicExpansion":
        """Multiply degree ``k`` by ``factors(k)`` (callable over an int array) or ``factors[k]``."""
        ks = self.degrees
        if callable(factors):
            fac = np.asarray(factors(ks), dtype=float) if ks.size else np.zeros(0)
        else:
            arr = np.asarray(factors, dtype=float)
            fac = np.where(ks < arr.size, arr[np.minimum(ks, arr.size - 1)], 0.0)
        fac = np.broadcast_to(fac, ks.shape)
        return HarmonicExpansion(
            self.dim_N, self.mode, {int(k): self.coeffs[int(k)] * s for k, s in zip(ks, fac)}
        )

    def truncate(self, K: int) -> "HarmonicExpansion":
        return HarmonicExpansion(self.dim_N, self.mode, {k: v for k, v in self.coeffs.items() if k <= K})

    def to_full(self) -> "HarmonicExpansion":
        """Rewrite a zonal expansion in the full basis (``N`` in {1, 2})."""
        if self.mode == "full":
            return self
        out = {}
        for k, v in self.coeffs.items():
            arr = np.zeros(dim_harmonics(self.dim_N, k))
            # Z_k(⟨x, e⟩) = Σ_l Y_kl(e) Y_kl(x) and only the first basis element is nonzero at e
            arr[0] = v[0] * (1.0 if k == 0 else (SQRT2 if self.dim_N == 1 else math.sqrt(2 * k + 1)))
            out[k] = arr
        return HarmonicExpansion(self.dim_N, "full", out)

    def coefficient_vector(self) -> np.ndarray:
        """Concatenated coefficients in degree order (zeros for absent degrees skipped)."""
        if not self.coeffs:
            return np.zeros(0)
        return np.concatenate(list(self.coeffs.values()))

    def _combine(self, other, sign):
        if (other.dim_N, other.mode) != (self.dim_N, self.mode):
            raise ValueError("expansions differ in dimension or mode")
        out = {k: v.copy() for k, v in self.coeffs.items()}
        for k, v in other.coeffs.items():
            out[k] = out[k] + sign * v if k in out else sign * v
        return HarmonicExpansion(self.dim_N, self.mode, out)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, s: float):
        return HarmonicExpansion(self.dim_N, self.mode, {k: s * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def allclose(self, other, rtol=1e-14, atol=1e-14) -> bool:
        if (other.dim_N, other.mode) != (self.dim_N, self.mode):
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        for k in keys:
            a = self.coeffs.get(k)
            b = other.coeffs.get(k)
            a = np.zeros_like(b) if a is None else a
            b = np.zeros_like(a) if b is None else b
            if not np.allclose(a, b, rtol=rtol, atol=atol):
                return False
        return True


def pole(N: int) -> np.ndarray:
    e = np.zeros(N + 1)
    e[0 if N == 1 else N] = 1.0
    return e


# -- evaluation --------------------------------------------------------------


def _legendre_normalized(kmax: int, m: int, ct, st):
    """Yield ``(k, P̄_k^m)`` for ``k = m..kmax``."""
    pmm = np.ones_like(ct)
    for i in range(1, m + 1):
        pmm = pmm * math.sqrt((2 * i + 1) / (2 * i)) * st
    if m == 0:
        pmm = np.ones_like(ct)
    yield m, pmm
    if kmax == m:
        return
    p_prev, p_cur = pmm, math.sqrt(2 * m + 3) * ct * pmm
    yield m + 1, p_cur
    for k in range(m + 2, kmax + 1):
        a = math.sqrt((2 * k + 1) * (2 * k - 1) / ((k - m) * (k + m)))
        b = math.sqrt((2 * k + 1) * (k + m - 1) * (k - m - 1) / ((k - m) * (k + m) * (2 * k - 3)))
        p_prev, p_cur = p_cur, a * ct * p_cur - b * p_prev
        yield k, p_cur


def _eval_s2(u: HarmonicExpansion, r: float, theta, phi):
    ct, st = np.cos(theta), np.sin(theta)
    out = np.zeros(np.broadcast(theta, phi).shape)
    if not u.coeffs:
        return out
    K = u.degree_K
    for m in range(K + 1):
        if not any(k >= m for k in u.coeffs):
            continue
        cm = np.cos(m * phi) if m else None
        sm = np.sin(m * phi) if m else None
        for k, P in _legendre_normalized(K, m, ct, st):
            arr = u.coeffs.get(k)
            if arr is None:
                continue
            rk = r**k
            if m == 0:
                out = out + rk * arr[0] * P
            else:
                out = out + rk * SQRT2 * P * (arr[2 * m - 1] * cm + arr[2 * m] * sm)
    return out


def _eval_circle(u: HarmonicExpansion, r: float, theta):
    theta = np.asarray(theta, dtype=float)
    out = np.zeros_like(theta)
    for k, arr in u.coeffs.items():
        rk = r**k
        if k == 0:
            out = out + arr[0]
        else:
            out = out + rk * SQRT2 * (arr[0] * np.cos(k * theta) + arr[1] * np.sin(k * theta))
    return out


def _eval_zonal(u: HarmonicExpansion, r: float, t):
    if not u.coeffs:
        return np.zeros_like(np.asarray(t, dtype=float))
    K = u.degree_K
    c = np.zeros(K + 1)
    for k, arr in u.coeffs.items():
        c[k] = arr[0] * r**k
    return zonal_sum(u.dim_N, c, t)


def _check_radius(r):
    if not 0 <= r <= 1:
        raise ValueError("radius must lie in [0, 1]")


def evaluate_angles(u: HarmonicExpansion, r: float, theta, phi=None):
    """``u(r x)`` with ``x`` given by angles (``θ`` from the pole, ``φ`` azimuth on ``S^2``)."""
    _check_radius(r)
    theta = np.asarray(theta, dtype=float)
    if u.mode == "zonal":
        return _eval_zonal(u, r, np.cos(theta))
    if u.dim_N == 1:
        return _eval_circle(u, r, theta)
    return _eval_s2(u, r, theta, np.zeros_like(theta) if phi is None else np.asarray(phi, dtype=float))


def evaluate(u: HarmonicExpansion, r: float, x):
    """``u(r x)`` for unit vectors ``x`` of shape ``(..., N+1)``.

    Finite expansions are polynomials, so ``r = 1`` is allowed.
    """
    _check_radius(r)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != u.dim_N + 1:
        raise ValueError(f"points must have {u.dim_N + 1} coordinates")
    if u.mode == "zonal":
        return _eval_zonal(u, r, x @ pole(u.dim_N))
    if u.dim_N == 1:
        return _eval_circle(u, r, np.arctan2(x[..., 1], x[..., 0]))
    theta = np.arccos(np.clip(x[..., 2], -1.0, 1.0))
    phi = np.arctan2(x[..., 1], x[..., 0])
    return _eval_s2(u, r, theta, phi)


# -- grids and norms ---------------------------------------------------------


@dataclass(frozen=True)
class SphereGrid:
    """Quadrature grid with weights summing to 1.

    ``degree`` is the largest ``K`` such that products of harmonics of
    degree ``<= K`` integrate exactly.
    """

    dim_N: int
    mode: str
    theta: np.ndarray
    phi: np.ndarray | None
    weights: np.ndarray
    degree: int

    def values(self, u: HarmonicExpansion, r: float):
        if self.mode == "zonal" or u.mode == "zonal":
            if u.mode != "zonal" or self.mode != "zonal":
                raise ValueError("zonal grid needs a zonal expansion")
            return _eval_zonal(u, r, np.cos(self.theta))
        if self.dim_N == 1:
            return _eval_circle(u, r, self.theta)
        return _eval_s2(u, r, self.theta, self.phi)


def sphere_grid(N: int, degree: int, mode: str = "full", oversample: int = 1) -> SphereGrid:
    """Product-exact grid for expansions of degree ``<= degree``."""
    if mode == "zonal":
        order = (degree + 1) * oversample
        t, w = quadrature.gauss_jacobi_sphere(N, order)
        return SphereGrid(N, "zonal", np.arccos(t), None, np.asarray(w), (2 * order - 1) // 2)
    if N == 1:
        M = max(8 * degree, 256) * oversample
        th = 2 * np.pi * np.arange(M) / M
        return SphereGrid(1, "full", th, None, np.full(M, 1.0 / M), (M - 1) // 2)
    if N == 2:
        nt = (degree + 1) * oversample
        nphi = (2 * degree + 2) * oversample
        ct, wt = np.polynomial.legendre.leggauss(nt)
        ph = 2 * np.pi * np.arange(nphi) / nphi
        TH, PH = np.meshgrid(np.arccos(ct), ph, indexing="ij")
        W = np.outer(wt / 2.0, np.full(nphi, 1.0 / nphi))
        return SphereGrid(2, "full", TH.ravel(), PH.ravel(), W.ravel(), min(nt - 1, (nphi - 1) // 2))
    raise ValueError("full grids exist for N = 1, 2 only")


def parseval_norm(u: HarmonicExpansion, r: float) -> float:
    """``(Σ_k r^{2k} Σ_l a_kl^2)^{1/2}``; zonal coefficients carry ``∥Z_k∥_2^2 = L_k``."""
    tot = 0.0
    for k, arr in u.coeffs.items():
        s = float(np.dot(arr, arr))
        if u.mode == "zonal":
            s *= dim_harmonics(u.dim_N, k)
        tot += r ** (2 * k) * s
    return math.sqrt(tot)


def _sup_if_bound_attained(u: HarmonicExpansion, r: float):
    """Triangle-inequality bound on ``max |u(r·)|`` if it is attained at ``±e``.

    ``|Y_kl| <= √2`` on the circle and ``|Z_k| <= L_k`` in zonal mode, so when
    the bound is met at the pole or its antipode it is the maximum.
    """
    if u.mode == "full" and u.dim_N != 1:
        return None
    bound = 0.0
    for k, arr in u.coeffs.items():
        if u.mode == "zonal":
            c = abs(arr[0]) * dim_harmonics(u.dim_N, k)
        else:
            c = abs(arr[0]) if k == 0 else SQRT2 * math.hypot(arr[0], arr[1])
        bound += c * r**k
    ends = np.abs(evaluate_angles(u, r, np.array([0.0, np.pi])))
    best = float(np.max(ends))
    return best if best >= bound * (1 - 1e-14) else None


def radial_lp_profile(u: HarmonicExpansion, r: float, p: float = np.inf, grid: SphereGrid | None = None) -> float:
    """``(∫_S |u(r x)|^p ds(x))^{1/p}``, or ``max |u(r·)|`` for ``p = inf``.

    Without ``grid``, circle and zonal cases integrate with sign changes as
    breakpoints and the maximum gets a local refinement; ``S^2`` uses an
    oversampled product grid.
    """
    _check_radius(r)
    if p < 1:
        raise ValueError("p must be at least 1")
    if not u.coeffs:
        return 0.0
    K = u.degree_K
    if grid is not None:
        if grid.degree < K:
            raise ValueError(f"grid exact to degree {grid.degree} is too coarse for degree {K}")
        vals = np.abs(grid.values(u, r))
        if np.isinf(p):
            return float(np.max(vals))
        return float(np.dot(grid.weights, vals**p) ** (1.0 / p))
    if K == 0:
        return abs(float(next(iter(u.coeffs.values()))[0]))
    if np.isinf(p):
        hit = _sup_if_bound_attained(u, r)
        if hit is not None:
            return hit
    cells = 2 * K + 16
    if u.mode == "zonal":
        f = lambda th: _eval_zonal(u, r, np.cos(th))  # noqa: E731
        if np.isinf(p):
            return quadrature.abs_sup(f, 0.0, np.pi, cells)[0]
        dens = quadrature.theta_measure(u.dim_N)
        return quadrature.abs_power_integral(f, 0.0, np.pi, cells, p, dens) ** (1.0 / p)
    if u.dim_N == 1:
        f = lambda th: _eval_circle(u, r, th)  # noqa: E731
        if np.isinf(p):
            return quadrature.abs_sup(f, 0.0, 2 * np.pi, 2 * cells)[0]
        dens = lambda th: np.full_like(th, 1.0 / (2 * np.pi))  # noqa: E731
        return quadrature.abs_power_integral(f, 0.0, 2 * np.pi, 2 * cells, p, dens) ** (1.0 / p)
    g = sphere_grid(2, K, oversample=1 if p == 2 else 4)
    vals = np.abs(g.values(u, r))
    if np.isinf(p):
        return float(np.max(vals))
    return float(np.dot(g.weights, vals**p) ** (1.0 / p))


# -- coefficient operators -----------------------------------------------------


def cesaro_mean(u: HarmonicExpansion, n: int, m: float) -> HarmonicExpansion:
    """``σ_n^m u``: degree ``j <= n`` scaled by ``A_{n-j}^m / A_n^m``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n <= _DENSE_CESARO_LIMIT:
        A = cesaro_numbers(n, m)
        return u.truncate(n).scale_degrees(A[::-1] / A[n])

    # sparse high-degree input: A_{n-j}^m / A_n^m = (n-j+1)_m / (n+1)_m
    def ratio(j):
        j = np.asarray(j, dtype=float)
        return poch(n - j + 1.0, m) / poch(n + 1.0, m)

    return u.truncate(n).scale_degrees(ratio)


def convolve(u: HarmonicExpansion, P: ZonalPoly) -> HarmonicExpansion:
    """``u * P``: coefficient ``(j, l)`` times ``c_j``."""
    if P.dim_N != u.dim_N:
        raise ValueError("dimension mismatch between expansion and kernel")
    return u.scale_degrees(P.coeffs)


def vp_sum(u: HarmonicExpansion, n: int, d: int | None = None) -> HarmonicExpansion:
    """``R_n u``: degrees scaled by ``q_0(j/n)``; identity for ``j <= n``, zero past ``2n``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    q = cutoff_profile(0, default_d(u.dim_N) if d is None else d)
    return u.scale_degrees(lambda k: q(k / n))


def vp_difference(u: HarmonicExpansion, m: int, n: int, d: int | None = None) -> HarmonicExpansion:
    """``(R_m - R_n) u``."""
    q = cutoff_profile(0, default_d(u.dim_N) if d is None else d)
    return u.scale_degrees(lambda k: q(k / m) - q(k / n))


def gap_series(degrees, amplitudes, lam: float | None = None) -> HarmonicExpansion:
    """``u(z) = Re Σ a_k z^{n_k}`` on the disk as a circle expansion.

    Requires ``n_{k+1} >= λ n_k``; without ``lam`` any ratio above 1 is accepted.
    ``Re(a z^n) = a r^n cos nθ = (a/√2) r^n Y_{n,1}``.
    """
    degrees = [int(n) for n in degrees]
    amplitudes = [float(a) for a in amplitudes]
    if len(degrees) != len(amplitudes):
        raise ValueError("degrees and amplitudes differ in length")
    for a, b in zip(degrees, degrees[1:]):
        if (lam is not None and b < lam * a) or b <= a:
            raise ValueError(f"gap condition violated between degrees {a} and {b}")
    coeffs = {}
    for n, a in zip(degrees, amplitudes):
        coeffs[n] = [a] if n == 0 else [a / SQRT2, 0.0]
    return HarmonicExpansion(1, "full", coeffs)


def dyadic_gap_series(J: int, amplitude=None) -> HarmonicExpansion:
    """``Σ_{j<=J} c_j z^{2^j}`` with ``c_j = 2^j`` unless ``amplitude(2^j)`` is given."""
    deg = [2**j for j in range(J + 1)]
    amp = deg if amplitude is None else [amplitude(n) for n in deg]
    return gap_series(deg, amp, 2.0)


# -- file format -----------------------------------------------------------------


def write_expansion_csv(u: HarmonicExpansion, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# N={u.dim_N} mode={u.mode} degree_K={u.degree_K}\n")
        w = csv.writer(fh)
        w.writerow(["k", "l", "a_kl"])
        for k, arr in u.coeffs.items():
            for l, a in enumerate(arr, start=1):
                if a != 0:
                    w.writerow([k, l, repr(float(a))])


def read_expansion_csv(path) -> HarmonicExpansion:
    with open(path, newline="") as fh:
        first = fh.readline()
        if not first.startswith("#"):
            raise ValueError("expansion file must start with '# N=.. mode=.. degree_K=..'")
        meta = dict(item.split("=", 1) for item in first[1:].split())
        N, mode, K = int(meta["N"]), meta["mode"], int(meta["degree_K"])
        coeffs = {}
        for row in csv.reader(fh):
            if not row or row[0] == "k":
                continue
            k, l, a = int(row[0]), int(row[1]), float(row[2])
            if k > K:
                raise ValueError(f"degree {k} exceeds declared degree_K={K}")
            size = 1 if mode == "zonal" else dim_harmonics(N, k)
            arr = coeffs.setdefault(k, np.zeros(size))
            arr[l - 1] = a
    return HarmonicExpansion(N, mode, coeffs)
