"""Growth-space membership reports.

Each report is a table of ``(parameter, ratio)`` pairs plus a verdict from
a trend test.  Finite grids can never prove boundedness, so the verdict is
a heuristic and the raw ratios always travel with it.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .expansions import HarmonicExpansion, cesaro_mean, radial_lp_profile, vp_difference, vp_sum
from .weights import BlockSequence, Weight, cesaro_power_series

__all__ = [
    "BOUNDED",
    "UNBOUNDED",
    "GrowthReport",
    "EquivalenceReport",
    "MixedNorm",
    "trend_verdict",
    "trend_slope",
    "make_report",
    "radial_norms",
    "cesaro_norms",
    "vp_norms",
    "growth_ratio_radial",
    "growth_ratio_cesaro",
    "growth_ratio_vp",
    "equivalence_report",
    "equivalence_suite",
    "estimate_with_A_check",
    "gap_partial_sums",
    "gap_membership",
    "regular_growth_ratio",
    "mixed_norm",
    "exponential_coefficients",
    "solid_hull_norm",
    "solid_core_norm",
    "dyadic_radii",
    "dyadic_degrees",
]

BOUNDED = "BOUNDED"
UNBOUNDED = "UNBOUNDED"

TAIL_FRACTION = 0.25
SLOPE_TOL = 0.05


def dyadic_radii(j_max: int, j_min: int = 0) -> np.ndarray:
    """``r_j = 1 - 2^{-j}``."""
    return 1.0 - 2.0 ** -np.arange(j_min, j_max + 1, dtype=float)


def dyadic_degrees(j_max: int, j_min: int = 0) -> list:
    return [2**j for j in range(j_min, j_max + 1)]


# -- trend test ------------------------------------------------------------------


def _tail_start(n: int) -> int:
    return min(int(math.floor((1 - TAIL_FRACTION) * n)), max(n - 2, 0))


def trend_slope(ratios) -> float:
    """Least-squares slope of ``log ratio`` against ``log(position)`` on the last quartile.

    Positions are 1-based grid indices, so the slope does not depend on how
    fast the grid parameter itself grows.
    """
    y = np.asarray(ratios, dtype=float)
    n = y.size
    if n < 2:
        return 0.0
    idx = np.arange(_tail_start(n), n)
    tail = y[idx]
    keep = tail > 0
    if keep.sum() < 2:
        return 0.0
    x = np.log(idx[keep] + 1.0)
    return float(np.polyfit(x, np.log(tail[keep]), 1)[0])


def trend_verdict(ratios, slope_tol: float = SLOPE_TOL) -> str:
    """``BOUNDED`` if the maximum sits before the last quartile or the tail slope is below ``slope_tol``."""
    y = np.asarray(ratios, dtype=float)
    if y.size == 0:
        return BOUNDED
    if not np.all(np.isfinite(y)):
        return UNBOUNDED
    start = _tail_start(y.size)
    if y.size < 4 or int(np.argmax(y)) < start:
        return BOUNDED
    tail = y[start:]
    if tail[-1] == 0:
        return BOUNDED
    return BOUNDED if trend_slope(y) < slope_tol else UNBOUNDED


# -- reports -----------------------------------------------------------------------


def _p_json(p):
    return "inf" if p is not None and np.isinf(p) else p


@dataclass(frozen=True)
class GrowthReport:
    criterion: str
    gridpoints: tuple
    sup_ratio: float
    p: float | None
    weight_name: str
    verdict: str
    d: float | None = None
    notes: dict = field(default_factory=dict)

    @property
    def params(self) -> np.ndarray:
        return np.array([g[0] for g in self.gridpoints], dtype=float)

    @property
    def ratios(self) -> np.ndarray:
        return np.array([g[1] for g in self.gridpoints], dtype=float)

    @property
    def bounded(self) -> bool:
        return self.verdict == BOUNDED

    @property
    def slope(self) -> float:
        return trend_slope(self.ratios)

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "weight": self.weight_name,
            "p": _p_json(self.p),
            "d": self.d,
            "grid": [[float(a), float(b)] for a, b in self.gridpoints],
            "sup_ratio": float(self.sup_ratio),
            "verdict": self.verdict,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, default=str)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["criterion", "weight", "p", "d", "param", "ratio", "verdict"])
        for a, b in self.gridpoints:
            w.writerow([self.criterion, self.weight_name, _p_json(self.p), self.d, repr(float(a)), repr(float(b)), self.verdict])
        return buf.getvalue()


def make_report(criterion, params, ratios, p=None, weight_name="", d=None, notes=None, slope_tol=SLOPE_TOL) -> GrowthReport:
    ratios = [float(x) for x in ratios]
    if any(x < 0 for x in ratios):
        raise ValueError("ratios must be nonnegative")
    pts = tuple((float(a), b) for a, b in zip(params, ratios))
    return GrowthReport(
        criterion=criterion,
        gridpoints=pts,
        sup_ratio=max(ratios) if ratios else 0.0,
        p=p,
        weight_name=weight_name,
        verdict=trend_verdict(ratios, slope_tol),
        d=d,
        notes=dict(notes or {}),
    )


# -- criterion (a), (c), (d) ---------------------------------------------------------


def radial_norms(u: HarmonicExpansion, p, r_grid) -> np.ndarray:
    return np.array([radial_lp_profile(u, float(r), p) for r in r_grid])


def cesaro_norms(u: HarmonicExpansion, p, d, n_grid) -> np.ndarray:
    return np.array([radial_lp_profile(cesaro_mean(u, int(n), d), 1.0, p) for n in n_grid])


def vp_norms(u: HarmonicExpansion, p, n_grid, d_cut=None) -> np.ndarray:
    return np.array([radial_lp_profile(vp_sum(u, int(n), d_cut), 1.0, p) for n in n_grid])


def _radial_weights(g: Weight, r_grid):
    r = np.asarray(r_grid, dtype=float)
    return np.asarray(g(1.0 / (1.0 - r)), dtype=float)


def growth_ratio_radial(u, g: Weight, p, r_grid, norms=None) -> GrowthReport:
    """Ratios ``∥u(r·)∥_p / g(1/(1-r))``."""
    norms = radial_norms(u, p, r_grid) if norms is None else norms
    return make_report("radial", r_grid, norms / _radial_weights(g, r_grid), p, g.name)


def growth_ratio_cesaro(u, g: Weight, p, d, n_grid, norms=None) -> GrowthReport:
    """Ratios ``∥σ_n^d u∥_p / g(n)``."""
    norms = cesaro_norms(u, p, d, n_grid) if norms is None else norms
    gn = np.asarray(g(np.asarray(n_grid, dtype=float)), dtype=float)
    return make_report("cesaro", n_grid, norms / gn, p, g.name, d)


def growth_ratio_vp(u, g: Weight, p, n_grid, norms=None) -> GrowthReport:
    """Ratios ``∥R_n u∥_p / g(n)``."""
    norms = vp_norms(u, p, n_grid) if norms is None else norms
    gn = np.asarray(g(np.asarray(n_grid, dtype=float)), dtype=float)
    return make_report("vp", n_grid, norms / gn, p, g.name)


@dataclass(frozen=True)
class EquivalenceReport:
    """Criteria (a) radial, (c) Cesàro and (d) de la Vallée-Poussin side by side.

    ``PASS``: all bounded with sups within ``factor`` of each other.
    ``FAIL``: all unbounded.  ``INCONSISTENT``: anything else.
    """

    reports: dict
    factor: float
    verdict: str

    def __getitem__(self, key):
        return self.reports[key]

    @property
    def consistent(self) -> bool:
        return self.verdict != "INCONSISTENT"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "factor": self.factor,
            "reports": {k: r.to_dict() for k, r in self.reports.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, default=str)


def _equivalence_verdict(reports: dict, factor: float) -> str:
    verdicts = {r.verdict for r in reports.values()}
    if verdicts == {UNBOUNDED}:
        return "FAIL"
    if verdicts != {BOUNDED}:
        return "INCONSISTENT"
    sups = [r.sup_ratio for r in reports.values()]
    if min(sups) <= 0:
        return "PASS" if max(sups) <= 0 else "INCONSISTENT"
    return "PASS" if max(sups) / min(sups) <= factor else "INCONSISTENT"


def _grids(grids):
    if isinstance(grids, dict):
        return grids["r"], grids["n"]
    return grids


def equivalence_report(u, g: Weight, p, d, grids, factor: float = 100.0, norms=None) -> EquivalenceReport:
    """``grids`` is ``(r_grid, n_grid)`` or ``{"r": ..., "n": ...}``."""
    r_grid, n_grid = _grids(grids)
    if len(r_grid) == 0 or len(n_grid) == 0:
        raise ValueError("grids must be nonempty")
    norms = norms or {}
    reports = {
        "radial": growth_ratio_radial(u, g, p, r_grid, norms.get("radial")),
        "cesaro": growth_ratio_cesaro(u, g, p, d, n_grid, norms.get("cesaro")),
        "vp": growth_ratio_vp(u, g, p, n_grid, norms.get("vp")),
    }
    return EquivalenceReport(reports, factor, _equivalence_verdict(reports, factor))


def equivalence_suite(u, weights, p, d, grids, factor: float = 100.0) -> dict:
    """One :func:`equivalence_report` per weight, sharing the norm computations."""
    r_grid, n_grid = _grids(grids)
    norms = {
        "radial": radial_norms(u, p, r_grid),
        "cesaro": cesaro_norms(u, p, d, n_grid),
        "vp": vp_norms(u, p, n_grid),
    }
    return {g.name: equivalence_report(u, g, p, d, (r_grid, n_grid), factor, norms) for g in weights}


# -- power series, gap series, regular growth ------------------------------------------


def estimate_with_A_check(g: Weight, m: float, r_grid, rel_tail: float = 1e-13) -> GrowthReport:
    """Ratios ``Σ_k r^k A_k^m g(k) / (g(1/(1-r)) (1-r)^{-m-1})``."""
    ratios, terms = [], []
    for r in r_grid:
        s, n = cesaro_power_series(g, m, float(r), rel_tail)
        ratios.append(s * (1 - r) ** (m + 1) / float(g(1.0 / (1.0 - r))))
        terms.append(n)
    return make_report("estimate_with_A", r_grid, ratios, None, g.name, m, {"terms": terms})


def gap_partial_sums(amplitudes) -> np.ndarray:
    return np.cumsum(np.abs(np.asarray(amplitudes, dtype=float)))


def gap_membership(degrees, amplitudes, g: Weight, lam: float | None = None) -> GrowthReport:
    """Ratios ``Σ_{n_k <= M} |a_{n_k}| / g(M)`` for ``M`` in the degree list."""
    deg = np.asarray(degrees, dtype=float)
    if np.any(np.diff(deg) <= 0) or (lam is not None and np.any(deg[1:] < lam * deg[:-1])):
        raise ValueError("gap condition violated")
    sums = gap_partial_sums(amplitudes)
    return make_report("gap_sums", deg, sums / np.asarray(g(deg), dtype=float), np.inf, g.name)


def _probes(lo: int, hi: int, count: int):
    return sorted({int(round(x)) for x in np.linspace(lo, hi, count)})


def regular_growth_ratio(u, blocks: BlockSequence, p, probe_per_block: int = 3, d_cut=None) -> GrowthReport:
    """Block oscillations ``max_{n_k <= m <= n_{k+1}} ∥(R_m - R_{n_k}) u∥_p``."""
    if probe_per_block < 2:
        raise ValueError("probe_per_block must be at least 2")
    cuts = blocks.cuts
    params, osc = [], []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        best = 0.0
        for m in _probes(lo, hi, probe_per_block):
            if m == lo:
                continue
            best = max(best, radial_lp_profile(vp_difference(u, m, lo, d_cut), 1.0, p))
        params.append(lo)
        osc.append(best)
    return make_report("regular_growth", params, osc, p, "1", notes={"cuts": list(cuts)})


# -- mixed norms and solid spaces -------------------------------------------------------


@dataclass(frozen=True)
class MixedNorm:
    """``ℓ^p`` inside the blocks ``J_m``, weighted ``ℓ^q`` across them."""

    p: float
    q: float
    blocks: BlockSequence
    weight: Weight | None = None


def _coefficient_items(seq):
    """``(k, values)`` pairs from an expansion, a ``{k: values}`` map or a degree-indexed array."""
    if isinstance(seq, HarmonicExpansion):
        return list(seq.coeffs.items())
    if isinstance(seq, dict):
        return [(int(k), np.atleast_1d(np.asarray(v, dtype=float))) for k, v in seq.items()]
    arr = np.asarray(seq, dtype=float)
    return [(k, np.atleast_1d(v)) for k, v in enumerate(arr) if np.any(v != 0)]


def _lp(values, p):
    v = np.abs(np.asarray(values, dtype=float))
    if v.size == 0:
        return 0.0
    if np.isinf(p):
        return float(np.max(v))
    return float(np.sum(v**p) ** (1.0 / p))


def _block_values(items, blocks: BlockSequence):
    per_block = [[] for _ in blocks.cuts]
    for k, v in items:
        b = blocks.block_of(k)
        if b < 0:
            raise ValueError(f"degree {k} lies past the last cut {blocks.cuts[-1]}")
        per_block[b].extend(np.ravel(v).tolist())
    return per_block


def mixed_norm(seq, spec: MixedNorm) -> float:
    per_block = _block_values(_coefficient_items(seq), spec.blocks)
    inner = np.array([_lp(v, spec.p) for v in per_block])
    if spec.weight is not None:
        inner = inner / np.asarray(spec.weight(np.array(spec.blocks.cuts, dtype=float)), dtype=float)
    return _lp(inner, spec.q)


def exponential_coefficients(u: HarmonicExpansion) -> dict:
    """``{k: |a_k|, |a_{-k}|}`` for ``u = Σ_{j∈Z} a_j e^{ijθ}`` on the circle.

    ``a_{±k} = (a_{k,1} ∓ i a_{k,2})/√2``, so both moduli equal
    ``sqrt(a_{k,1}^2 + a_{k,2}^2)/√2``.
    """
    if u.dim_N != 1 or u.mode != "full":
        raise ValueError("solid norms need an N = 1 full-mode expansion")
    out = {}
    for k, arr in u.coeffs.items():
        if k == 0:
            out[0] = np.abs(arr[:1])
        else:
            m = math.hypot(arr[0], arr[1]) / math.sqrt(2.0)
            out[k] = np.array([m, m])
    return out


def _solid_norm(u, g, blocks, p, criterion):
    per_block = _block_values(exponential_coefficients(u).items(), blocks)
    gv = np.asarray(g(np.array(blocks.cuts, dtype=float)), dtype=float)
    ratios = np.array([_lp(v, p) for v in per_block]) / gv
    return make_report(criterion, blocks.cuts, ratios, p, g.name)


def solid_hull_norm(u: HarmonicExpansion, g: Weight, blocks: BlockSequence, report: bool = False):
    """``sup_m (Σ_{|j| ∈ J_m} |a_j|^2)^{1/2} / g(n_m)``."""
    rep = _solid_norm(u, g, blocks, 2.0, "solid_hull")
    return rep if report else rep.sup_ratio


def solid_core_norm(u: HarmonicExpansion, g: Weight, blocks: BlockSequence, report: bool = False):
    """``sup_m Σ_{|j| ∈ J_m} |a_j| / g(n_m)``."""
    rep = _solid_norm(u, g, blocks, 1.0, "solid_core")
    return rep if report else rep.sup_ratio
