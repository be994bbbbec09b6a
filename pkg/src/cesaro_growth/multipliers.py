"""Coefficient multipliers between growth spaces."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .diagnostics import (
    BOUNDED,
    GrowthReport,
    growth_ratio_cesaro,
    growth_ratio_vp,
    make_report,
    regular_growth_ratio,
)
from .expansions import HarmonicExpansion, evaluate
from .kernels import ZonalPoly, l1_norm
from .seqcalc import cesaro_numbers, weighted_difference_sum
from .weights import BlockSequence, LogOfWeight, RegularizedWeight, Weight

__all__ = [
    "MultiplierSeq",
    "apply_hf",
    "apply_hf_inv",
    "apply_iq",
    "iq_coefficients",
    "iq_radial_quadrature",
    "apply_multiplier",
    "one",
    "hf_multiplier",
    "hf_inv_multiplier",
    "iq_multiplier",
    "log_ratio_multiplier",
    "block_sqrt_inv",
    "read_multiplier_csv",
    "multiplier_criterion",
    "theorem_mult_target",
    "theorem_mult_check",
    "fn_bound_check",
    "regular_growth_mapping_check",
]


def _degree_factor(f: Weight, ks):
    """``f(k)`` with ``f(0) := f(1)``."""
    return np.asarray(f(np.maximum(np.asarray(ks, dtype=float), 1.0)), dtype=float)


@dataclass(frozen=True)
class MultiplierSeq:
    """A multiplier ``λ``.

    Degree-only multipliers carry ``rule`` (vectorized over integer degrees);
    per-index ones carry ``table`` mapping ``(k, l)`` to ``λ_kl``, with
    missing entries equal to 0.
    """

    kind: str
    description: str
    rule: object = None
    table: dict | None = None

    def __post_init__(self):
        if self.kind not in ("degree", "index"):
            raise ValueError("kind must be 'degree' or 'index'")
        if (self.kind == "degree") != (self.rule is not None):
            raise ValueError("degree multipliers need a rule, index multipliers a table")

    def degree_values(self, ks) -> np.ndarray:
        if self.kind != "degree":
            raise ValueError("multiplier is not degree-only")
        ks = np.asarray(ks, dtype=np.int64)
        return np.broadcast_to(np.asarray(self.rule(ks), dtype=float), ks.shape).copy()

    def scaled(self, c: float) -> "MultiplierSeq":
        if self.kind == "degree":
            rule = self.rule
            return MultiplierSeq("degree", f"{c:g}*{self.description}", lambda k: c * rule(k))
        return MultiplierSeq("index", f"{c:g}*{self.description}", table={key: c * v for key, v in self.table.items()})


def one() -> MultiplierSeq:
    return MultiplierSeq("degree", "one", lambda k: np.ones(np.shape(k)))


def hf_multiplier(f: Weight) -> MultiplierSeq:
    return MultiplierSeq("degree", f"hf:{f.name}", lambda k: _degree_factor(f, k))


def hf_inv_multiplier(f: Weight) -> MultiplierSeq:
    return MultiplierSeq("degree", f"hfinv:{f.name}", lambda k: 1.0 / _degree_factor(f, k))


def _regularized(q: Weight) -> RegularizedWeight:
    return q if isinstance(q, RegularizedWeight) else RegularizedWeight(q)


def iq_coefficients(q: Weight, ks) -> np.ndarray:
    """``1/f(k) = ∫_{1/2}^1 t^k d(-1/w(t))`` with ``f`` the regularization of ``q``."""
    f = _regularized(q)
    return np.array([1.0 / f(float(k)) for k in np.ravel(ks)]).reshape(np.shape(ks))


def iq_multiplier(q: Weight) -> MultiplierSeq:
    return MultiplierSeq("degree", f"iq:{q.name}", lambda k: iq_coefficients(q, k))


def log_ratio_multiplier() -> MultiplierSeq:
    """``λ_k = log(k)/k`` (zero for ``k <= 1``): the inverse of ``x/log x`` taken literally."""

    def rule(k):
        k = np.asarray(k, dtype=float)
        safe = np.maximum(k, 1.0)
        return np.where(k > 1, np.log(safe) / safe, 0.0)

    return MultiplierSeq("degree", "logratio", rule)


def block_sqrt_inv(blocks: BlockSequence) -> MultiplierSeq:
    """``λ_k = 1/√n_m`` for ``k ∈ J_m``; zero past the last cut."""
    cuts = np.array(blocks.cuts, dtype=float)

    def rule(k):
        idx = np.searchsorted(cuts, np.asarray(k, dtype=float), side="left")
        inside = idx < cuts.size
        return np.where(inside, 1.0 / np.sqrt(cuts[np.minimum(idx, cuts.size - 1)]), 0.0)

    return MultiplierSeq("degree", f"blocksqrtinv:A={blocks.ratio_A:g}", rule)


def read_multiplier_csv(path) -> MultiplierSeq:
    """Rows ``k,l,lambda``; a header row is optional."""
    table = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#") or row[0].strip() == "k":
                continue
            table[(int(row[0]), int(row[1]))] = float(row[2])
    return MultiplierSeq("index", f"file:{path}", table=table)


# -- operators ----------------------------------------------------------------


def apply_multiplier(u: HarmonicExpansion, lam: MultiplierSeq) -> HarmonicExpansion:
    if lam.kind == "degree":
        return u.scale_degrees(lam.degree_values)
    out = {}
    for k, arr in u.coeffs.items():
        fac = np.array([lam.table.get((k, l), 0.0) for l in range(1, arr.size + 1)])
        out[k] = arr * fac
    return HarmonicExpansion(u.dim_N, u.mode, out)


def apply_hf(u: HarmonicExpansion, f: Weight) -> HarmonicExpansion:
    """``H_f u``: degree ``j`` scaled by ``f(j)``."""
    return u.scale_degrees(lambda k: _degree_factor(f, k))


def apply_hf_inv(u: HarmonicExpansion, f: Weight) -> HarmonicExpansion:
    """``H_f^{-1} u``: degree ``j`` divided by ``f(j)``."""
    return u.scale_degrees(lambda k: 1.0 / _degree_factor(f, k))


def apply_iq(u: HarmonicExpansion, q: Weight) -> HarmonicExpansion:
    """``I_q u = ∫_{1/2}^1 u(t·) d(-1/w(t))`` with ``w(t) = q(1/(1-t))``, in coefficient form."""
    return u.scale_degrees(lambda k: iq_coefficients(q, k))


def iq_radial_quadrature(u: HarmonicExpansion, q: Weight, r: float, x) -> np.ndarray:
    """``I_q u(r x)`` by direct quadrature of the Stieltjes integral.

    With ``s = 1/(1-t)`` the measure becomes ``q'(s)/q(s)^2 ds`` on ``[2, ∞)``.
    The integral runs in ``v = log s`` over dyadic pieces; past ``s = 2^256``
    the integrand is ``u(rx) q'/q^2`` to double precision, leaving ``u(rx)/q(S)``.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    cuts = math.log(2.0) * 2.0 ** np.arange(0, 9)
    out = np.empty(x.shape[0])
    for i, xi in enumerate(x):

        def integrand(v, xi=xi):
            s = math.exp(v)
            qs = float(q(s))
            val = evaluate(u, r * (1.0 - 1.0 / s), xi[None, :])[0]
            return val * float(q.derivative(s, 1)) * s / qs / qs

        total = sum(
            integrate.quad(integrand, a, b, epsabs=1e-15, epsrel=1e-12, limit=200)[0]
            for a, b in zip(cuts[:-1], cuts[1:])
        )
        tail = evaluate(u, r, xi[None, :])[0] / float(q(math.exp(cuts[-1])))
        out[i] = total + tail
    return out


# -- criteria ------------------------------------------------------------------


def multiplier_criterion(
    lam: MultiplierSeq, g: Weight, g_tilde: Weight, d: float, n_grid, N: int = 1, eps: float | None = None
) -> GrowthReport:
    """Ratios ``∥σ_n^d(H_f λ)∥_1 / g̃(n)`` with ``f`` the regularization of ``g``.

    ``H_f λ`` is the zonal kernel ``Σ_k λ_k f(k) Z_k``.
    """
    if lam.kind != "degree":
        raise ValueError("the kernel criterion needs a degree-only multiplier")
    f = _regularized(g)
    n_max = int(max(n_grid))
    ks = np.arange(n_max + 1)
    fk = np.array([f(float(k)) for k in ks])
    h = lam.degree_values(ks) * fk
    ratios = []
    for n in n_grid:
        n = int(n)
        A = cesaro_numbers(n, d)
        P = ZonalPoly(N, h[: n + 1] * A[::-1] / A[n])
        ratios.append(l1_norm(P) / float(g_tilde(n)) if np.any(P.coeffs) else 0.0)
    notes = {"multiplier": lam.description, "g": g.name, "N": N}
    if eps is not None:
        gn = np.asarray(g(np.asarray(n_grid, dtype=float)), dtype=float)
        gt = np.asarray(g_tilde(np.asarray(n_grid, dtype=float)), dtype=float)
        notes["eps"] = eps
        notes["hypothesis_monotone"] = bool(np.all(np.diff(gt / gn**eps) >= 0))
    return make_report("multiplier_criterion", n_grid, ratios, 1.0, g_tilde.name, d, notes)


def theorem_mult_target(f: Weight, g: Weight, case: str) -> Weight:
    """Target weight: ``fg`` (a), ``g/f`` (b) or ``(g/f)(1 + log f)`` (c)."""
    if case == "a":
        return f * g
    if case == "b":
        return g / f
    if case == "c":
        return (g / f) * LogOfWeight(f, 1.0)
    raise ValueError("case must be 'a', 'b' or 'c'")


def theorem_mult_check(
    u: HarmonicExpansion,
    f: Weight,
    g: Weight,
    case: str,
    p,
    d,
    n_grid,
    target: Weight | None = None,
    eps: float = 0.5,
) -> GrowthReport:
    """Cesàro growth of ``H_f u`` (case a) or ``H_f^{-1} u`` (b, c) against the case's target.

    ``u`` is first checked against ``g``; if that fails the report is marked vacuous.
    ``target`` overrides the default weight, e.g. for sharpness experiments.
    """
    member = growth_ratio_cesaro(u, g, p, d, n_grid)
    v = apply_hf(u, f) if case == "a" else apply_hf_inv(u, f)
    tgt = target if target is not None else theorem_mult_target(f, g, case)
    rep = growth_ratio_cesaro(v, tgt, p, d, n_grid)
    notes = {"case": case, "f": f.name, "g": g.name, "membership": member.verdict, "vacuous": member.verdict != BOUNDED}
    if case == "b":
        n = np.asarray(n_grid, dtype=float)
        ratio = np.asarray(g(n), dtype=float) / np.asarray(f(n), dtype=float) ** (1 + eps)
        notes["eps"] = eps
        notes["hypothesis_monotone"] = bool(np.all(np.diff(ratio) >= 0))
    return make_report("theorem_mult", rep.params, rep.ratios, p, tgt.name, d, notes)


def fn_bound_check(f: Weight, d: int, n_grid) -> GrowthReport:
    """Ratios ``Σ_j |Δ^{d+1}(A_{n-j}^d f(j))| A_j^d / A_n^d / f(n)``."""
    ratios = [weighted_difference_sum(f, int(n), d) / float(f(n)) for n in n_grid]
    return make_report("fn_bound", n_grid, ratios, None, f.name, d)


def regular_growth_mapping_check(
    u: HarmonicExpansion, f: Weight, blocks: BlockSequence, p, direction: str = "inverse", probe_per_block: int = 3
) -> GrowthReport:
    """Mapping between the regular-growth space of ``blocks`` and ``h_f``.

    ``forward``: ``u`` should have bounded block oscillations; ``H_f u`` is
    tested against ``f`` along the cuts.  ``inverse``: ``u`` should lie in
    ``h_f``; ``H_f^{-1} u`` is tested for bounded oscillations.
    """
    cuts = list(blocks.cuts)
    if direction == "forward":
        pre = regular_growth_ratio(u, blocks, p, probe_per_block)
        rep = growth_ratio_vp(apply_hf(u, f), f, p, cuts)
    elif direction == "inverse":
        pre = growth_ratio_vp(u, f, p, cuts)
        rep = regular_growth_ratio(apply_hf_inv(u, f), blocks, p, probe_per_block)
    else:
        raise ValueError("direction must be 'forward' or 'inverse'")
    notes = {"direction": direction, "f": f.name, "precondition": pre.verdict, "vacuous": pre.verdict != BOUNDED}
    return make_report(f"mapping_{direction}", rep.params, rep.ratios, p, rep.weight_name, None, notes)

