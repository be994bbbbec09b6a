"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Every verdict is the diagnostics trend test; raw ratios are kept in the
reports, and their suprema are echoed in the summary lines.
"""

import math
import time

import numpy as np
import pytest

from cesaro_growth import kernels as kn
from cesaro_growth.diagnostics import (
    BOUNDED,
    UNBOUNDED,
    dyadic_degrees,
    dyadic_radii,
    equivalence_suite,
    estimate_with_A_check,
    gap_membership,
    regular_growth_ratio,
    trend_verdict,
)
from cesaro_growth.expansions import (
    HarmonicExpansion,
    dyadic_gap_series,
    evaluate,
    gap_series,
    parseval_norm,
    radial_lp_profile,
)
from cesaro_growth.multipliers import (
    apply_hf,
    apply_hf_inv,
    apply_iq,
    apply_multiplier,
    iq_radial_quadrature,
    log_ratio_multiplier,
    regular_growth_mapping_check,
    theorem_mult_check,
)
from cesaro_growth.seqcalc import summation_by_parts_check
from cesaro_growth.weights import LogOfWeight, LogPowerWeight, PowerWeight, blocks, regularize

from conftest import ACCEPTANCE_LINES

X = PowerWeight(1)
LOG = LogPowerWeight(1)


class Gate:
    """Records named checks for one criterion and reports them in one line."""

    def __init__(self, number):
        self.number = number
        self.start = time.perf_counter()
        self.failures = []
        self.facts = []

    def check(self, ok, what):
        if not ok:
            self.failures.append(what)

    def note(self, text):
        self.facts.append(text)

    def finish(self, limit=None):
        elapsed = time.perf_counter() - self.start
        if limit is not None:
            self.check(elapsed < limit, f"runtime {elapsed:.1f}s >= {limit}s")
        status = "PASS" if not self.failures else "FAIL"
        detail = "; ".join(self.facts + self.failures)
        line = f"criterion {self.number}: {status} ({elapsed:.1f}s) {detail}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert not self.failures, line


def test_criterion_01_kernel_normalization_positivity():
    gate = Gate(1)
    for N in (1, 2, 3):
        worst_min, worst_dev = np.inf, 0.0
        for k in range(257):
            P = kn.cesaro_kernel(N, k, float(N))
            worst_min = min(worst_min, kn.min_on_nodes(P))
            worst_dev = max(worst_dev, abs(kn.l1_norm(P) - 1.0))
        gate.check(worst_min >= -1e-10, f"N={N} min {worst_min:.3e}")
        gate.check(worst_dev <= 1e-8, f"N={N} |l1-1| {worst_dev:.3e}")
        gate.note(f"N={N} min={worst_min:.2e} dev={worst_dev:.1e}")
    gate.finish(30)


def test_criterion_02_uniform_cesaro_bound():
    gate = Gate(2)
    for N in (1, 2, 3):
        d = kn.default_d(N)
        norms = np.array([kn.l1_norm(kn.cesaro_kernel(N, k, float(d))) for k in range(257)])
        sup128, sup256 = norms[:129].max(), norms.max()
        gate.check(np.all(np.isfinite(norms)), f"N={N} non-finite norm")
        gate.check(sup256 <= 1.05 * sup128, f"N={N} sup grew {sup256 / sup128:.4f}x")
        gate.note(f"N={N} d={d} sup={sup256:.4f}")
    gate.finish(60)


def test_criterion_03_cutoff_kernels_uniformly_bounded():
    gate = Gate(3)
    ns = [4, 8, 16, 32, 64, 128]
    for N in (1, 2):
        per_n = [max(kn.l1_norm(kn.vp_kernel(N, m, n)) for m in range(0, 65, 2)) for n in ns]
        verdict = trend_verdict(per_n)
        gate.check(np.all(np.isfinite(per_n)), f"N={N} non-finite")
        gate.check(verdict == BOUNDED, f"N={N} {verdict}")
        gate.note(f"N={N} sup={max(per_n):.3f}")
    gate.finish(60)


def test_criterion_04_estimate_with_A():
    # For power weights the ratio increases to Γ(m+1+a)/Γ(m+1), so "attained
    # before j = 10" is checked as: sup over j >= 10 gains under 1% on j < 10.
    gate = Gate(4)
    r = dyadic_radii(12, 1)
    for g, a in ((PowerWeight(0.5), 0.5), (X, 1.0), (LOG, None)):
        for m in (1, 2):
            rep = estimate_with_A_check(g, m, r)
            early, late = rep.ratios[:9].max(), rep.ratios.max()
            gain = late / early - 1
            gate.check(rep.verdict == BOUNDED, f"{g.name} m={m} {rep.verdict}")
            gate.check(gain < 0.01, f"{g.name} m={m} late gain {gain:.2%}")
            if a is not None:
                limit = math.gamma(m + 1 + a) / math.gamma(m + 1)
                gate.check(abs(rep.ratios[-1] - limit) < 2e-3 * limit, f"{g.name} m={m} limit")
            gate.note(f"{g.name} m={m} argmax j={int(np.argmax(rep.ratios)) + 1} gain={gain:.2%}")
    for m in (1, 2):
        flat = estimate_with_A_check(PowerWeight(0), m, r)
        dev = float(np.max(np.abs(flat.ratios - 1.0)))
        gate.check(dev <= 1e-9, f"g=1 m={m} deviation {dev:.2e}")
    gate.finish()


def test_criterion_05_equivalence_of_criteria():
    gate = Gate(5)
    gs = dyadic_gap_series(14)
    suite = {
        "const": HarmonicExpansion.constant(1, 1.0),
        "harmonic": HarmonicExpansion.single(1, 5),
        "poisson0.5": HarmonicExpansion.zonal(1, 0.5 ** np.arange(60)).to_full(),
        "poisson0.9": HarmonicExpansion.zonal(1, 0.9 ** np.arange(400)).to_full(),
        "gap": gs,
        "gap*Hf(x^1/2)": apply_hf(gs, PowerWeight(0.5)),
        "gap*Hf(1+log)": apply_hf(gs, LOG),
    }
    weights = [PowerWeight(0.5), X, PowerWeight(2), LOG]
    grids = (dyadic_radii(12), dyadic_degrees(12))
    counts = {"PASS": 0, "FAIL": 0}
    for p in (np.inf, 2.0):
        for name, u in suite.items():
            for wname, rep in equivalence_suite(u, weights, p, 1, grids).items():
                gate.check(rep.consistent, f"{name}/{wname}/p={p} {rep.verdict}")
                counts[rep.verdict] = counts.get(rep.verdict, 0) + 1
    gate.note(f"{counts['PASS']} PASS, {counts['FAIL']} FAIL")
    gate.finish(120)


def test_criterion_06_regularization_bounds():
    gate = Gate(6)
    n = np.arange(2, 1025, 2, dtype=float)
    for q in (PowerWeight(0.5), X, PowerWeight(2)):
        f = np.array([regularize(q, a) for a in n])
        qn = np.asarray(q(n), dtype=float)
        gate.check(np.all(f <= 4 * qn), f"{q.name} f > 4q")
        ratio = qn / f
        A = float(ratio.max())
        gate.check(trend_verdict(ratio) == BOUNDED, f"{q.name} q/f not stable")
        gate.note(f"{q.name} A={A:.4f}")
    spot = regularize(X, 1.0)
    gate.check(abs(spot - 8 / 3) <= 1e-9, f"f(1)={spot!r}")
    gate.finish()


def test_criterion_07_sharpness_ladder():
    gate = Gate(7)
    lam = log_ratio_multiplier()
    worst = 0.0
    for J in range(1, 31):
        v = apply_multiplier(dyadic_gap_series(J), lam)
        total = sum(v.coefficient(2**j) * math.sqrt(2) for j in range(J + 1))
        worst = max(worst, abs(total - math.log(2) * J * (J + 1) / 2))
    gate.check(worst <= 1e-9, f"partial sum error {worst:.2e}")
    gate.note(f"max partial-sum error {worst:.1e}")
    J = 60
    deg = [2**j for j in range(J + 1)]
    amps = np.array(deg, float) * lam.degree_values(np.array(deg, dtype=np.int64))
    sq = gap_membership(deg, amps, LogPowerWeight(2))
    under = gap_membership(deg, amps, LogPowerWeight(1.5))
    gate.check(sq.verdict == BOUNDED, f"(log)^2 {sq.verdict}")
    gate.check(under.verdict == UNBOUNDED, f"(log)^1.5 {under.verdict}")
    gate.note(f"(log)^2 slope={sq.slope:.3f}, (log)^1.5 slope={under.slope:.3f}")
    gate.finish()


def test_criterion_08_multiplication():
    gate = Gate(8)
    gaps = {
        "dyadic": dyadic_gap_series(16),
        "triadic": gap_series([3**j for j in range(11)], [float(3**j) for j in range(11)]),
    }
    n = dyadic_degrees(14)
    for name, u in gaps.items():
        a = theorem_mult_check(u, PowerWeight(0.5), X, "a", np.inf, 1, n)
        b = theorem_mult_check(u, PowerWeight(1 / 3), X, "b", np.inf, 1, n)
        gate.check(a.verdict == BOUNDED and not a.notes["vacuous"], f"{name} case a {a.verdict}")
        gate.check(b.verdict == BOUNDED and b.notes["hypothesis_monotone"], f"{name} case b {b.verdict}")
    u = dyadic_gap_series(32)
    n = dyadic_degrees(30)
    f = X / LOG
    c = theorem_mult_check(u, f, X, "c", np.inf, 1, n)
    under = theorem_mult_check(u, f, X, "c", np.inf, 1, n, target=(X / f) * LogOfWeight(f, 0.75))
    gate.check(c.verdict == BOUNDED, f"case c {c.verdict}")
    gate.check(under.verdict == UNBOUNDED, f"undershoot {under.verdict}")
    gate.note(f"case c slope={c.slope:.3f}, undershoot slope={under.slope:.3f}")
    gate.finish()


def _telescoping(f, B):
    fv = np.asarray(f(np.array(B.cuts, dtype=float)), dtype=float)
    return gap_series(B.cuts, np.diff(np.concatenate([[0.0], fv])))


def test_criterion_09_regular_growth_mapping():
    gate = Gate(9)
    for f, A in ((X, 2.0), (LOG, 1.2)):
        B = blocks(f, A, 12)
        u = _telescoping(f, B)
        inv = regular_growth_mapping_check(u, f, B, np.inf, "inverse")
        fwd = regular_growth_mapping_check(apply_hf_inv(u, f), f, B, np.inf, "forward")
        for label, rep in (("inverse", inv), ("forward", fwd)):
            gate.check(rep.verdict == BOUNDED, f"{f.name} {label} {rep.verdict}")
            gate.check(rep.notes["precondition"] == BOUNDED, f"{f.name} {label} precondition failed")
        control = regular_growth_ratio(u, B, np.inf)
        gate.check(control.verdict == UNBOUNDED, f"{f.name} control {control.verdict}")
        gate.note(f"{f.name}: control sup={control.sup_ratio:.3g}")
    gate.finish()


def test_criterion_10_exactness_oracles():
    gate = Gate(10)
    rng = np.random.default_rng(20261016)
    worst = 0.0
    for _ in range(1000):
        a = rng.standard_normal(rng.integers(1, 30))
        b = rng.standard_normal(rng.integers(1, 30))
        lhs, rhs = summation_by_parts_check(a, b, int(rng.integers(0, 5)))
        worst = max(worst, abs(lhs - rhs))
    gate.check(worst < 1e-10, f"summation by parts {worst:.2e}")

    parseval = 0.0
    for N, K in ((1, 20), (2, 12)):
        u = HarmonicExpansion.random(N, K, rng)
        for r in (0.3, 0.8, 1.0):
            parseval = max(parseval, abs(radial_lp_profile(u, r, 2.0) - parseval_norm(u, r)) / parseval_norm(u, r))
    gate.check(parseval < 1e-9, f"Parseval {parseval:.2e}")

    ident = 0.0
    u = HarmonicExpansion.random(2, 30, rng)
    for f in (X, PowerWeight(0.5), LOG, X / LOG):
        v = apply_hf(apply_hf_inv(u, f), f)
        ident = max(ident, max(float(np.max(np.abs(v.coeffs[k] - u.coeffs[k]))) for k in u.coeffs))
    gate.check(ident < 1e-14, f"H_f H_f^-1 {ident:.2e}")

    iq = 0.0
    u = HarmonicExpansion.random(1, 8, rng)
    th = np.linspace(0, 2 * np.pi, 4, endpoint=False)
    x = np.stack([np.cos(th), np.sin(th)], axis=1)
    for q in (X, PowerWeight(0.5)):
        for r in (0.5, 0.9):
            iq = max(iq, float(np.max(np.abs(iq_radial_quadrature(u, q, r, x) - evaluate(apply_iq(u, q), r, x)))))
    gate.check(iq < 1e-7, f"I_q {iq:.2e}")
    gate.note(f"sbp={worst:.1e} parseval={parseval:.1e} hf={ident:.1e} iq={iq:.1e}")
    gate.finish(30)
