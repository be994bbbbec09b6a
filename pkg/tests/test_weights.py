import math

import numpy as np
import pytest
from scipy import integrate

from cesaro_growth.weights import (
    LogOfWeight,
    LogPowerWeight,
    NotAWeightError,
    PowerWeight,
    QuadratureError,
    RegularizedWeight,
    TabulatedWeight,
    blocks,
    cesaro_power_series,
    doubling_constant,
    parse_weight,
    regularity_ratio,
    regularize,
    regularize_moments,
)

FAMILY = [PowerWeight(0.5), PowerWeight(1), PowerWeight(2), LogPowerWeight(1), LogPowerWeight(2), PowerWeight(1) / LogPowerWeight(1)]


@pytest.mark.parametrize("g", FAMILY, ids=lambda g: g.name)
def test_normalized_monotone_doubling(g):
    assert float(g(1.0)) == pytest.approx(1.0, abs=1e-15)
    x = np.geomspace(1, 2**20, 400)
    v = g(x)
    assert np.all(np.diff(v) >= 0)
    D = doubling_constant(g, 2**20)
    assert np.all(g(2 * x) / v <= D + 1e-9)
    assert g.doubling_D == D


def test_clamped_below_one():
    assert float(PowerWeight(2)(0.0)) == 1.0
    assert float(LogPowerWeight(1)(0.5)) == 1.0


@pytest.mark.parametrize("alpha", [0.5, 1, 2, 3.25])
def test_doubling_of_power(alpha):
    assert doubling_constant(PowerWeight(alpha), 1e4) == pytest.approx(2**alpha, rel=1e-14)


def test_doubling_of_log():
    assert doubling_constant(LogPowerWeight(1), 1e6) == pytest.approx(1 + math.log(2), rel=1e-12)


def test_doubling_grid_refinement_is_stable():
    g = PowerWeight(1) / LogPowerWeight(1)
    a = doubling_constant(g, 1e6, 512)
    b = doubling_constant(g, 1e6, 4096)
    assert abs(a - b) < 1e-6


def test_tabulated_weight(tmp_path):
    p = tmp_path / "w.csv"
    p.write_text("x,g\n1,1\n2,1.5\n4,3\n8,5\n")
    w = TabulatedWeight.from_csv(p)
    assert float(w(3.0)) == pytest.approx(2.25)
    assert doubling_constant(w, 8) >= 1.0
    bad = tmp_path / "bad.csv"
    bad.write_text("1,1\n2,3\n4,2\n")
    with pytest.raises(NotAWeightError):
        TabulatedWeight.from_csv(bad)
    with pytest.raises(ValueError, match="regularity undefined for tables"):
        regularity_ratio(w, 1, [1.0, 2.0])


def test_blocks_examples():
    assert blocks(PowerWeight(1), 2.0, 6).cuts == (1, 2, 4, 8, 16, 32, 64)
    assert blocks(PowerWeight(2), 2.0, 6).cuts == (1, 2, 3, 5, 8, 12, 17)
    B = blocks(LogPowerWeight(1), 2.0, 4)
    assert B.cuts == (1, 3, 25, 1699, 7846596)


@pytest.mark.parametrize("g,A", [(PowerWeight(1), 2.0), (PowerWeight(2), 2.0), (LogPowerWeight(1), 2.0), (LogPowerWeight(1), 1.2), (PowerWeight(0.5), 3.0)])
def test_blocks_invariant(g, A):
    B = blocks(g, A, 8)
    assert B.check_invariant()
    cuts = np.array(B.cuts)
    assert np.all(np.diff(cuts) > 0)
    # minimality: one degree less falls short of the target
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi - 1 > lo:
            assert float(g(hi - 1)) < A * float(g(lo))


def test_blocks_cap_truncates():
    B = blocks(LogPowerWeight(1), 2.0, 10, cap=10**6)
    assert B.truncated and B.cuts[-1] <= 10**6


def test_block_of():
    B = blocks(PowerWeight(1), 2.0, 4)
    assert [B.block_of(k) for k in (0, 1, 2, 3, 4, 5, 16, 17)] == [0, 0, 1, 2, 2, 3, 4, -1]


def test_regularity_ratio_examples():
    t = np.geomspace(1, 1e4, 64)
    assert regularity_ratio(PowerWeight(1), 1, t) == pytest.approx(1.0)
    assert regularity_ratio(PowerWeight(2), 1, t) == pytest.approx(1.0)
    # (1+log t): f'' t / f' = 1, f''' t^2 / f' = 2
    assert regularity_ratio(LogPowerWeight(1), 1, t) == pytest.approx(1.0)
    assert regularity_ratio(LogPowerWeight(1), 2, t) == pytest.approx(2.0)


def test_product_derivatives_against_finite_differences():
    g = PowerWeight(1) / LogPowerWeight(1)
    x = np.array([2.0, 10.0, 300.0])
    h = 1e-4 * x
    fd = (g(x + h) - g(x - h)) / (2 * h)
    assert np.allclose(g.derivative(x, 1), fd, rtol=1e-7)
    lf = LogOfWeight(PowerWeight(2), 0.75)
    fd = (lf(x + h) - lf(x - h)) / (2 * h)
    assert np.allclose(lf.derivative(x, 1), fd, rtol=1e-7)


def test_regularize_closed_forms():
    x = PowerWeight(1)
    assert regularize(x, 1) == pytest.approx(8 / 3, abs=1e-9)
    assert regularize(x, 0) == pytest.approx(2.0, abs=1e-12)
    # ∫_{1/2}^1 t^a dt in closed form
    for a in (2.0, 5.5, 40.0):
        exact = (a + 1) / (1 - 0.5 ** (a + 1))
        assert regularize(x, a) == pytest.approx(exact, rel=1e-10)


def _regularize_oracle(q, alpha):
    # s = 1/(1-t): ∫_2^∞ (1-1/s)^α q'(s)/q(s)^2 ds on dyadic pieces, tail ≈ 1/q(2^201)
    def integrand(s):
        return (1 - 1 / s) ** alpha * float(q.derivative(s, 1)) / float(q(s)) ** 2

    total, lo = 0.0, 2.0
    for _ in range(200):
        total += integrate.quad(integrand, lo, 2 * lo, epsabs=0, epsrel=1e-13)[0]
        lo *= 2
    return 1.0 / (total + 1.0 / float(q(lo)))


@pytest.mark.parametrize("q", [PowerWeight(0.5), PowerWeight(2), LogPowerWeight(1)], ids=lambda q: q.name)
@pytest.mark.parametrize("n", [4, 16, 64, 256])
def test_regularize_against_substitution_oracle(q, n):
    f = regularize(q, n)
    assert f == pytest.approx(_regularize_oracle(q, n), rel=1e-8)
    assert f <= 4 * float(q(n))


def test_regularize_monotone_in_alpha():
    q = PowerWeight(0.5)
    vals = [regularize(q, a) for a in np.linspace(0, 50, 26)]
    assert np.all(np.diff(vals) > 0)


def test_regularized_weight_derivatives():
    f = RegularizedWeight(PowerWeight(1))
    x = np.array([3.0, 20.0])
    h = 1e-3
    fd = (f(x + h) - f(x - h)) / (2 * h)
    assert np.allclose(f.derivative(x, 1), fd, rtol=1e-6)
    mom = regularize_moments(PowerWeight(1), 3.0, 2)
    assert mom[0] == pytest.approx(1 / regularize(PowerWeight(1), 3.0), rel=1e-12)


def test_cesaro_power_series_binomial_identity():
    one = PowerWeight(0)
    for m in (1, 2):
        for r in (0.5, 0.9, 1 - 2**-10):
            s, _ = cesaro_power_series(one, m, r)
            assert s * (1 - r) ** (m + 1) == pytest.approx(1.0, abs=1e-9)


def test_cesaro_power_series_cap():
    with pytest.raises(QuadratureError) as err:
        cesaro_power_series(PowerWeight(1), 1, 1 - 1e-7, cap=1000)
    assert err.value.partial > 0


@pytest.mark.parametrize(
    "text,x,value",
    [
        ("pow:2", 3.0, 9.0),
        ("logpow:1", math.e, 2.0),
        ("mul:pow:1,logpow:1", math.e, 2 * math.e),
        ("div:pow:1,logpow:1", math.e, math.e / 2),
        ("mul:(div:pow:1,logpow:1),pow:2", math.e, math.e**3 / 2),
        ("logof:1,pow:1", math.e, 2.0),
    ],
)
def test_parse_weight(text, x, value):
    assert float(parse_weight(text)(x)) == pytest.approx(value, rel=1e-14)


def test_parse_weight_reg_and_errors():
    assert float(parse_weight("reg:pow:1")(1.0)) == pytest.approx(8 / 3, abs=1e-9)
    for bad in ("pow", "pow:x", "zzz:1"):
        with pytest.raises(ValueError):
            parse_weight(bad)
