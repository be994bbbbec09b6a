# %% [markdown]
# # Coefficient multipliers
#
# `H_f` multiplies the degree-k part by `f(k)`, `H_f^{-1}` divides by it, and
# `I_q` is the radial average `∫ u(t x) d(-1/q(1/(1-t)))`, which in coefficient
# form divides by the regularization of `q`.  All of them commute.

# %%
import numpy as np

from cesaro_growth.diagnostics import dyadic_degrees
from cesaro_growth.expansions import HarmonicExpansion, dyadic_gap_series, evaluate
from cesaro_growth.multipliers import (
    apply_hf,
    apply_hf_inv,
    apply_iq,
    iq_radial_quadrature,
    multiplier_criterion,
    one,
    theorem_mult_check,
)
from cesaro_growth.weights import LogOfWeight, LogPowerWeight, PowerWeight

x = PowerWeight(1)
u = HarmonicExpansion.random(1, 8, rng=0)

# %%
print("H_f H_f^-1 = id:", apply_hf(apply_hf_inv(u, x), x).allclose(u, rtol=1e-14, atol=0))
pts = np.array([[1.0, 0.0], [0.0, 1.0]])
print("I_q coefficient form :", evaluate(apply_iq(u, x), 0.8, pts))
print("I_q direct quadrature:", iq_radial_quadrature(u, x, 0.8, pts))

# %% [markdown]
# Multiplication rules: `H_f` maps `h_g` to `h_{fg}`, `H_f^{-1}` maps it to
# `h_{g/f}`, and in the critical case a logarithmic factor appears.  Each check
# applies the operator to a lacunary series and measures the image against the
# predicted weight.

# %%
gs = dyadic_gap_series(16)
n = dyadic_degrees(14)
print("a:", theorem_mult_check(gs, PowerWeight(0.5), x, "a", np.inf, 1, n).verdict)
print("b:", theorem_mult_check(gs, PowerWeight(1 / 3), x, "b", np.inf, 1, n).verdict)
f = x / LogPowerWeight(1)
gs32, n30 = dyadic_gap_series(32), dyadic_degrees(30)
print("c:", theorem_mult_check(gs32, f, x, "c", np.inf, 1, n30).verdict)
print("c, too small a target:",
      theorem_mult_check(gs32, f, x, "c", np.inf, 1, n30, target=(x / f) * LogOfWeight(f, 0.75)).verdict)

# %% [markdown]
# The kernel criterion for a multiplier `λ` between `h_g^∞` spaces: the Cesàro
# means of `Σ λ_k f(k) Z_k` must have L¹ norm `O(g̃(n))`.

# %%
print(multiplier_criterion(one(), x, x, 1, dyadic_degrees(7)).verdict)
