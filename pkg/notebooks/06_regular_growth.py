# %% [markdown]
# # Regular growth and solid spaces
#
# A block sequence `n_k` splits the degrees.  A function has regular growth
# when the block pieces `(R_m - R_{n_k}) u` stay uniformly bounded.  For a
# regular weight `f`, `H_f^{-1}` maps functions of growth `f` into this class
# and `H_f` maps back.

# %%
import numpy as np

from cesaro_growth.diagnostics import BOUNDED, regular_growth_ratio, solid_core_norm, solid_hull_norm
from cesaro_growth.expansions import HarmonicExpansion, gap_series
from cesaro_growth.multipliers import apply_hf_inv, apply_multiplier, block_sqrt_inv, regular_growth_mapping_check
from cesaro_growth.weights import LogPowerWeight, PowerWeight, blocks

# %% [markdown]
# A test function with growth exactly `f`: put `f(n_k) - f(n_{k-1})` at
# degree `n_k`.

# %%
for f, A in ((PowerWeight(1), 2.0), (LogPowerWeight(1), 1.2)):
    B = blocks(f, A, 12)
    fv = np.asarray(f(np.array(B.cuts, dtype=float)))
    u = gap_series(B.cuts, np.diff(np.concatenate([[0.0], fv])))
    inv = regular_growth_mapping_check(u, f, B, np.inf, "inverse")
    fwd = regular_growth_mapping_check(apply_hf_inv(u, f), f, B, np.inf, "forward")
    ctl = regular_growth_ratio(u, B, np.inf)
    print(f.name, "inverse:", inv.verdict, "forward:", fwd.verdict, "u itself:", ctl.verdict)

# %% [markdown]
# Solid hull and core: block ℓ² versus block ℓ¹ of the coefficients, scaled by
# the weight.  Spreading mass evenly inside blocks separates the two.

# %%
g, B = PowerWeight(0.5), blocks(PowerWeight(1), 2.0, 10)
coeffs = {}
for m, hi in enumerate(B.cuts):
    lo = B.cuts[m - 1] if m else 0
    for k in range(lo + 1, hi + 1):
        coeffs[k] = [float(g(hi)) / np.sqrt(hi - lo), 0.0]
u = HarmonicExpansion(1, "full", coeffs)
print("hull:", solid_hull_norm(u, g, B, report=True).verdict, " core:", solid_core_norm(u, g, B, report=True).verdict)
v = apply_multiplier(u, block_sqrt_inv(B))
print("after 1/sqrt(n_k) on each block, core:", solid_core_norm(v, g, B, report=True).verdict == BOUNDED)
