# %% [markdown]
# # Lacunary series and sharpness
#
# For series supported on a gap sequence `n_{k+1} >= λ n_k`, membership in a
# growth space reduces to partial sums of the coefficients.  This turns
# questions about sup norms into arithmetic on sequences.

# %%
import math

import numpy as np

from cesaro_growth.diagnostics import dyadic_radii, gap_membership, growth_ratio_radial
from cesaro_growth.expansions import dyadic_gap_series
from cesaro_growth.multipliers import apply_multiplier, log_ratio_multiplier
from cesaro_growth.weights import LogPowerWeight, PowerWeight

# %% [markdown]
# The coefficient test agrees with the sup-norm computation.

# %%
deg = [2**j for j in range(21)]
print(gap_membership(deg, deg, PowerWeight(1)).verdict,
      growth_ratio_radial(dyadic_gap_series(20), PowerWeight(1), np.inf, dyadic_radii(16)).verdict)

# %% [markdown]
# Applying the multiplier `log k / k` to `Σ 2^j z^{2^j}` leaves coefficients
# `j log 2`, whose partial sums are `log 2 · J(J+1)/2`.  That is of order
# `(log n)^2`: the image lies in the `(log x)^2` space and in no smaller power.

# %%
lam = log_ratio_multiplier()
v = apply_multiplier(dyadic_gap_series(10), lam)
print([round(v.coefficient(2**j) * math.sqrt(2), 6) for j in range(5)])

J = 60
deg = [2**j for j in range(J + 1)]
amps = np.array(deg, float) * lam.degree_values(np.array(deg, dtype=np.int64))
for beta in (2.0, 1.5):
    rep = gap_membership(deg, amps, LogPowerWeight(beta))
    print(f"(log x)^{beta}: {rep.verdict}, slope {rep.slope:.3f}")
