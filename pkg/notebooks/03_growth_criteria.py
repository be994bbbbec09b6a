# %% [markdown]
# # Three ways to measure growth
#
# A harmonic function on the ball belongs to the growth space `h_g^p` when its
# sphere norms at radius `r` are `O(g(1/(1-r)))`.  The same class can be
# recognized from Cesàro means `σ_n^d u` or from de la Vallée-Poussin sums
# `R_n u`, measured against `g(n)`.  The diagnostics compute all three ratio
# sequences and compare their verdicts.

# %%
import numpy as np

from cesaro_growth.diagnostics import dyadic_degrees, dyadic_radii, equivalence_report
from cesaro_growth.expansions import HarmonicExpansion, dyadic_gap_series, radial_lp_profile
from cesaro_growth.weights import LogPowerWeight, PowerWeight

grids = (dyadic_radii(12), dyadic_degrees(12))

# %% [markdown]
# The lacunary series `Σ 2^j z^{2^j}` grows like `1/(1-r)`: it lies in the
# space for `g(x) = x` and not for `g(x) = x^{1/2}`.

# %%
u = dyadic_gap_series(14)
for r in (0.9, 0.99, 0.999):
    print(r, radial_lp_profile(u, r) * (1 - r))
for g in (PowerWeight(1), PowerWeight(0.5)):
    rep = equivalence_report(u, g, np.inf, 1, grids)
    print(g.name, rep.verdict, {c: r.verdict for c, r in rep.reports.items()})

# %% [markdown]
# Poisson data on `S^2` with `a_k = ρ^k` is a nice bounded function.  The mean
# square norms are handled through Parseval.

# %%
v = HarmonicExpansion.zonal(2, 0.7 ** np.arange(120))
rep = equivalence_report(v, LogPowerWeight(1), 2.0, 1, grids)
print(rep.verdict, round(rep["radial"].sup_ratio, 4), round(rep["cesaro"].sup_ratio, 4), round(rep["vp"].sup_ratio, 4))

# %% [markdown]
# Reports carry the raw ratios and serialize to JSON.

# %%
print(rep["vp"].to_json()[:300], "...")
