# %% [markdown]
# # Weights, regularization and dyadic blocks
#
# A weight is an increasing function `g >= 1` with `g(2x) <= D g(x)`.  The
# package represents them symbolically, so sums, products and logarithms of
# weights keep exact derivatives.

# %%
import numpy as np

from cesaro_growth.weights import LogPowerWeight, PowerWeight, blocks, parse_weight, regularity_ratio, regularize

x = PowerWeight(1)
log = LogPowerWeight(1)
w = parse_weight("div:pow:1,logpow:1")
print(w.name, w(np.array([1.0, 10.0, 1000.0])))

# %% [markdown]
# Regularization replaces a weight by the smooth function
# `f(α) = (∫ t^α d(-1/w(t)))^{-1}`, which is comparable to the original one.
# For `q(x) = x` the value at 1 is 8/3.

# %%
print(regularize(x, 1.0))
for q in (PowerWeight(0.5), x, PowerWeight(2)):
    n = np.array([4.0, 64.0, 1024.0])
    f = np.array([regularize(q, a) for a in n])
    print(q.name, "f/q =", np.round(f / q(n), 4))

# %% [markdown]
# Regularity: `x^j |f^{(j)}(x)| / f(x)` must stay bounded.  Powers and
# logarithms qualify.

# %%
grid = np.geomspace(2, 1e6, 50)
for f in (x, log, w):
    print(f.name, round(regularity_ratio(f, 2, grid), 4))

# %% [markdown]
# Block sequences cut the degrees where the weight has grown by a factor `A`.
# For `f(x) = x` these are the powers of two; for a logarithm they spread out
# very quickly.

# %%
print(blocks(x, 2.0, 8).cuts)
print(blocks(log, 2.0, 4).cuts)
