# %% [markdown]
# # Zonal kernels on the sphere
#
# Summability kernels are zonal polynomials `P(t) = Σ c_k Z_k(t)` with
# `t = <x, y>`.  Here we look at the Cesàro kernels `W_k^m` and the smooth
# cutoff kernels `Q_{m,n}`, and at their L¹ norms on `S^N`.

# %%
import numpy as np

from cesaro_growth import kernels as kn

# %% [markdown]
# For `m >= N` the Cesàro kernel is positive, so its L¹ norm equals its
# integral, which is 1.

# %%
for N in (1, 2, 3):
    P = kn.cesaro_kernel(N, 64, float(N))
    print(f"N={N}: min over nodes {kn.min_on_nodes(P):+.2e}, L1 norm {kn.l1_norm(P):.12f}")

# %% [markdown]
# Below that order positivity is lost but the norms stay bounded as long as
# `m > (N-1)/2`.  On `S^2` with `m = 1` the norm settles near 1.26.

# %%
for k in (8, 32, 128, 256):
    print(k, round(kn.l1_norm(kn.cesaro_kernel(2, k, 1.0)), 5))

# %% [markdown]
# The cutoff profile `q_m` equals `a_m^t` on `[0, 1]` and is bridged to zero on
# `[1, 2]`.  The resulting kernels `Q_{m,n}` are bounded in L¹ uniformly in
# both `m` and `n`.

# %%
q = kn.cutoff_profile(4, 1)
print("a_4 =", q.a_m, " q(0.5) =", q(0.5), " q(1.5) =", q(1.5), " q(2) =", q(2.0))
table = np.array([[kn.l1_norm(kn.vp_kernel(1, m, n)) for n in (8, 32, 128)] for m in (0, 8, 32, 64)])
print(np.round(table, 3))
