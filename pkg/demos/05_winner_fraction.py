#!/usr/bin/env python
# coding: utf-8

# # Betting on how often each asset wins
#
# A simple heuristic: hold each asset in proportion to how often it posts the
# best return. It never trails the optimum by more than its own entropy.

# %%
import numpy as np

from kellylab import ReturnMatrix, ScenarioSet, entropy_bound_check, max_sequence_return

scenarios = ScenarioSet([0.25, 0.25, 0.5], [[1.3, 0.9], [0.8, 1.1], [1.05, 1.0]])
res = entropy_bound_check(scenarios)
print("W' =", res.w_prime, " W* =", np.round(res.w_star, 4))
print(f"gap {res.gap:.5f} <= H(W') {res.entropy_bound:.5f}: {res.status}")

# %% [markdown]
# Scaling up one asset until it wins every row drives `H(W')` down to zero.
# The gap need not shrink along the way, but it stays under the bound and
# vanishes at the end.

# %%
for scale in (1.0, 1.2, 1.5, 2.0):
    R = np.array(scenarios.returns)
    R[:, 0] *= scale
    r = entropy_bound_check(ScenarioSet(scenarios.probs, R))
    print(f"  scale {scale}: H(W') = {r.entropy_bound:.4f}, gap = {r.gap:.4f}")

# %% [markdown]
# In hindsight, the best sequence just picks each period's winner.

# %%
best = max_sequence_return(ReturnMatrix([[1.1, 1.2], [0.9, 1.3]]))
print("best path", best.path, "returns", best.r_max)
