#!/usr/bin/env python
# coding: utf-8

# # Log-optimal portfolios over scenarios
#
# With many assets and correlated outcomes there is no closed form. The
# optimum is certified instead: at `W*`, every asset's expected relative
# return `E[r_i / W*.r]` is at most one, with equality for held assets.

# %%
import numpy as np

from kellylab import ScenarioSet, certificate, expected_log_growth, log_optimal_portfolio

rng = np.random.default_rng(0)
scenarios = ScenarioSet(rng.dirichlet(np.ones(6)), rng.lognormal(0.02, 0.3, size=(6, 4)))
w_star, cert = log_optimal_portfolio(scenarios)
print("W* =", np.round(w_star, 4))
print("multipliers =", np.round(cert.multipliers, 6))
print(f"max violation {cert.max_violation:.1e}, growth {expected_log_growth(scenarios, w_star):.6f}")

# %% [markdown]
# A classic bet is a two-asset portfolio: cash, and a ticket paying `r` or
# nothing. The solver recovers the closed-form fraction.

# %%
p, r = 0.6, 2.0
w, _ = log_optimal_portfolio(ScenarioSet([p, 1 - p], [[1.0, r], [1.0, 0.0]]))
print(f"risky weight {w[1]:.8f} vs (pr - 1)/(r - 1) = {(p * r - 1) / (r - 1):.8f}")
print("an arbitrary mix is flagged:", certificate(scenarios, np.full(4, 0.25)).max_violation)
