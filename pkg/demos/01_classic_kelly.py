#!/usr/bin/env python
# coding: utf-8

# # Betting a fraction of wealth
#
# A gamble pays `r` times the stake with probability `p` and loses the stake
# otherwise. Betting a fraction `f` each round, wealth grows at the rate
#
# $$g(f) = p \ln(1 + f(r-1)) + (1-p) \ln(1-f).$$
#
# The maximizer has a closed form, and its growth equals the divergence
# between our belief and the one implied by the odds.

# %%
import numpy as np

from kellylab import BinaryGame, bernoulli, kelly_fraction, kelly_growth, kl_divergence, to_bits

game = BinaryGame(p=0.6, r=2.0)
f_star = kelly_fraction(game)
g_star = kelly_growth(game, f_star)
print(f"f* = {f_star:.6f}, growth = {g_star:.6f} nats = {to_bits(g_star):.6f} bits per round")

# %% [markdown]
# A coarse grid confirms the closed form sits at the top of the curve.

# %%
grid = np.linspace(0.0, 0.95, 20)
for f in grid[::4]:
    print(f"  f = {f:.2f}  g = {kelly_growth(game, f):+.5f}")
print("divergence from the implied odds:", kl_divergence(bernoulli(game.p), bernoulli(game.q)))

# %% [markdown]
# With no edge the best bet is no bet at all.

# %%
fair = BinaryGame(p=0.5, r=2.0)
print("fair coin: f* =", kelly_fraction(fair))
