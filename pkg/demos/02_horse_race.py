#!/usr/bin/env python
# coding: utf-8

# # Horse races and proportional betting
#
# Each horse `i` wins with probability `p_i` and pays `r_i` per unit staked.
# Spreading the whole bankroll as `W`, the growth rate splits into three
# pieces:
#
# $$g(W) = \sum_i p_i \ln r_i - H(P) - D(P \| W).$$
#
# Only the last piece depends on `W`, so betting `W = P` is optimal.

# %%
import numpy as np

from kellylab import HorseRace, fair_odds_growth, horse_race_growth, horse_race_optimal

race = HorseRace([0.7, 0.3], [2.0, 2.0])
for w in ([0.5, 0.5], [0.9, 0.1], horse_race_optimal(race)):
    d = horse_race_growth(race, w)
    print(f"W = {np.round(w, 3)}: money {d.money_term:.4f} - entropy {d.entropy_term:.4f} "
          f"- divergence {d.divergence_term:.4f} = {d.total:+.4f}")

# %% [markdown]
# Under fair odds the bookmaker's implied probabilities `q_i = 1/r_i` sum to
# one and the growth becomes a contest between two divergences: how far the
# market sits from the truth, minus how far we do.

# %%
kl_market, kl_mine = fair_odds_growth(race, [0.6, 0.4])
print(f"D(P||Q) = {kl_market:.5f}, D(P||W) = {kl_mine:.5f}, growth = {kl_market - kl_mine:+.5f}")
