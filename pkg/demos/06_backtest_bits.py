#!/usr/bin/env python
# coding: utf-8

# # Measuring a strategy edge in bits
#
# Two constant-rebalanced strategies run over the same history differ in
# realized log growth. On a fair horse race, betting the true odds beats
# betting uniformly by `D(P||uniform)` per race.

# %%
from kellylab import HorseRace, compare_strategies, generate_synthetic, kl_divergence, to_bits

race = HorseRace([0.7, 0.3], [2.0, 2.0])
table = generate_synthetic(race, 100_000, seed=2024)
report = compare_strategies(table, [0.5, 0.5], [0.7, 0.3])
expected = kl_divergence([0.7, 0.3], [0.5, 0.5])
print(f"measured {report.delta_nats:.5f} nats ({report.delta_bits:.5f} bits)")
print(f"predicted {expected:.5f} nats ({to_bits(expected):.5f} bits)")

# %% [markdown]
# A strategy that leaves a winner unstaked is ruined, which shows up as an
# infinite difference rather than an error.

# %%
print(compare_strategies(table, [1.0, 0.0], [0.7, 0.3]).as_dict())
