#!/usr/bin/env python
# coding: utf-8

# # Rebalanced wealth as a sum over sequences
#
# Rebalancing to `W` for `n` periods multiplies out into a sum over all `m^n`
# asset sequences, each weighted by the product of its weights. Grouping the
# sequences by how often each asset appears (their type) shows almost all the
# weight sitting on the types close to `W`.

# %%
import numpy as np

from kellylab import ReturnMatrix, expand_identity_check, mass_concentration_check, summarize_type_classes

matrix = ReturnMatrix([[1.1, 1.2], [0.9, 0.8]])
check = expand_identity_check(matrix, [0.5, 0.5])
print(f"product {check.lhs:.12f} = sum of {check.terms} terms {check.rhs:.12f}")
for c in summarize_type_classes(matrix, [0.5, 0.5]):
    print(f"  counts {c.counts}: {c.cardinality} sequences, mass {c.total_mass:.3f}")

# %% [markdown]
# Class masses fall off like `exp(-n D(P||W))` up to a polynomial factor.

# %%
n, w = 16, [0.3, 0.7]
for row in mass_concentration_check(w, n)[::3]:
    print(f"  counts {row.counts}: ln mass {row.exact_log_mass:8.3f}, -nD {row.minus_n_kl:8.3f}")
