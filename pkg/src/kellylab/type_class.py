"""Brute-force expansion of constant-rebalanced wealth into sequences and type classes.

Compounding a fixed portfolio ``W`` over ``n`` periods multiplies ``n`` dot
products. Expanding that product gives one term per asset-index sequence
``s`` of length ``n``: weight ``prod_t w[s_t]`` times return ``prod_t r[s_t, t]``.
Sequences with the same symbol counts form a type class and share a weight.

Everything here is exact enumeration, intended as a ground-truth oracle at
desk scale. Products are accumulated as logs and summed with a max-shifted
compensated log-sum-exp, so results do not depend on block order.
"""

import itertools
import math
import os
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import BudgetExceeded, NotAType, SupportViolation
from .growth_opt import wealth_path
from .info_measures import as_simplex, entropy, kl_divergence

DEFAULT_BUDGET = 10**7
EXACT_FACTORIAL_MAX_N = 64
TYPE_TOL = 1e-9
_BLOCK_ROWS = 1 << 16


def default_budget():
    """Sequence budget, overridable with the ``KELLYLAB_BUDGET`` environment variable."""
    raw = os.environ.get("KELLYLAB_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def _require_budget(count, budget):
    budget = default_budget() if budget is None else budget
    if count > budget:
        raise BudgetExceeded(count, budget)


def _fsum_logsumexp(values):
    values = [v for v in values if v != -math.inf]
    if not values:
        return -math.inf
    top = max(values)
    return top + math.log(math.fsum(math.exp(v - top) for v in values))


def log_multinomial(counts):
    """``ln(n! / prod n_i!)``; exact integer arithmetic up to n = 64, log-gamma beyond."""
    n = sum(counts)
    if n <= EXACT_FACTORIAL_MAX_N:
        return math.log(multinomial(counts))
    return math.lgamma(n + 1) - math.fsum(math.lgamma(c + 1) for c in counts)


def multinomial(counts):
    out = math.factorial(sum(counts))
    for c in counts:
        out //= math.factorial(c)
    return out


def compositions(n, m):
    """All count vectors of ``m`` nonnegative integers summing to ``n``."""
    if m == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, m - 1):
            yield (first,) + rest


def enumerate_sequences(m, n, budget=None):
    """Yield all ``m**n`` index sequences in lexicographic order."""
    _require_budget(m**n, budget)
    yield from itertools.product(range(m), repeat=n)


def _sequence_blocks(m, n, budget=None):
    """Lexicographic sequences as ``(k, n)`` integer arrays, in blocks."""
    total = m**n
    _require_budget(total, budget)
    place = m ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, _BLOCK_ROWS):
        j = np.arange(start, min(start + _BLOCK_ROWS, total), dtype=np.int64)
        yield (j[:, None] // place) % m


def _log(x):
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(x, dtype=float))


def sequence_log_weight(s, w):
    w = as_simplex(w)
    return float(np.sum(_log(w[np.asarray(s, dtype=int)])))


def sequence_weight(s, w):
    """Product of portfolio weights along ``s``; 0 if any selected weight is 0."""
    return math.exp(sequence_log_weight(s, w))


def sequence_log_return(s, matrix):
    s = np.asarray(s, dtype=int)
    if s.size != matrix.n:
        raise ValueError(f"sequence length {s.size} does not match {matrix.n} periods")
    return float(np.sum(_log(matrix.values[s, np.arange(matrix.n)])))


def sequence_return(s, matrix):
    """Product of the returns picked out by following ``s`` through the periods."""
    return math.exp(sequence_log_return(s, matrix))


def _check(matrix, w):
    w = as_simplex(w)
    if w.size != matrix.m:
        raise ValueError(f"{w.size} weights for {matrix.m} assets")
    return w


@dataclass(frozen=True)
class IdentityCheck:
    lhs: float
    rhs: float
    rel_err: float
    terms: int


def expand_identity_check(matrix, w, budget=None):
    """Compare compounded wealth with the explicit sum over all ``m**n`` sequences."""
    w = _check(matrix, w)
    m, n = matrix.m, matrix.n
    log_w, log_r = _log(w), _log(matrix.values)
    cols = np.arange(n)
    partials = []
    for block in _sequence_blocks(m, n, budget):
        terms = log_w[block].sum(axis=1) + log_r[block, cols].sum(axis=1)
        partials.append(float(logsumexp(terms)))
    log_rhs = _fsum_logsumexp(partials)
    log_lhs = wealth_path(matrix, w).log_wealth
    rel_err = abs(math.expm1(log_rhs - log_lhs))
    return IdentityCheck(math.exp(log_lhs), math.exp(log_rhs), rel_err, m**n)


@dataclass(frozen=True)
class TypeClassSummary:
    """One type class ``T_n(P)`` under portfolio ``W`` and a fixed return matrix."""

    counts: tuple
    cardinality: int
    per_seq_log_weight: float
    log_class_return_sum: float

    @property
    def n(self):
        return sum(self.counts)

    @property
    def freq(self):
        return as_simplex(np.asarray(self.counts, dtype=float) / self.n)

    @property
    def log_total_mass(self):
        return log_multinomial(self.counts) + self.per_seq_log_weight

    @property
    def total_mass(self):
        return math.exp(self.log_total_mass)

    @property
    def class_return_sum(self):
        return math.exp(self.log_class_return_sum)

    @property
    def per_period_geo_rate(self):
        """n-th root of the class return sum."""
        return math.exp(self.log_class_return_sum / self.n)

    @property
    def log_contribution(self):
        """ln of this class's share of the total wealth ratio."""
        return self.per_seq_log_weight + self.log_class_return_sum


def _per_seq_log_weight(counts, log_w):
    return math.fsum(c * lw for c, lw in zip(counts, log_w) if c)


def summarize_type_classes(matrix, w, budget=None):
    """Group every sequence by type class; one summary per composition of ``n``."""
    w = _check(matrix, w)
    m, n = matrix.m, matrix.n
    log_w, log_r = _log(w), _log(matrix.values)
    cols = np.arange(n)
    radix = (n + 1) ** np.arange(m, dtype=np.int64)
    partials = {}
    for block in _sequence_blocks(m, n, budget):
        counts = np.stack([(block == i).sum(axis=1) for i in range(m)], axis=1)
        keys = counts @ radix
        terms = log_r[block, cols].sum(axis=1)
        uniq, inv = np.unique(keys, return_inverse=True)
        top = np.full(uniq.size, -np.inf)
        np.maximum.at(top, inv, terms)
        safe_top = np.where(np.isfinite(top), top, 0.0)
        with np.errstate(divide="ignore"):
            sums = safe_top + np.log(np.bincount(inv, np.exp(terms - safe_top[inv]), uniq.size))
        for key, val in zip(uniq.tolist(), sums.tolist()):
            partials.setdefault(key, []).append(val)
    out = []
    for counts in compositions(n, m):
        key = int(np.dot(counts, radix))
        out.append(
            TypeClassSummary(
                counts=counts,
                cardinality=multinomial(counts),
                per_seq_log_weight=_per_seq_log_weight(counts, log_w),
                log_class_return_sum=_fsum_logsumexp(partials.get(key, [])),
            )
        )
    return out


@dataclass(frozen=True)
class ConcentrationRow:
    counts: tuple
    exact_log_mass: float
    minus_n_kl: float
    gap: float

    def sandwich_holds(self, m, tol=1e-12):
        """Method-of-types bounds on the class mass."""
        if self.exact_log_mass == -math.inf:
            return self.minus_n_kl == -math.inf
        n = sum(self.counts)
        upper = self.exact_log_mass <= self.minus_n_kl + tol
        lower = self.exact_log_mass >= self.minus_n_kl - m * math.log(n + 1) - tol
        return upper and lower


def mass_concentration_check(w, n, budget=None):
    """Exact log mass of each type class against ``-n KL(P || W)``.

    ``gap`` is the Stirling overstatement ``n H(P) - ln |T_n(P)|``, which equals
    ``-n KL - exact_log_mass`` whenever both are finite. Classes that need an
    asset with zero weight carry no mass and are reported with ``-inf`` entries.
    """
    w = as_simplex(w)
    m = w.size
    _require_budget(math.comb(n + m - 1, m - 1), budget)
    log_w = _log(w)
    rows = []
    for counts in compositions(n, m):
        p = np.asarray(counts, dtype=float) / n
        log_card = log_multinomial(counts)
        gap = n * entropy(p) - log_card
        try:
            minus_n_kl = -n * kl_divergence(p, w)
            exact = log_card + _per_seq_log_weight(counts, log_w)
        except SupportViolation:
            minus_n_kl = exact = -math.inf
        rows.append(ConcentrationRow(counts, exact, minus_n_kl, gap))
    return rows


@dataclass(frozen=True)
class DominantClassResult:
    approx_log: float
    exact_log: float
    n: int

    @property
    def per_period_gap(self):
        return abs(self.approx_log - self.exact_log) / self.n


def type_counts(w, n):
    """Counts ``n * w_i`` as integers; raises NotAType if ``W`` is not a type at length ``n``."""
    w = as_simplex(w)
    raw = n * w
    counts = np.rint(raw)
    if np.any(np.abs(raw - counts) > TYPE_TOL * max(n, 1)):
        raise NotAType(f"n * W = {raw.tolist()} is not integral at n = {n}")
    return tuple(int(c) for c in counts)


def dominant_class_growth(matrix, w, budget=None):
    """Approximate ``ln R_n`` using only the type class whose frequencies equal ``W``."""
    w = _check(matrix, w)
    m, n = matrix.m, matrix.n
    target = np.asarray(type_counts(w, n))
    log_r = _log(matrix.values)
    cols = np.arange(n)
    partials = []
    for block in _sequence_blocks(m, n, budget):
        counts = np.stack([(block == i).sum(axis=1) for i in range(m)], axis=1)
        members = block[np.all(counts == target, axis=1)]
        if members.size:
            partials.append(float(logsumexp(log_r[members, cols].sum(axis=1))))
    approx = _per_seq_log_weight(tuple(target), _log(w)) + _fsum_logsumexp(partials)
    exact = wealth_path(matrix, w).log_wealth
    return DominantClassResult(approx, exact, n)
