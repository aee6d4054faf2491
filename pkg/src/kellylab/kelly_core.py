"""Classic binary Kelly bet and the horse-race market.

A binary game pays gross multiplier ``r`` on the wagered fraction with
probability ``p`` and loses the wager otherwise. In a horse race exactly one
of ``m`` outcomes wins each period and capital is fully allocated across them.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotFairOdds, RuinRisk, SupportViolation
from .info_measures import RENORMALIZE_TOL, as_simplex, bernoulli, entropy, kl_divergence

#: Absolute tolerance (scaled by term magnitude) for the decomposition self-check.
DECOMPOSITION_TOL = 1e-12


@dataclass(frozen=True)
class BinaryGame:
    p: float
    r: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"win probability must lie in [0, 1], got {self.p}")
        if not self.r > 1.0 or not math.isfinite(self.r):
            raise ValueError(f"gross return multiplier must be > 1, got {self.r}")

    @property
    def q(self):
        """Market probability implied by fair odds."""
        return 1.0 / self.r


@dataclass(frozen=True)
class HorseRace:
    probs: np.ndarray
    returns: np.ndarray

    def __init__(self, probs, returns):
        p = as_simplex(probs)
        r = np.array(returns, dtype=float).ravel()
        if r.shape != p.shape:
            raise ValueError(f"{p.size} probabilities but {r.size} returns")
        if not np.all(r > 0) or not np.all(np.isfinite(r)):
            raise ValueError(f"horse returns must be finite and > 0, got {r.tolist()}")
        r.flags.writeable = False
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "returns", r)

    @property
    def m(self):
        return self.probs.size

    def implied_probs(self):
        return 1.0 / self.returns

    def is_fair(self, tol=RENORMALIZE_TOL):
        return abs(math.fsum(self.implied_probs()) - 1.0) <= tol


@dataclass(frozen=True)
class GrowthDecomposition:
    """Expected log growth split as money - entropy - divergence (all nats)."""

    money_term: float
    entropy_term: float
    divergence_term: float
    total: float

    @property
    def residual(self):
        return self.total - (self.money_term - self.entropy_term - self.divergence_term)


def has_edge(game):
    return game.p * game.r > 1.0


def kelly_fraction(game):
    """Growth-optimal wager fraction ``(p r - 1) / (r - 1)``.

    Returns 0.0 when there is no edge (``p r <= 1``); no shorting or leverage.
    """
    if not has_edge(game):
        return 0.0
    f = (game.p * game.r - 1.0) / (game.r - 1.0)
    return min(max(f, 0.0), 1.0)


def kelly_growth(game, f):
    """Expected log growth per step of wagering fraction ``f``."""
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fraction must lie in [0, 1], got {f}")
    p, r = game.p, game.r
    if f == 1.0 and p < 1.0:
        raise RuinRisk("full wager loses everything with probability 1 - p > 0")
    g = 0.0
    if p > 0:
        g += p * math.log1p(f * (r - 1.0))
    if p < 1:
        g += (1.0 - p) * math.log1p(-f)
    return g


def kelly_growth_at_optimum_fair_odds(game):
    """KL(Bernoulli(p) || Bernoulli(1/r)).

    Equals ``kelly_growth(game, kelly_fraction(game))`` whenever the game has an
    edge. Without an edge the unconstrained optimum would be a short position,
    which this model excludes, so the two differ.
    """
    return kl_divergence(bernoulli(game.p), bernoulli(game.q))


def horse_race_growth(race, w):
    """Decompose ``sum p_i ln(r_i w_i)`` into money, entropy and divergence terms.

    Raises :class:`RuinRisk` if some horse with positive probability gets no stake.
    """
    w = as_simplex(w)
    if w.shape != race.probs.shape:
        raise ValueError(f"{w.size} weights for {race.m} horses")
    p, r = race.probs, race.returns
    try:
        divergence = kl_divergence(p, w)
    except SupportViolation as exc:
        raise RuinRisk(
            f"horse {exc.index} can win (p={p[exc.index]}) but has zero stake", row=exc.index
        ) from exc
    mask = p > 0
    money = math.fsum(p[mask] * np.log(r[mask]))
    ent = entropy(p)
    total = math.fsum(p[mask] * np.log(r[mask] * w[mask]))
    scale = 1.0 + abs(money) + ent + divergence
    if abs(total - (money - ent - divergence)) > DECOMPOSITION_TOL * scale:
        raise ArithmeticError("growth decomposition failed its self-check")
    return GrowthDecomposition(money, ent, divergence, total)


def horse_race_optimal(race):
    """Proportional betting: the optimum stakes each horse its win probability."""
    return race.probs


def fair_odds_growth(race, w):
    """Return ``(KL(P||Q), KL(P||W))`` for a fairly priced race, with ``q_i = 1/r_i``.

    Growth equals the first minus the second.
    """
    q = race.implied_probs()
    total = math.fsum(q)
    if abs(total - 1.0) > RENORMALIZE_TOL:
        raise NotFairOdds(f"implied probabilities sum to {total!r}, not 1")
    w = as_simplex(w)
    try:
        div_w = kl_divergence(race.probs, w)
    except SupportViolation as exc:
        raise RuinRisk(f"horse {exc.index} can win but has zero stake", row=exc.index) from exc
    # unnormalized q keeps the growth identity exact under sub-tolerance drift
    p = race.probs
    mask = p > 0
    div_q = math.fsum(p[mask] * np.log(p[mask])) - math.fsum(p[mask] * np.log(q[mask]))
    return div_q, div_w
