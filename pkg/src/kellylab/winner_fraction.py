"""Winner-fraction portfolios and their entropy bound.

The winner fraction of an asset is the probability that it has the largest
return among the candidates. Staking each asset its winner fraction gives up
at most ``H(W')`` nats of growth relative to the log-optimal portfolio.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import RuinRisk
from .growth_opt import expected_log_growth, log_optimal_portfolio
from .info_measures import as_simplex, entropy, to_bits

TIE_RTOL = 1e-12
GAP_FLOOR = -1e-10
BOUND_TOL = 1e-9


def winner_probabilities(scenarios):
    """Probability-weighted share of each asset being a row's top performer.

    Ties for the maximum split that row's probability equally.
    """
    R = scenarios.returns
    top = R.max(axis=1, keepdims=True)
    winners = R >= top * (1.0 - TIE_RTOL)
    shares = winners / winners.sum(axis=1, keepdims=True)
    return as_simplex(scenarios.probs @ shares)


@dataclass(frozen=True)
class WinnerFractionResult:
    w_prime: np.ndarray
    w_star: np.ndarray
    entropy_bound: float
    optimal_growth: float
    heuristic_growth: float | None
    ruin_row: int | None = None

    @property
    def gap(self):
        if self.heuristic_growth is None:
            return None
        return self.optimal_growth - self.heuristic_growth

    @property
    def status(self):
        if self.heuristic_growth is None:
            return "satisfied-degenerate"
        ok = GAP_FLOOR <= self.gap <= self.entropy_bound + BOUND_TOL
        return "satisfied" if ok else "violated"

    def as_dict(self):
        gap = self.gap
        return {
            "w_prime": self.w_prime.tolist(),
            "w_star": self.w_star.tolist(),
            "g_star_nats": self.optimal_growth,
            "g_star_bits": to_bits(self.optimal_growth),
            "g_prime_nats": "-inf" if self.heuristic_growth is None else self.heuristic_growth,
            "g_prime_bits": "-inf" if self.heuristic_growth is None else to_bits(self.heuristic_growth),
            "gap_nats": "inf" if gap is None else gap,
            "gap_bits": "inf" if gap is None else to_bits(gap),
            "entropy_bound_nats": self.entropy_bound,
            "entropy_bound_bits": to_bits(self.entropy_bound),
            "status": self.status,
            "ruin_row": self.ruin_row,
        }


def entropy_bound_check(scenarios):
    """Compare the winner-fraction portfolio with the certified log-optimal one."""
    w_prime = winner_probabilities(scenarios)
    w_star, _ = log_optimal_portfolio(scenarios)
    g_star = expected_log_growth(scenarios, w_star)
    h = entropy(w_prime)
    try:
        g_prime = expected_log_growth(scenarios, w_prime)
    except RuinRisk as exc:
        warnings.warn(f"winner-fraction portfolio is ruined in scenario {exc.row}; bound is vacuous")
        return WinnerFractionResult(w_prime, w_star, h, g_star, None, exc.row)
    return WinnerFractionResult(w_prime, w_star, h, g_star, g_prime)


@dataclass(frozen=True)
class MaxSequence:
    path: tuple
    log_return: float

    @property
    def r_max(self):
        return math.exp(self.log_return)


def max_sequence_return(matrix):
    """Pick the best asset in every period; ties go to the lowest index."""
    path = np.argmax(matrix.values, axis=0)
    best = matrix.values[path, np.arange(matrix.n)]
    with np.errstate(divide="ignore"):
        log_ret = math.fsum(np.log(best))
    return MaxSequence(tuple(int(i) for i in path), log_ret)
