"""Log-optimal portfolios over discrete scenarios and constant-rebalanced wealth paths."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import RuinRisk
from .info_measures import as_simplex, uniform

#: Certificate tolerance reported by the solver.
CERTIFICATE_TOL = 1e-8
#: Weights above this count as "in the support" when checking equality of multipliers.
SUPPORT_TOL = 1e-6
#: Weight-agreement tolerance used when comparing optimal portfolios.
WEIGHT_TOL = 1e-6
MAX_ITER = 100_000


@dataclass(frozen=True)
class ScenarioSet:
    """Discrete joint distribution of gross returns.

    ``returns[k, i]`` is asset ``i``'s gross return in scenario ``k``, which
    occurs with probability ``probs[k]``.
    """

    probs: np.ndarray
    returns: np.ndarray

    def __init__(self, probs, returns):
        p = as_simplex(probs)
        R = np.array(returns, dtype=float)
        if R.ndim == 1:
            R = R[:, None]
        if R.ndim != 2 or R.shape[0] != p.size:
            raise ValueError(f"returns shape {R.shape} does not match {p.size} scenarios")
        if not np.all(np.isfinite(R)) or np.any(R < 0):
            raise ValueError("scenario returns must be finite and >= 0")
        dead = np.flatnonzero(R.max(axis=1) <= 0)
        if dead.size:
            raise ValueError(f"scenario {dead[0]} has no positive return; every portfolio is ruined")
        R.flags.writeable = False
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "returns", R)

    @classmethod
    def horse_race(cls, probs, returns):
        """Scenario ``i`` occurs with ``probs[i]`` and pays ``returns[i]`` on asset ``i`` only."""
        r = np.asarray(returns, dtype=float).ravel()
        return cls(probs, np.diag(r))

    @property
    def m(self):
        return self.returns.shape[1]

    def __len__(self):
        return self.returns.shape[0]


@dataclass(frozen=True)
class ReturnMatrix:
    """Gross returns ``values[i, t]`` of asset ``i`` in period ``t`` (m x n)."""

    values: np.ndarray
    assets: tuple = ()
    periods: tuple = ()
    allow_zero: bool = False

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim == 1:
            v = v[None, :]
        if v.ndim != 2 or v.size == 0:
            raise ValueError(f"return matrix must be a non-empty m x n grid, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("return matrix has non-finite entries")
        if self.allow_zero:
            if np.any(v < 0):
                raise ValueError("gross returns must be >= 0")
        elif np.any(v <= 0):
            i, t = np.argwhere(v <= 0)[0]
            raise ValueError(f"gross return at asset {i}, period {t} is not positive")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        m, n = v.shape
        assets = tuple(self.assets) or tuple(f"a{i}" for i in range(m))
        periods = tuple(self.periods) or tuple(range(n))
        if len(assets) != m or len(periods) != n:
            raise ValueError("label counts do not match the matrix shape")
        object.__setattr__(self, "assets", assets)
        object.__setattr__(self, "periods", periods)

    @property
    def m(self):
        return self.values.shape[0]

    @property
    def n(self):
        return self.values.shape[1]

    def head(self, n):
        """First ``n`` periods."""
        return ReturnMatrix(self.values[:, :n], self.assets, self.periods[:n], self.allow_zero)


@dataclass(frozen=True)
class OptimalityCertificate:
    """First-order optimality conditions at a candidate portfolio.

    ``multipliers[i] = E[r_i / (W . r)]``; optimality means every multiplier
    is at most 1, with equality where the weight is positive.
    """

    multipliers: np.ndarray
    max_violation: float
    iterations: int = 0
    degenerate: bool = False

    def holds(self, tol=CERTIFICATE_TOL):
        return self.max_violation <= tol


@dataclass(frozen=True)
class WealthPath:
    period_returns: np.ndarray
    log_wealth: float
    growth_rate: float

    @property
    def cumulative(self):
        return math.exp(self.log_wealth)


def _check_dims(scenarios, w):
    w = as_simplex(w)
    if w.size != scenarios.m:
        raise ValueError(f"{w.size} weights for {scenarios.m} assets")
    return w


def _portfolio_returns(scenarios, w):
    live = scenarios.probs > 0
    dots = scenarios.returns @ w
    ruined = np.flatnonzero(live & (dots <= 0))
    if ruined.size:
        k = int(ruined[0])
        raise RuinRisk(f"portfolio return is 0 in scenario {k} (prob {scenarios.probs[k]})", row=k)
    return live, dots


def expected_log_growth(scenarios, w):
    """``sum_k prob_k ln(W . r_k)`` in nats; raises RuinRisk if some live row returns 0."""
    w = _check_dims(scenarios, w)
    live, dots = _portfolio_returns(scenarios, w)
    return math.fsum(scenarios.probs[live] * np.log(dots[live]))


def certificate(scenarios, w, support_tol=SUPPORT_TOL):
    w = _check_dims(scenarios, w)
    live, dots = _portfolio_returns(scenarios, w)
    p, R = scenarios.probs[live], scenarios.returns[live]
    mult = (p / dots[live]) @ R
    return OptimalityCertificate(mult, _violation(mult, w, support_tol))


def _violation(mult, w, support_tol):
    excess = float(np.max(mult - 1.0, initial=0.0))
    on_support = w > support_tol
    slack = float(np.max(np.abs(mult[on_support] - 1.0), initial=0.0))
    return max(excess, slack)


def is_degenerate(scenarios):
    """True when every live scenario row is a nonnegative multiple of one row."""
    R = scenarios.returns[scenarios.probs > 0]
    base = R[np.argmax(R.max(axis=1))]
    base = base / np.linalg.norm(base)
    norms = np.linalg.norm(R, axis=1)
    return bool(np.allclose(R / norms[:, None], base, rtol=0, atol=1e-12))


class _Objective:
    """Expected log growth restricted to live scenarios, with derivatives."""

    def __init__(self, scenarios):
        live = scenarios.probs > 0
        self.p = scenarios.probs[live]
        self.R = scenarios.returns[live]

    def value(self, w):
        dots = self.R @ w
        if np.any(dots <= 0):
            return -math.inf
        return math.fsum(self.p * np.log(dots))

    def multipliers(self, w):
        return (self.p / (self.R @ w)) @ self.R

    def hessian(self, w):
        scaled = self.R * (np.sqrt(self.p) / (self.R @ w))[:, None]
        return -scaled.T @ scaled


def _multiplicative_updates(obj, w, tol, max_iter):
    """Multiplicative fixed-point iteration ``w_i <- w_i E[r_i / (W . r)]``."""
    it = 0
    for it in range(1, max_iter + 1):
        mult = obj.multipliers(w)
        if _violation(mult, w, SUPPORT_TOL) <= tol:
            break
        w = w * mult
        w /= w.sum()
    return w, it


def _ascent_ok(obj, w, d, t, f0, slope):
    """Armijo, or (for steps too small for f to resolve) a nonnegative slope at the end point.

    Along a line a concave function that is still rising at ``w + t d`` has
    not decreased anywhere on the segment.
    """
    cand = np.maximum(w + t * d, 0.0)
    f1 = obj.value(cand)
    if f1 == -math.inf:
        return False
    noise = 4 * np.finfo(float).eps * (1.0 + abs(f0))
    return f1 >= f0 + 1e-4 * t * slope - noise or float(obj.multipliers(cand) @ d) >= 0.0


def _newton_polish(obj, w, tol, max_rounds=500):
    """Active-set Newton on the simplex face spanned by the current support.

    Once the current face is optimal, the asset with the largest multiplier
    above 1 is freed; assets driven to zero by a step are fixed at zero.
    Backtracking keeps every step an ascent step.
    """
    m = w.size
    support = w > 1e-12
    w = np.where(support, w, 0.0)
    w /= w.sum()
    face_tol = tol * 1e-3
    it = 0
    for it in range(1, max_rounds + 1):
        mult = obj.multipliers(w)
        face_viol = float(np.max(np.abs(mult[support] - 1.0)))
        if face_viol <= face_tol:
            outside = ~support & (mult > 1.0 + face_tol)
            if not outside.any():
                break
            support[np.argmax(np.where(outside, mult, -np.inf))] = True
        idx = np.flatnonzero(support)
        k = idx.size
        kkt = np.zeros((k + 1, k + 1))
        kkt[:k, :k] = obj.hessian(w)[np.ix_(idx, idx)]
        kkt[:k, k] = -1.0
        kkt[k, :k] = 1.0
        rhs = np.concatenate([-mult[idx], [0.0]])
        d = np.zeros(m)
        d[idx] = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:k]
        neg = d < 0
        blocked = neg & (w <= 0)
        if blocked.any():
            # zero weights the model wants negative stay out of this face
            support &= ~blocked
            continue
        t_max = float(np.min(-w[neg] / d[neg])) if neg.any() else math.inf
        t = min(1.0, t_max)
        f0 = obj.value(w)
        # slope is -d'Hd >= 0 in exact arithmetic; tiny steps can round below zero
        slope = max(float(mult @ d), 0.0)
        while not _ascent_ok(obj, w, d, t, f0, slope):
            t *= 0.5
            if t < 1e-16:
                return w, it
        w = np.maximum(w + t * d, 0.0)
        if t == t_max:
            hit = neg & (w <= 1e-15 * (1.0 + t * np.abs(d)))
            w[hit] = 0.0
            support &= ~hit
        w /= w.sum()
    return w, it


def log_optimal_portfolio(scenarios, initial=None, tol=CERTIFICATE_TOL, max_iter=MAX_ITER):
    """Maximize expected log growth over the simplex.

    Multiplicative updates get close to the optimum; an active-set Newton
    step then polishes to certificate precision. Returns ``(weights, certificate)``.

    When all scenario rows are proportional the objective is ``const + ln(W . r)``
    for a single return vector; the certificate is flagged ``degenerate`` and
    the returned weights spread evenly over the assets with the largest return.
    """
    obj = _Objective(scenarios)
    m = scenarios.m
    if is_degenerate(scenarios):
        base = obj.R[0]
        best = base >= base.max() * (1 - 1e-12)
        w = as_simplex(best / best.sum())
        cert = certificate(scenarios, w)
        return w, OptimalityCertificate(cert.multipliers, cert.max_violation, 0, degenerate=True)

    w = uniform(m).copy() if initial is None else np.array(as_simplex(initial))
    if initial is not None and np.any(obj.R @ w <= 0):
        w = 0.5 * w + 0.5 / m
    w, iters = _multiplicative_updates(obj, w, max(tol, 1e-6), min(max_iter, 1000))
    w, rounds = _newton_polish(obj, w, tol)
    violation = _violation(obj.multipliers(w), w, SUPPORT_TOL)
    if violation > tol:
        # Newton stalled; fall back to the plain fixed-point iteration
        w, more = _multiplicative_updates(obj, w if np.all(w > 0) else 0.5 * w + 0.5 / m, tol, max_iter)
        iters += more
    w = as_simplex(w)
    cert = certificate(scenarios, w)
    return w, OptimalityCertificate(cert.multipliers, cert.max_violation, iters + rounds)


def wealth_path(matrix, w):
    """Compound a constant-rebalanced portfolio through ``matrix``.

    Returns per-period portfolio returns, log of the cumulative wealth ratio,
    and the realized growth rate ``ln(R_n) / n``.
    """
    w = as_simplex(w)
    if w.size != matrix.m:
        raise ValueError(f"{w.size} weights for {matrix.m} assets")
    per_period = w @ matrix.values
    bad = np.flatnonzero(per_period <= 0)
    if bad.size:
        t = int(bad[0])
        raise RuinRisk(f"portfolio return is 0 in period {matrix.periods[t]}", row=t)
    log_wealth = math.fsum(np.log(per_period))
    return WealthPath(per_period, log_wealth, log_wealth / matrix.n)
