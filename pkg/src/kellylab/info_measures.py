"""Entropy, cross-entropy and KL divergence on the probability simplex.

All quantities are in nats. ``to_bits`` converts at reporting boundaries.
Terms with zero weight are dropped before summation (0 * log 0 = 0).
"""

import math

import numpy as np

from .errors import InvalidSimplex, SupportViolation

LN2 = math.log(2.0)

#: |sum - 1| at or below this is treated as float drift and renormalized.
RENORMALIZE_TOL = 1e-9


def as_simplex(weights):
    """Validate ``weights`` as a point on the simplex and return a read-only float array.

    Negative entries are rejected. A sum within ``RENORMALIZE_TOL`` of 1 is
    renormalized; anything further off raises :class:`InvalidSimplex`.
    """
    w = np.array(weights, dtype=float).ravel()
    if w.size == 0:
        raise InvalidSimplex("simplex vector needs at least one entry")
    if not np.all(np.isfinite(w)):
        raise InvalidSimplex(f"non-finite entry in {w.tolist()}")
    if np.any(w < 0):
        raise InvalidSimplex(f"negative entry in {w.tolist()}")
    total = math.fsum(w)
    if abs(total - 1.0) > RENORMALIZE_TOL:
        raise InvalidSimplex(f"entries sum to {total!r}, not 1")
    if total != 1.0:
        w = w / total
    w.flags.writeable = False
    return w


def uniform(m):
    return as_simplex(np.full(m, 1.0 / m))


def to_bits(nats):
    return nats / LN2


def _pair(p, q):
    p = as_simplex(p)
    q = as_simplex(q)
    if p.shape != q.shape:
        raise InvalidSimplex(f"dimension mismatch: {p.size} vs {q.size}")
    bad = np.flatnonzero((p > 0) & (q == 0))
    if bad.size:
        raise SupportViolation(int(bad[0]))
    return p, q


def entropy(p):
    p = as_simplex(p)
    nz = p[p > 0]
    h = -math.fsum(nz * np.log(nz))
    return h if h > 0 else 0.0


def cross_entropy(p, q):
    """sum_i p_i ln(1/q_i); raises SupportViolation if q misses mass of p."""
    p, q = _pair(p, q)
    mask = p > 0
    return -math.fsum(p[mask] * np.log(q[mask]))


def kl_divergence(p, q):
    """KL(p || q) in nats.

    Raises :class:`SupportViolation` instead of returning ``inf`` when some
    ``p_i > 0`` has ``q_i == 0``.
    """
    p, q = _pair(p, q)
    mask = p > 0
    pm, qm = p[mask], q[mask]
    d = math.fsum(pm * np.log(pm)) - math.fsum(pm * np.log(qm))
    # Gibbs: negative values are round-off
    return d if d > 0 else 0.0


def bernoulli(p):
    return as_simplex([p, 1.0 - p])
