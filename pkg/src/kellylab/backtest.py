"""Gross-return tables, synthetic generators, and A/B strategy comparison in bits.

For two constant-rebalanced strategies run over the same data, the money and
entropy terms of the growth decomposition are shared, so the growth difference
``g(W_B) - g(W_A)`` equals ``KL(W* || W_A) - KL(W* || W_B)``: how much closer
B is to the (unknown) optimal portfolio, in bits.
"""

import csv
import io
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import DuplicatePeriod, InvalidSpec, NonPositiveReturn, ParseError, RuinRisk
from .growth_opt import ReturnMatrix, ScenarioSet, wealth_path
from .info_measures import to_bits
from .kelly_core import HorseRace

INTERPRETATION = (
    "delta = g(W_B) - g(W_A) = KL(W*||W_A) - KL(W*||W_B): the reduction in divergence "
    "from the unknown growth-optimal portfolio W*, measured on this backtest's data"
)


@dataclass(frozen=True)
class ReturnsTable:
    dates: tuple
    assets: tuple
    matrix: ReturnMatrix

    @classmethod
    def from_rows(cls, dates, assets, rows, allow_zero=False):
        """Build from period-major rows (one list of asset returns per date)."""
        values = np.asarray(rows, dtype=float).reshape(len(dates), len(assets)).T
        matrix = ReturnMatrix(values, tuple(assets), tuple(dates), allow_zero=allow_zero)
        return cls(tuple(dates), tuple(assets), matrix)

    @property
    def n_periods(self):
        return len(self.dates)

    @property
    def allow_zero(self):
        return self.matrix.allow_zero


def _period_key(label):
    try:
        return (0, float(label), "")
    except ValueError:
        return (1, 0.0, label)


def load_returns(source, allow_zero=False):
    """Read a ``date,<asset>,...`` CSV of gross returns.

    ``source`` is a path or an open text stream. Zero returns are accepted
    only with ``allow_zero`` (horse-race files, where losers pay nothing).
    Rows are numbered from 1, counting data rows only.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="", encoding="utf-8") as fh:
            return load_returns(fh, allow_zero)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty returns file") from None
    except csv.Error as exc:
        raise ParseError(str(exc)) from exc
    header = [h.strip() for h in header]
    if len(header) < 2 or header[0].lower() != "date":
        raise ParseError(f"header must be 'date,<asset>,...', got {','.join(header)!r}")
    assets = header[1:]
    if len(set(assets)) != len(assets):
        raise ParseError(f"duplicate asset labels in header: {assets}")
    dates, rows, seen = [], [], set()
    try:
        for row_no, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise ParseError(f"row {row_no} has {len(row)} fields, expected {len(header)}")
            label = row[0].strip()
            if label in seen:
                raise DuplicatePeriod(row_no, label)
            if dates and _period_key(label) <= _period_key(dates[-1]):
                raise ParseError(f"row {row_no}: period {label!r} does not follow {dates[-1]!r}")
            values = []
            for col, cell in zip(assets, row[1:]):
                try:
                    x = float(cell)
                except ValueError:
                    raise ParseError(f"row {row_no}, col {col}: not a number: {cell!r}") from None
                if not math.isfinite(x):
                    raise ParseError(f"row {row_no}, col {col}: non-finite value {cell!r}")
                if x < 0 or (x == 0 and not allow_zero):
                    raise NonPositiveReturn(row_no, col, x)
                values.append(x)
            seen.add(label)
            dates.append(label)
            rows.append(values)
    except csv.Error as exc:
        raise ParseError(str(exc)) from exc
    if not rows:
        raise ParseError("returns file has no data rows")
    return ReturnsTable.from_rows(dates, assets, rows, allow_zero=allow_zero)


def dump_returns(table, stream=None):
    """Write ``table`` as CSV; returns the text when no stream is given."""
    out = stream if stream is not None else io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["date", *table.assets])
    for t, label in enumerate(table.dates):
        writer.writerow([label, *(repr(float(x)) for x in table.matrix.values[:, t])])
    if stream is None:
        return out.getvalue()


def _fmt(x):
    if x is None or math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass(frozen=True)
class ComparisonReport:
    """Realized growth of two strategies on one table; ``None`` growth means ruin."""

    g_a_nats: float | None
    g_b_nats: float | None
    n_periods: int
    interpretation: str = INTERPRETATION

    @property
    def ruin_a(self):
        return self.g_a_nats is None

    @property
    def ruin_b(self):
        return self.g_b_nats is None

    @property
    def delta_nats(self):
        """``g_B - g_A``; +/-inf when exactly one side is ruined, nan when both are."""
        a = -math.inf if self.ruin_a else self.g_a_nats
        b = -math.inf if self.ruin_b else self.g_b_nats
        if self.ruin_a and self.ruin_b:
            return math.nan
        return b - a

    @property
    def delta_bits(self):
        return to_bits(self.delta_nats)

    def as_dict(self):
        def bits(g):
            return None if g is None else to_bits(g)

        return {
            "g_a_nats": _fmt(-math.inf) if self.ruin_a else self.g_a_nats,
            "g_b_nats": _fmt(-math.inf) if self.ruin_b else self.g_b_nats,
            "g_a_bits": _fmt(-math.inf) if self.ruin_a else bits(self.g_a_nats),
            "g_b_bits": _fmt(-math.inf) if self.ruin_b else bits(self.g_b_nats),
            "delta_nats": _fmt(self.delta_nats),
            "delta_bits": _fmt(self.delta_bits),
            "n_periods": self.n_periods,
            "ruin_a": self.ruin_a,
            "ruin_b": self.ruin_b,
            "interpretation": self.interpretation,
        }


def realized_growth(table, w):
    """``ln(R_n) / n`` for the constant-rebalanced portfolio ``w``, or None on ruin."""
    try:
        return wealth_path(table.matrix, w).growth_rate
    except RuinRisk:
        return None


def compare_strategies(table, w_a, w_b):
    return ComparisonReport(realized_growth(table, w_a), realized_growth(table, w_b), table.n_periods)


def generate_synthetic(spec, n, seed):
    """Draw ``n`` IID periods from a HorseRace or ScenarioSet.

    Horse-race draws pay ``r_i`` on the winning horse and 0 elsewhere, so the
    table is built with ``allow_zero``. Period labels are 1..n.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidSpec(f"period count must be a positive integer, got {n!r}")
    rng = np.random.default_rng(seed)
    dates = list(range(1, n + 1))
    if isinstance(spec, HorseRace):
        winners = rng.choice(spec.m, size=n, p=spec.probs)
        rows = np.zeros((n, spec.m))
        rows[np.arange(n), winners] = spec.returns[winners]
        assets = [f"h{i}" for i in range(spec.m)]
        return ReturnsTable.from_rows(dates, assets, rows, allow_zero=True)
    if isinstance(spec, ScenarioSet):
        picks = rng.choice(len(spec), size=n, p=spec.probs)
        rows = spec.returns[picks]
        assets = [f"a{i}" for i in range(spec.m)]
        return ReturnsTable.from_rows(dates, assets, rows, allow_zero=bool(np.any(rows == 0)))
    raise InvalidSpec(f"expected a HorseRace or ScenarioSet, got {type(spec).__name__}")


def load_scenarios(source):
    """Read a ``prob,<asset>,...`` CSV, one scenario per row, into a ScenarioSet."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="", encoding="utf-8") as fh:
            return load_scenarios(fh)
    try:
        rows = [r for r in csv.reader(source) if r and any(c.strip() for c in r)]
    except csv.Error as exc:
        raise ParseError(str(exc)) from exc
    if len(rows) < 2 or rows[0][0].strip().lower() != "prob":
        raise ParseError("scenario file needs a 'prob,<asset>,...' header and at least one row")
    width = len(rows[0])
    data = []
    for row_no, row in enumerate(rows[1:], start=1):
        if len(row) != width:
            raise ParseError(f"row {row_no} has {len(row)} fields, expected {width}")
        try:
            data.append([float(c) for c in row])
        except ValueError:
            raise ParseError(f"row {row_no}: non-numeric field in {row}") from None
    data = np.asarray(data)
    try:
        return ScenarioSet(data[:, 0], data[:, 1:])
    except ValueError as exc:
        raise ParseError(f"invalid scenario set: {exc}") from exc
