"""Kelly growth rates, divergence decompositions, and type-class oracles."""

from .backtest import (
    ComparisonReport,
    ReturnsTable,
    compare_strategies,
    dump_returns,
    generate_synthetic,
    load_returns,
    load_scenarios,
)
from .errors import (
    BudgetExceeded,
    DuplicatePeriod,
    InvalidSimplex,
    InvalidSpec,
    KellyLabError,
    NonPositiveReturn,
    NotAType,
    NotFairOdds,
    ParseError,
    RuinRisk,
    SupportViolation,
)
from .growth_opt import (
    OptimalityCertificate,
    ReturnMatrix,
    ScenarioSet,
    WealthPath,
    certificate,
    expected_log_growth,
    log_optimal_portfolio,
    wealth_path,
)
from .info_measures import as_simplex, bernoulli, cross_entropy, entropy, kl_divergence, to_bits, uniform
from .kelly_core import (
    BinaryGame,
    GrowthDecomposition,
    HorseRace,
    fair_odds_growth,
    has_edge,
    horse_race_growth,
    horse_race_optimal,
    kelly_fraction,
    kelly_growth,
    kelly_growth_at_optimum_fair_odds,
)
from .type_class import (
    TypeClassSummary,
    dominant_class_growth,
    enumerate_sequences,
    expand_identity_check,
    mass_concentration_check,
    sequence_return,
    sequence_weight,
    summarize_type_classes,
)
from .winner_fraction import (
    WinnerFractionResult,
    entropy_bound_check,
    max_sequence_return,
    winner_probabilities,
)

__version__ = "0.1.0"
