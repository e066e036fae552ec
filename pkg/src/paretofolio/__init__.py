"""Constrained bi-objective portfolio optimisation with NSGA-family
algorithms, GP surrogate screening, and backtesting."""

from .backtest import BacktestReport, BacktestSpec, compare_backtests, run_backtest
from .evolve import (
    Genome,
    OptimizerRun,
    ReferenceDirections,
    ReferencePoints,
    RunConfig,
    das_dennis,
    fast_non_dominated_sort,
    run,
)
from .indicators import HVConfig, TraceSummary, aggregate_traces, hypervolume_2d, normalize_front
from .market_data import (
    MarketModel,
    NoiseSpec,
    PriceFrame,
    ReturnsFrame,
    add_forecast_noise,
    build_market_model,
    capm_expected_returns,
    clean,
    ledoit_wolf_covariance,
    load_prices,
    select_top_k,
    simple_returns,
)
from .portfolio import (
    CostSpec,
    ObjectivePoint,
    PortfolioProblem,
    evaluate,
    repair_to_simplex,
    sharpe_ratio,
    tangency_weights_for_gamma,
    utility,
)
from .surrogate import GPRegressor, SurrogateConfig, latin_hypercube, surrogate_assisted_run

__version__ = "0.1.0"
