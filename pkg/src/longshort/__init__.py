"""Balanced double-linear long-short feedback trading.

A small numpy library for the simultaneous long-short trading scheme with two
linear feedback laws on separately tracked long and short sub-accounts:
closed-form gain-loss statistics, robust positive-expectation checks, optimal
gain selection under a standard-deviation budget, Monte-Carlo estimation from
empirical return distributions, and single/multi-asset backtesting.
"""

from .errors import (
    DomainError,
    EmptyReturnsError,
    EnumerationTooLargeError,
    InadmissibleGainError,
    InternalConsistencyError,
    InvalidBoundsError,
    InvalidParameterError,
    InvalidPmfError,
    LengthMismatchError,
    LongShortError,
    MissingColumnError,
    NonMonotoneEstimateError,
    NonPositivePriceError,
    PortfolioAssetError,
    PriceParseError,
    ReturnBelowNegOneError,
    ReturnOutOfBoundsError,
    SimulationOverflowError,
    StageTooSmallError,
    TargetNonpositiveError,
    TargetTooLargeError,
    TooShortError,
    ZeroDriftError,
    ZeroVolatilityError,
)
from .returns import (
    EmpiricalPMF,
    PriceSeries,
    ReturnBounds,
    ReturnModel,
    load_prices_csv,
    pmf_from_returns,
    returns_from_prices,
    sample_path,
)
from .dynamics import (
    AccountTrajectory,
    CashFinancingAudit,
    ControllerConfig,
    audit_cash_financing,
    simulate,
    terminal_gains,
)
from .analytics import (
    GainLossStats,
    RpeCheck,
    RpeCounterexample,
    check_robust_growth,
    check_rpe,
    expected_gain,
    find_rpe_counterexample,
    gain_stats,
    std_gain,
    variance_gain,
)
from .montecarlo import (
    DEFAULT_N_PATHS,
    McEstimate,
    McGainEstimator,
    estimate_exact_small,
    estimate_gain_stats,
)
from .optimizer import (
    MeanStdCurve,
    OptimalGainResult,
    build_curve,
    build_curve_empirical,
    solve_optimal_gain,
    solve_optimal_gain_empirical,
)
from .portfolio import (
    PORTFOLIO_DEFAULT_N_PATHS,
    PortfolioConfig,
    PortfolioTrajectory,
    derive_asset_seed,
    optimize_portfolio,
    run_portfolio,
)

__version__ = "0.1.0"

__all__ = [
    "AccountTrajectory",
    "CashFinancingAudit",
    "ControllerConfig",
    "DEFAULT_N_PATHS",
    "DomainError",
    "EmpiricalPMF",
    "EmptyReturnsError",
    "EnumerationTooLargeError",
    "GainLossStats",
    "InadmissibleGainError",
    "InternalConsistencyError",
    "InvalidBoundsError",
    "InvalidParameterError",
    "InvalidPmfError",
    "LengthMismatchError",
    "LongShortError",
    "McEstimate",
    "McGainEstimator",
    "MeanStdCurve",
    "MissingColumnError",
    "NonMonotoneEstimateError",
    "NonPositivePriceError",
    "OptimalGainResult",
    "PORTFOLIO_DEFAULT_N_PATHS",
    "PortfolioAssetError",
    "PortfolioConfig",
    "PortfolioTrajectory",
    "PriceParseError",
    "PriceSeries",
    "ReturnBelowNegOneError",
    "ReturnBounds",
    "ReturnModel",
    "ReturnOutOfBoundsError",
    "RpeCheck",
    "RpeCounterexample",
    "SimulationOverflowError",
    "StageTooSmallError",
    "TargetNonpositiveError",
    "TargetTooLargeError",
    "TooShortError",
    "ZeroDriftError",
    "ZeroVolatilityError",
    "audit_cash_financing",
    "build_curve",
    "build_curve_empirical",
    "check_robust_growth",
    "check_rpe",
    "derive_asset_seed",
    "estimate_exact_small",
    "estimate_gain_stats",
    "expected_gain",
    "find_rpe_counterexample",
    "gain_stats",
    "load_prices_csv",
    "optimize_portfolio",
    "pmf_from_returns",
    "returns_from_prices",
    "run_portfolio",
    "sample_path",
    "simulate",
    "solve_optimal_gain",
    "solve_optimal_gain_empirical",
    "std_gain",
    "terminal_gains",
    "variance_gain",
]
