"""Evaluation of multi-horizon point forecasts against realizations."""

from .benchmarks import ARFit, ARForecaster, RandomWalkForecaster, ar_panel, fit_ar, random_walk_panel, select_lag_aic
from .exceptions import (
    ComputationError,
    ConfigError,
    DegenerateDifferentialError,
    ForecastEvalError,
    IngestionError,
)
from .inference import (
    DMOutcome,
    MZOutcome,
    bandwidth_rule,
    bartlett_lrv,
    compare_forecasts,
    fixed_b_cv,
    fluctuation_dm,
    mz_regression,
    test_dm,
)
from .io import align_survey, read_forecast_panel, read_realizations, read_survey
from .losses import LossSpec, SummaryStats, loss, summarize
from .timeseries import (
    ErrorPanel,
    ForecastPanel,
    MonthlyPeriod,
    QuarterlyPeriod,
    RealizationSeries,
    build_error_panel,
    split_subsamples,
)

__version__ = "0.1.0"
