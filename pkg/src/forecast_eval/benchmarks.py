"""Benchmark forecasts: random walk and rolling-window AR(p) with AIC lag choice.

The forecasters follow the scikit-learn estimator protocol (``get_params``,
``set_params``, ``fit``/``predict``, ``clone``-able), fitted on a 1-D history
and predicting a number of steps past its last observation. The panel
builders re-fit a clone at each forecast origin.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, clone
from sklearn.utils.validation import check_is_fitted

from .exceptions import (
    CollinearWindowError,
    ComputationError,
    DegenerateWindowError,
    InsufficientObservationsError,
)
from .timeseries import ForecastPanel, QuarterlyPeriod, RealizationSeries, quarter_range
from .validation import check_horizons, check_positive_int, check_series

logger = logging.getLogger(__name__)

__all__ = [
    "ARFit",
    "fit_ar",
    "select_lag_aic",
    "ARForecaster",
    "RandomWalkForecaster",
    "random_walk_panel",
    "ar_panel",
    "default_origins",
]

# Residual variance below this fraction of the window's mean square is
# indistinguishable from rounding noise and is treated as an exact fit.
EXACT_FIT_RTOL = 1e-18


@dataclass(frozen=True)
class ARFit:
    """Least-squares AR(p) fit with intercept.

    ``n_eff`` is the number of residuals, i.e. the window length minus the
    conditioning values held back for the largest candidate lag.
    """

    lag_order: int
    intercept: float
    coefficients: tuple[float, ...]
    residual_variance: float
    window_length: int
    aic: float
    n_eff: int

    @property
    def unconditional_mean(self) -> float:
        return self.intercept / (1.0 - sum(self.coefficients))

    def forecast(self, history, steps) -> np.ndarray:
        """Iterate the fitted recursion forward from ``history``.

        ``steps`` are nonnegative step counts past the last element of
        ``history``; step 0 returns that last element.
        """
        hist = list(np.asarray(history, dtype=float)[-self.lag_order :])
        if len(hist) < self.lag_order:
            raise ValueError(f"history needs at least {self.lag_order} values")
        steps = np.asarray(steps, dtype=int)
        out = np.empty(steps.shape, dtype=float)
        horizon = int(steps.max(initial=0))
        path = [hist[-1]]
        for _ in range(horizon):
            nxt = self.intercept
            for i, phi in enumerate(self.coefficients, start=1):
                nxt += phi * hist[-i]
            hist.append(nxt)
            path.append(nxt)
        for k, s in np.ndenumerate(steps):
            out[k] = path[s]
        return out


def _lag_design(y, p, hold_back):
    n = y.shape[0]
    rows = n - hold_back
    X = np.ones((rows, p + 1))
    for i in range(1, p + 1):
        X[:, i] = y[hold_back - i : n - i]
    return X, y[hold_back:]


def fit_ar(window, p, p_max=None) -> ARFit:
    """Fit an AR(``p``) with intercept by ordinary least squares.

    The first ``p_max`` values (default ``p``) are only used as lags, so fits
    with different ``p`` but the same ``p_max`` share the estimation sample
    and their AIC values are comparable.

    Parameters
    ----------
    window : array-like of shape (n,)
    p : int
        Lag order, at least 1.
    p_max : int, optional
        Number of initial conditioning values to hold back; ``>= p``.

    Returns
    -------
    ARFit
        ``residual_variance = RSS / n_eff`` and
        ``aic = n_eff * log(residual_variance) + 2 * (p + 1)``.
    """
    y = check_series(window, "window")
    p = check_positive_int(p, "p")
    p_max = p if p_max is None else check_positive_int(p_max, "p_max")
    if p_max < p:
        raise ValueError(f"p_max ({p_max}) must be >= p ({p})")
    n = y.shape[0]
    n_eff = n - p_max
    if n_eff < p + 2:
        raise InsufficientObservationsError(
            f"insufficient observations: AR({p}) with {p_max} held back needs "
            f"{p_max + p + 2} values, window has {n}"
        )
    if np.ptp(y) == 0:
        raise DegenerateWindowError("degenerate window: constant values")
    X, target = _lag_design(y, p, p_max)
    if np.linalg.matrix_rank(X) < p + 1:
        raise CollinearWindowError(f"collinear window: AR({p}) design matrix is rank deficient")
    beta, *_ = np.linalg.lstsq(X, target, rcond=None)
    resid = target - X @ beta
    sigma2 = float(resid @ resid) / n_eff
    if sigma2 <= EXACT_FIT_RTOL * float(np.mean(y * y)):
        sigma2 = 0.0
    aic = -math.inf if sigma2 == 0.0 else n_eff * math.log(sigma2) + 2 * (p + 1)
    return ARFit(
        lag_order=p,
        intercept=float(beta[0]),
        coefficients=tuple(float(b) for b in beta[1:]),
        residual_variance=sigma2,
        window_length=n,
        aic=aic,
        n_eff=n_eff,
    )


def select_lag_aic(window, p_max=4) -> ARFit:
    """AIC-minimizing AR fit over ``p = 1..p_max`` on a common sample.

    Ties go to the smaller lag order. Candidates whose design is rank
    deficient are skipped (their extra lags carry no information); the
    error propagates only if no candidate can be fitted.
    """
    p_max = check_positive_int(p_max, "p_max")
    best = None
    collinear = None
    for p in range(1, p_max + 1):
        try:
            fit = fit_ar(window, p, p_max)
        except CollinearWindowError as exc:
            collinear = collinear or exc
            continue
        if best is None or fit.aic < best.aic:
            best = fit
    if best is None:
        raise collinear
    return best


class ARForecaster(BaseEstimator):
    """Autoregressive forecaster with intercept and AIC lag selection.

    Parameters
    ----------
    p_max : int, default=4
        Largest lag order considered.
    lags : int, optional
        Fix the lag order instead of selecting it. The estimation sample
        still holds back ``max(lags, p_max)`` values.

    Attributes
    ----------
    fit_ : ARFit
    lag_order_, intercept_, coef_, sigma2_, aic_
        Copies of the corresponding ``fit_`` fields.
    """

    def __init__(self, p_max=4, lags=None):
        self.p_max = p_max
        self.lags = lags

    def fit(self, y, X=None):
        y = check_series(y, "y")
        if self.lags is None:
            fit = select_lag_aic(y, self.p_max)
        else:
            fit = fit_ar(y, self.lags, max(self.lags, self.p_max))
        self.fit_ = fit
        self.lag_order_ = fit.lag_order
        self.intercept_ = fit.intercept
        self.coef_ = np.array(fit.coefficients)
        self.sigma2_ = fit.residual_variance
        self.aic_ = fit.aic
        self.history_ = y[-fit.lag_order :].copy()
        return self

    def predict(self, steps):
        """Iterated forecasts ``steps`` periods past the end of the fitted history."""
        check_is_fitted(self, "fit_")
        steps = np.asarray(steps)
        if steps.size and (steps.min() < 0 or not np.all(steps == np.round(steps))):
            raise ValueError("steps must be nonnegative integers")
        return self.fit_.forecast(self.history_, steps.astype(int))


class RandomWalkForecaster(BaseEstimator):
    """No-change forecast: every step predicts the last observed value."""

    def fit(self, y, X=None):
        y = check_series(y, "y")
        self.last_ = float(y[-1])
        return self

    def predict(self, steps):
        check_is_fitted(self, "last_")
        return np.full(np.shape(steps), self.last_, dtype=float)


def default_origins(real: RealizationSeries, availability_lag=1) -> list[QuarterlyPeriod]:
    """Every origin whose latest available realization lies inside ``real``."""
    return quarter_range(real.start + availability_lag, real.end + availability_lag)


def _rolling_panel(real, origins, horizons, estimator, window_length, availability_lag, source, n_jobs):
    horizons = check_horizons(horizons)
    availability_lag = check_positive_int(availability_lag, "availability_lag", minimum=0)
    if origins is None:
        origins = default_origins(real, availability_lag)
    steps = np.array([h + availability_lag for h in horizons])

    def one(origin):
        last = origin - availability_lag
        window = real.window(last, window_length)
        if window is None:
            logger.debug("%s: origin %s lacks %d observations ending %s", source, origin, window_length, last)
            return origin, None
        try:
            est = clone(estimator).fit(window)
        except ComputationError as exc:
            logger.debug("%s: origin %s: %s", source, origin, exc)
            return origin, None
        return origin, est.predict(steps)

    origins = list(origins)
    if n_jobs and n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(one, origins))
    else:
        results = [one(o) for o in origins]

    skipped = [origin for origin, preds in results if preds is None]
    if skipped:
        logger.warning(
            "%s: %d origin(s) skipped (%s..%s): insufficient history or degenerate window",
            source, len(skipped), skipped[0], skipped[-1],
        )
    entries = {}
    for origin, preds in results:
        if preds is None:
            continue
        for h, f in zip(horizons, preds):
            entries[(origin, h)] = float(f)
    return ForecastPanel(source, entries)


def random_walk_panel(real, origins=None, horizons=range(13), availability_lag=1, source="RW"):
    """Forecast every horizon with the latest realization available at the origin.

    With ``availability_lag=1`` a forecast made in quarter ``o`` uses the value
    for ``o - 1``. Origins before the first usable realization are omitted.
    """
    return _rolling_panel(
        real, origins, horizons, RandomWalkForecaster(), 1, availability_lag, source, None
    )


def ar_panel(
    real,
    origins=None,
    horizons=range(13),
    window_length=60,
    p_max=4,
    availability_lag=1,
    source="AR",
    n_jobs=None,
):
    """Rolling-window AR benchmark.

    At each origin an AR model is selected by AIC on the ``window_length``
    most recent available observations, then iterated forward
    ``h + availability_lag`` steps for horizon ``h``. Origins without enough
    history (or with a degenerate window) are omitted with a logged warning.
    """
    window_length = check_positive_int(window_length, "window_length")
    return _rolling_panel(
        real,
        origins,
        horizons,
        ARForecaster(p_max=p_max),
        window_length,
        availability_lag,
        source,
        n_jobs,
    )
