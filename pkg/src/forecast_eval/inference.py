"""Equal-predictive-accuracy testing and forecast rationality regressions.

The Diebold-Mariano statistic is studentized with a Bartlett-kernel long-run
variance and compared against fixed-b critical values (Kiefer-Vogelsang
polynomial approximations for the Bartlett kernel), which stay correctly
sized when the bandwidth is a non-negligible fraction of the sample.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from statistics import NormalDist
from typing import NamedTuple

import numpy as np

from .exceptions import (
    ComputationError,
    DegenerateDifferentialError,
    InsufficientObservationsError,
    SingularDesignError,
)
from .losses import LossSpec, loss_series
from .timeseries import ErrorPanel, QuarterlyPeriod
from .validation import check_paired, check_positive_int, check_series

__all__ = [
    "DMOutcome",
    "MZOutcome",
    "FluctuationPoint",
    "bandwidth_rule",
    "bartlett_lrv",
    "fixed_b_cv",
    "normal_cv",
    "critical_values",
    "test_dm",
    "paired_errors",
    "compare_forecasts",
    "mz_regression",
    "fluctuation_dm",
    "CV_SOURCES",
    "LEVELS",
]

LEVELS = (0.10, 0.05)
CV_SOURCES = ("fixed_b", "standard_normal")
MIN_DM_OBS = 8

# Two-sided level -> cubic coefficients in b of the Bartlett fixed-b
# critical value, cv(b) = c0 + c1*b + c2*b**2 + c3*b**3.
_FIXED_B_BARTLETT = {
    0.10: (1.6449, 2.1859, 0.3142, -0.3427),
    0.05: (1.9600, 2.9694, 0.4160, -0.5324),
}

# A long-run variance this small relative to the mean square of the
# differential is rounding noise from a constant series.
_DEGENERATE_LRV_RTOL = (64 * np.finfo(float).eps) ** 2


@dataclass(frozen=True)
class DMOutcome:
    """Result of a Diebold-Mariano test.

    A negative ``statistic`` means the first forecast has the lower average loss.
    """

    statistic: float
    n: int
    bandwidth: int
    b_ratio: float
    mean_differential: float
    lrv: float
    cv10: float
    cv05: float
    reject10: bool
    reject05: bool
    cv_source: str

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class MZOutcome:
    """Mincer-Zarnowitz regression ``realization = intercept + slope * forecast``.

    ``joint_wald`` tests ``(intercept, slope) = (0, 1)`` with a Bartlett HAC
    covariance; ``wald_pvalue`` uses the chi-squared(2) reference distribution.
    """

    intercept: float
    slope: float
    se_intercept: float
    se_slope: float
    joint_wald: float
    wald_pvalue: float
    n: int
    bandwidth: int

    def as_dict(self):
        return asdict(self)


class FluctuationPoint(NamedTuple):
    end: QuarterlyPeriod
    outcome: DMOutcome | None
    reason: str | None = None


def bandwidth_rule(n: int) -> int:
    """``floor(sqrt(n))``."""
    n = check_positive_int(n, "n")
    return math.isqrt(n)


def bartlett_lrv(d, bandwidth: int) -> float:
    """Bartlett-kernel long-run variance of ``d``.

    ``gamma_0 + 2 * sum_{j=1}^{M-1} (1 - j/M) * gamma_j`` with autocovariances
    of the demeaned series divided by ``n``. ``M = 1`` gives the (biased)
    sample variance.
    """
    d = check_series(d, "d", min_length=2)
    n = d.shape[0]
    M = check_positive_int(bandwidth, "bandwidth")
    if M > n:
        raise ValueError(f"bandwidth {M} exceeds sample size {n}")
    c = d - d.mean()
    lrv = float(np.dot(c, c)) / n
    for j in range(1, M):
        lrv += 2.0 * (1.0 - j / M) * float(np.dot(c[j:], c[:-j])) / n
    return max(lrv, 0.0)


def fixed_b_cv(b: float, level: float) -> float:
    """Two-sided fixed-b critical value for a Bartlett-kernel t-statistic.

    Parameters
    ----------
    b : float
        Bandwidth-to-sample-size ratio, ``0 < b <= 1``.
    level : {0.10, 0.05}
    """
    b = float(b)
    if not 0.0 < b <= 1.0:
        raise ValueError(f"b must lie in (0, 1], got {b}")
    coefs = _FIXED_B_BARTLETT.get(_level_key(level))
    c0, c1, c2, c3 = coefs
    return c0 + b * (c1 + b * (c2 + b * c3))


def normal_cv(level: float) -> float:
    """Two-sided standard normal critical value."""
    return NormalDist().inv_cdf(1.0 - _level_key(level) / 2.0)


def _level_key(level):
    for lv in LEVELS:
        if math.isclose(level, lv):
            return lv
    raise ValueError(f"significance level must be one of {LEVELS}, got {level}")


def critical_values(b: float, cv_source: str = "fixed_b") -> tuple[float, float]:
    """``(cv10, cv05)`` for the given source."""
    if cv_source == "fixed_b":
        return fixed_b_cv(b, 0.10), fixed_b_cv(b, 0.05)
    if cv_source == "standard_normal":
        return normal_cv(0.10), normal_cv(0.05)
    raise ValueError(f"cv_source must be one of {CV_SOURCES}, got {cv_source!r}")


def _dm_from_differential(d: np.ndarray, cv_source: str, bandwidth=None) -> DMOutcome:
    n = d.shape[0]
    if n < MIN_DM_OBS:
        raise InsufficientObservationsError(
            f"insufficient observations: {n} paired losses, need at least {MIN_DM_OBS}"
        )
    M = bandwidth_rule(n) if bandwidth is None else check_positive_int(bandwidth, "bandwidth")
    b = M / n
    cv10, cv05 = critical_values(b, cv_source)
    if np.ptp(d) == 0:
        raise DegenerateDifferentialError(
            "zero long-run variance: degenerate differential (constant loss differential)"
        )
    lrv = bartlett_lrv(d, M)
    if lrv <= _DEGENERATE_LRV_RTOL * float(np.mean(d * d)):
        raise DegenerateDifferentialError("zero long-run variance: degenerate differential")
    dbar = float(np.mean(d))
    stat = dbar / math.sqrt(lrv / n)
    return DMOutcome(
        statistic=stat,
        n=n,
        bandwidth=M,
        b_ratio=b,
        mean_differential=dbar,
        lrv=lrv,
        cv10=cv10,
        cv05=cv05,
        reject10=abs(stat) > cv10,
        reject05=abs(stat) > cv05,
        cv_source=cv_source,
    )


def test_dm(loss_a, loss_b, cv_source: str = "fixed_b") -> DMOutcome:
    """Diebold-Mariano test of equal expected loss.

    ``loss_a`` and ``loss_b`` are losses of two forecasts paired by target
    period. The differential is ``loss_a - loss_b`` and the bandwidth is
    ``floor(sqrt(n))``.

    Raises
    ------
    DegenerateDifferentialError
        The differential is constant, so its long-run variance is zero.
    InsufficientObservationsError
        Fewer than 8 pairs.
    """
    a, b = check_paired(loss_a, loss_b, ("loss_a", "loss_b"))
    return _dm_from_differential(a - b, cv_source)


test_dm.__test__ = False  # not a pytest test


def paired_errors(err_a: ErrorPanel, err_b: ErrorPanel, horizon: int, window=None):
    """Errors of both panels at ``horizon`` on their common target periods.

    ``window`` is an optional inclusive ``(first, last)`` target range; either
    bound may be ``None``.
    """
    first, last = window if window is not None else (None, None)
    ea = err_a.at_horizon(horizon)
    eb = err_b.at_horizon(horizon)
    targets = sorted(
        t
        for t in ea.keys() & eb.keys()
        if (first is None or t >= first) and (last is None or t <= last)
    )
    return (
        targets,
        np.array([ea[t] for t in targets], dtype=float),
        np.array([eb[t] for t in targets], dtype=float),
    )


def compare_forecasts(
    err_a: ErrorPanel,
    err_b: ErrorPanel,
    spec: LossSpec,
    horizon: int,
    window=None,
    cv_source: str = "fixed_b",
) -> DMOutcome:
    """DM test of panel A against panel B at one horizon under ``spec``."""
    targets, ea, eb = paired_errors(err_a, err_b, horizon, window)
    if len(targets) < MIN_DM_OBS:
        raise InsufficientObservationsError(
            f"insufficient overlap: {len(targets)} common target periods at horizon {horizon}, "
            f"need at least {MIN_DM_OBS}"
        )
    return test_dm(loss_series(spec, ea), loss_series(spec, eb), cv_source)


def _bartlett_long_run_cov(scores: np.ndarray, M: int) -> np.ndarray:
    n = scores.shape[0]
    S = scores.T @ scores / n
    for j in range(1, M):
        G = scores[j:].T @ scores[:-j] / n
        S += (1.0 - j / M) * (G + G.T)
    return S


def mz_regression(forecasts, realizations, bandwidth=None) -> MZOutcome:
    """Regress realizations on forecasts; test intercept 0 and slope 1 jointly.

    Standard errors use a Bartlett HAC covariance with ``bandwidth``
    (default ``floor(sqrt(n))``). When the fit is exact the covariance is zero;
    the Wald statistic is then 0 if the coefficients equal (0, 1) and
    infinite otherwise.
    """
    f, y = check_paired(forecasts, realizations, ("forecasts", "realizations"), MIN_DM_OBS)
    n = f.shape[0]
    M = bandwidth_rule(n) if bandwidth is None else check_positive_int(bandwidth, "bandwidth")
    if M > n:
        raise ValueError(f"bandwidth {M} exceeds sample size {n}")
    if np.ptp(f) == 0:
        raise SingularDesignError("singular design: constant forecasts")
    X = np.column_stack([np.ones(n), f])
    XtX = X.T @ X
    beta = np.linalg.solve(XtX, X.T @ y)
    u = y - X @ beta
    theta = beta - np.array([0.0, 1.0])
    scale = float(np.mean(y * y)) or 1.0
    if float(np.mean(u * u)) <= _DEGENERATE_LRV_RTOL * scale:
        cov = np.zeros((2, 2))
        exact = np.allclose(theta, 0.0, rtol=0.0, atol=1e-10 * math.sqrt(scale))
        wald = 0.0 if exact else math.inf
    else:
        Q_inv = np.linalg.inv(XtX / n)
        S = _bartlett_long_run_cov(X * u[:, None], M)
        cov = Q_inv @ S @ Q_inv / n
        wald = float(theta @ np.linalg.solve(cov, theta))
    return MZOutcome(
        intercept=float(beta[0]),
        slope=float(beta[1]),
        se_intercept=math.sqrt(max(cov[0, 0], 0.0)),
        se_slope=math.sqrt(max(cov[1, 1], 0.0)),
        joint_wald=wald,
        wald_pvalue=math.exp(-wald / 2.0),
        n=n,
        bandwidth=M,
    )


def fluctuation_dm(
    err_a: ErrorPanel,
    err_b: ErrorPanel,
    spec: LossSpec,
    horizon: int,
    window_length: int,
    cv_source: str = "fixed_b",
) -> list[FluctuationPoint]:
    """DM statistics over rolling windows of ``window_length`` consecutive
    common target periods, ordered by window end.

    Windows whose differential is degenerate yield a point with
    ``outcome=None`` and a ``reason`` instead of aborting the sequence.
    """
    window_length = check_positive_int(window_length, "window_length", minimum=MIN_DM_OBS)
    targets, ea, eb = paired_errors(err_a, err_b, horizon)
    if len(targets) < window_length:
        raise InsufficientObservationsError(
            f"insufficient observations: {len(targets)} common targets, window length {window_length}"
        )
    d = loss_series(spec, ea) - loss_series(spec, eb)
    out = []
    for end in range(window_length, len(targets) + 1):
        try:
            res = _dm_from_differential(d[end - window_length : end], cv_source)
            out.append(FluctuationPoint(targets[end - 1], res))
        except ComputationError as exc:
            out.append(FluctuationPoint(targets[end - 1], None, exc.reason))
    return out
