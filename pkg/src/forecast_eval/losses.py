"""Loss functions on forecast errors and forecast-error summary statistics."""

from __future__ import annotations

import math
import re
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import DegenerateSampleError, InsufficientObservationsError, LossOverflowError
from .validation import check_series

__all__ = ["LossSpec", "loss", "loss_series", "SummaryStats", "summarize", "DEFAULT_LOSSES"]

LINEX_OVERFLOW = 700.0
_LINEX_RE = re.compile(r"^linex\(\s*([-+0-9.eE]+)\s*\)$")


@dataclass(frozen=True)
class LossSpec:
    """Loss function choice: ``quadratic``, ``absolute`` or ``linex`` with ``alpha``.

    Positive ``alpha`` makes linex penalize positive errors (under-prediction)
    more heavily; negative ``alpha`` penalizes over-prediction.
    """

    kind: str
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in ("quadratic", "absolute", "linex"):
            raise ValueError(f"unknown loss kind {self.kind!r}")
        if self.kind == "linex":
            if not (math.isfinite(self.alpha) and self.alpha != 0):
                raise ValueError("linex loss needs a finite nonzero alpha")
            object.__setattr__(self, "alpha", float(self.alpha))
        else:
            object.__setattr__(self, "alpha", 0.0)

    @classmethod
    def parse(cls, text: str) -> "LossSpec":
        """Parse ``quadratic``, ``absolute`` or ``linex(0.5)``."""
        t = text.strip().lower()
        if t in ("quadratic", "absolute"):
            return cls(t)
        m = _LINEX_RE.match(t)
        if m is None:
            raise ValueError(f"cannot parse loss {text!r}")
        return cls("linex", float(m.group(1)))

    @property
    def label(self) -> str:
        if self.kind == "linex":
            return f"linex({self.alpha:g})"
        return self.kind

    def __str__(self):
        return self.label


DEFAULT_LOSSES = (
    LossSpec("quadratic"),
    LossSpec("absolute"),
    LossSpec("linex", 0.5),
    LossSpec("linex", -0.5),
)


def _linex_core(x: float) -> float:
    # exp(x) - x - 1, computed so the result is > 0 for every x != 0.
    if abs(x) < 1e-2:
        term = x * x / 2.0
        total = term
        for k in range(3, 10):
            term *= x / k
            total += term
        return total
    return math.expm1(x) - x


def loss(spec: LossSpec, e: float) -> float:
    """Loss of a single forecast error.

    Raises
    ------
    LossOverflowError
        For linex when ``|alpha * e|`` exceeds 700.
    """
    e = float(e)
    if not math.isfinite(e):
        raise ValueError(f"forecast error must be finite, got {e}")
    if spec.kind == "quadratic":
        return e * e
    if spec.kind == "absolute":
        return abs(e)
    x = spec.alpha * e
    if abs(x) > LINEX_OVERFLOW:
        raise LossOverflowError(f"loss overflow: |alpha*e| = {abs(x):.6g} exceeds {LINEX_OVERFLOW:g}")
    return _linex_core(x)


def loss_series(spec: LossSpec, errors) -> np.ndarray:
    """Elementwise :func:`loss` over a sequence of errors."""
    e = check_series(errors, "errors", min_length=0)
    if spec.kind == "quadratic":
        return e * e
    if spec.kind == "absolute":
        return np.abs(e)
    return np.array([loss(spec, v) for v in e.tolist()])


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    median: float
    mae: float
    mdae: float
    std: float
    max: float
    min: float
    skew: float
    ac1: float
    ac4: float

    def as_dict(self):
        return asdict(self)


def _autocorr(c: np.ndarray, k: int, denom: float) -> float:
    return float(np.dot(c[k:], c[:-k]) / denom)


def summarize(errors) -> SummaryStats:
    """Descriptive statistics of a forecast-error sample.

    ``std`` uses an ``n - 1`` denominator; ``skew`` is the unadjusted ratio
    ``m3 / m2**1.5`` of central moments over ``n``; autocorrelations divide
    lagged cross-products by the full-sample sum of squared deviations.

    Raises
    ------
    InsufficientObservationsError
        Fewer than 5 errors.
    DegenerateSampleError
        Zero variance; ``exc.partial`` holds the location/spread fields.
    """
    e = check_series(errors, "errors")
    n = e.shape[0]
    if n < 5:
        raise InsufficientObservationsError(f"insufficient observations: {n} errors, need at least 5")
    abs_e = np.abs(e)
    mean = float(np.mean(e))
    loc = dict(
        n=n,
        mean=mean,
        median=float(np.median(e)),
        mae=float(np.mean(abs_e)),
        mdae=float(np.median(abs_e)),
        max=float(np.max(e)),
        min=float(np.min(e)),
    )
    if np.ptp(e) == 0:
        loc["std"] = 0.0
        raise DegenerateSampleError("degenerate sample: zero variance", partial=loc)
    c = e - mean
    ss = float(np.dot(c, c))
    m2 = ss / n
    m3 = float(np.mean(c**3))
    return SummaryStats(
        std=math.sqrt(ss / (n - 1)),
        skew=m3 / m2**1.5,
        ac1=_autocorr(c, 1, ss),
        ac4=_autocorr(c, 4, ss),
        **loc,
    )
