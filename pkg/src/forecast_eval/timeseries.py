"""Calendar-aware series and forecast panels.

Everything here is immutable once constructed. Missing observations are never
stored as NaN; they are simply absent keys in a panel.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .exceptions import EmptySubsampleError

__all__ = [
    "QuarterlyPeriod",
    "MonthlyPeriod",
    "RealizationSeries",
    "ForecastPanel",
    "ErrorPanel",
    "build_error_panel",
    "split_subsamples",
    "quarter_range",
]

_QUARTER_RE = re.compile(r"^\s*(\d{4})\s*[.\-]?\s*[Qq]([1-4])\s*$")


@dataclass(frozen=True, order=True)
class QuarterlyPeriod:
    """A calendar quarter.

    Supports integer arithmetic: ``p + 3`` is three quarters later and
    ``p1 - p0`` is the number of quarters between them.
    """

    year: int
    quarter: int

    def __post_init__(self):
        if not isinstance(self.year, int) or not isinstance(self.quarter, int):
            raise TypeError("year and quarter must be integers")
        if not 1 <= self.quarter <= 4:
            raise ValueError(f"quarter must be in 1..4, got {self.quarter}")

    @classmethod
    def parse(cls, token: str) -> "QuarterlyPeriod":
        """Parse ``2014Q1`` (also ``2014.Q1`` / ``2014-Q1``)."""
        m = _QUARTER_RE.match(token)
        if m is None:
            raise ValueError(f"not a quarterly period: {token!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    @classmethod
    def from_ordinal(cls, ordinal: int) -> "QuarterlyPeriod":
        year, q = divmod(ordinal, 4)
        return cls(year, q + 1)

    @property
    def ordinal(self) -> int:
        return self.year * 4 + self.quarter - 1

    def __add__(self, quarters):
        if isinstance(quarters, bool) or not isinstance(quarters, int):
            return NotImplemented
        return QuarterlyPeriod.from_ordinal(self.ordinal + quarters)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, QuarterlyPeriod):
            return self.ordinal - other.ordinal
        if isinstance(other, bool) or not isinstance(other, int):
            return NotImplemented
        return QuarterlyPeriod.from_ordinal(self.ordinal - other)

    def __str__(self):
        return f"{self.year}Q{self.quarter}"


@dataclass(frozen=True, order=True)
class MonthlyPeriod:
    """A calendar month; only used to date survey publications."""

    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise ValueError(f"month must be in 1..12, got {self.month}")

    @property
    def quarter(self) -> QuarterlyPeriod:
        return QuarterlyPeriod(self.year, (self.month - 1) // 3 + 1)

    def __str__(self):
        return f"{self.year}-{self.month:02d}"


def quarter_range(first: QuarterlyPeriod, last: QuarterlyPeriod) -> list[QuarterlyPeriod]:
    """Inclusive list of quarters from ``first`` to ``last``."""
    return [first + k for k in range(last - first + 1)]


@dataclass(frozen=True)
class RealizationSeries:
    """Contiguous quarterly series of realized values starting at ``start``."""

    start: QuarterlyPeriod
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("a realization series needs at least one value")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, data: Mapping[QuarterlyPeriod, float]) -> "RealizationSeries":
        """Build from ``{period: value}``; raises ``ValueError`` on gaps."""
        if not data:
            raise ValueError("a realization series needs at least one value")
        periods = sorted(data)
        for prev, cur in zip(periods, periods[1:]):
            if cur - prev != 1:
                raise ValueError(f"non-contiguous series: gap between {prev} and {cur}")
        return cls(periods[0], tuple(data[p] for p in periods))

    def __len__(self):
        return len(self.values)

    def __iter__(self) -> Iterator[tuple[QuarterlyPeriod, float]]:
        for k, v in enumerate(self.values):
            yield self.start + k, v

    def __contains__(self, period):
        return isinstance(period, QuarterlyPeriod) and 0 <= period - self.start < len(self)

    @property
    def end(self) -> QuarterlyPeriod:
        return self.start + (len(self.values) - 1)

    @property
    def periods(self) -> list[QuarterlyPeriod]:
        return quarter_range(self.start, self.end)

    def get(self, period: QuarterlyPeriod, default=None):
        k = period - self.start
        if 0 <= k < len(self.values):
            return self.values[k]
        return default

    def __getitem__(self, period: QuarterlyPeriod) -> float:
        if period not in self:
            raise KeyError(str(period))
        return self.values[period - self.start]

    def window(self, last: QuarterlyPeriod, length: int) -> tuple[float, ...] | None:
        """The ``length`` values ending at ``last`` inclusive, or ``None`` if
        the series does not cover them."""
        first = last - (length - 1)
        if first < self.start or last > self.end:
            return None
        i = first - self.start
        return self.values[i : i + length]

    def shift(self, c: float) -> "RealizationSeries":
        return RealizationSeries(self.start, tuple(v + c for v in self.values))


def _freeze(entries) -> Mapping:
    return MappingProxyType(dict(entries))


@dataclass(frozen=True)
class ForecastPanel:
    """Forecasts keyed by ``(origin, horizon)``.

    ``horizon`` counts quarters ahead of the origin; ``0`` is the nowcast.
    The target period of an entry is ``origin + horizon``.
    """

    source: str
    entries: Mapping[tuple[QuarterlyPeriod, int], float] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (origin, h), v in dict(self.entries).items():
            if not isinstance(origin, QuarterlyPeriod):
                raise TypeError(f"origin must be a QuarterlyPeriod, got {origin!r}")
            if isinstance(h, bool) or int(h) != h or h < 0:
                raise ValueError(f"horizon must be a nonnegative integer, got {h!r}")
            clean[(origin, int(h))] = float(v)
        object.__setattr__(self, "entries", _freeze(sorted(clean.items())))

    @classmethod
    def from_records(cls, source: str, records: Iterable[tuple[QuarterlyPeriod, int, float]]):
        """Build from ``(origin, horizon, value)`` triples, rejecting duplicates."""
        entries = {}
        for origin, h, v in records:
            if (origin, h) in entries:
                raise ValueError(f"duplicate forecast for origin {origin}, horizon {h}")
            entries[(origin, h)] = v
        return cls(source, entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[QuarterlyPeriod, int, float]]:
        for (origin, h), v in self.entries.items():
            yield origin, h, v

    @property
    def horizons(self) -> list[int]:
        return sorted({h for _, h in self.entries})

    @property
    def origins(self) -> list[QuarterlyPeriod]:
        return sorted({o for o, _ in self.entries})

    def get(self, origin, horizon, default=None):
        return self.entries.get((origin, horizon), default)

    def at_horizon(self, horizon: int) -> dict[QuarterlyPeriod, float]:
        """``{target period: forecast}`` for one horizon."""
        return {o + h: v for (o, h), v in self.entries.items() if h == horizon}

    def relabel(self, source: str) -> "ForecastPanel":
        return ForecastPanel(source, self.entries)


@dataclass(frozen=True)
class ErrorPanel:
    """Forecast errors (realization minus forecast) keyed by ``(target, horizon)``."""

    source: str
    entries: Mapping[tuple[QuarterlyPeriod, int], float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "entries", _freeze(sorted((k, float(v)) for k, v in dict(self.entries).items()))
        )

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        for (target, h), e in self.entries.items():
            yield target, h, e

    @property
    def horizons(self) -> list[int]:
        return sorted({h for _, h in self.entries})

    @property
    def targets(self) -> list[QuarterlyPeriod]:
        return sorted({t for t, _ in self.entries})

    def at_horizon(self, horizon: int) -> dict[QuarterlyPeriod, float]:
        """``{target: error}`` for one horizon, ordered by target."""
        return {t: e for (t, h), e in self.entries.items() if h == horizon}

    def count(self, horizon: int) -> int:
        return sum(1 for _, h in self.entries if h == horizon)

    def restrict(self, first=None, last=None) -> "ErrorPanel":
        """Keep target periods in ``[first, last]`` (either bound optional)."""
        keep = {
            (t, h): e
            for (t, h), e in self.entries.items()
            if (first is None or t >= first) and (last is None or t <= last)
        }
        return ErrorPanel(self.source, keep)


def build_error_panel(panel: ForecastPanel, real: RealizationSeries) -> ErrorPanel:
    """Pair each forecast with the realization of its target period.

    Forecasts whose target is not covered by ``real`` are dropped.
    """
    entries = {}
    for origin, h, f in panel:
        target = origin + h
        y = real.get(target)
        if y is not None:
            entries[(target, h)] = y - f
    return ErrorPanel(panel.source, entries)


def split_subsamples(panel: ErrorPanel, cut: QuarterlyPeriod) -> tuple[ErrorPanel, ErrorPanel]:
    """Split into targets ``<= cut`` and targets ``> cut``.

    Raises
    ------
    EmptySubsampleError
        If either side would be empty.
    """
    first = {k: e for k, e in panel.entries.items() if k[0] <= cut}
    second = {k: e for k, e in panel.entries.items() if k[0] > cut}
    if not first or not second:
        raise EmptySubsampleError(f"empty sub-sample: cut {cut} outside the target span")
    return ErrorPanel(panel.source, first), ErrorPanel(panel.source, second)
