"""CSV ingestion and canonical CSV writers.

Schemas (UTF-8, comma separated, one header row)::

    realizations:  period,value                       2014Q1,1.9
    forecasts:     origin,horizon,value               2022Q3,1,13.1
    survey:        pub_year,pub_month,target_year,value

Writers emit floats with ``repr`` so that a write/read round trip is exact.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .exceptions import (
    AmbiguousSurveyError,
    DuplicateRowError,
    FormatError,
    IngestionError,
    NonContiguousSeriesError,
)
from .timeseries import ForecastPanel, MonthlyPeriod, QuarterlyPeriod, RealizationSeries

logger = logging.getLogger(__name__)

__all__ = [
    "SurveyRecord",
    "SURVEY_HORIZON_MAP",
    "read_realizations",
    "read_forecast_panel",
    "read_survey",
    "align_survey",
    "write_realizations",
    "write_forecast_panel",
    "format_float",
]

REALIZATION_HEADER = ("period", "value")
FORECAST_HEADER = ("origin", "horizon", "value")
SURVEY_HEADER = ("pub_year", "pub_month", "target_year", "value")

# publication month -> (years before target, origin quarter, horizon)
SURVEY_HORIZON_MAP = {
    8: (0, 3, 1),
    5: (0, 2, 2),
    11: (1, 4, 4),
}


@dataclass(frozen=True)
class SurveyRecord:
    """One fixed-event survey forecast of Q4-on-Q4 inflation in ``target_year``."""

    publication: MonthlyPeriod
    target_year: int
    value: float

    def __post_init__(self):
        if self.target_year not in (self.publication.year, self.publication.year + 1):
            raise ValueError(
                f"target year {self.target_year} must be the publication year "
                f"{self.publication.year} or the following one"
            )


def format_float(x: float) -> str:
    """Shortest round-tripping decimal representation."""
    if x == 0:
        return "0.0"
    return repr(float(x))


def _parse_float(token, path, line, what="value"):
    try:
        x = float(token)
    except (TypeError, ValueError):
        raise FormatError(f"format error: cannot parse {what} {token!r}", path, line) from None
    if not math.isfinite(x):
        raise FormatError(f"format error: {what} {token!r} is not finite", path, line)
    return x


def _parse_int(token, path, line, what):
    try:
        return int(token.strip())
    except (AttributeError, ValueError):
        raise FormatError(f"format error: cannot parse {what} {token!r}", path, line) from None


def _parse_period(token, path, line, what="period"):
    try:
        return QuarterlyPeriod.parse(token)
    except ValueError:
        raise FormatError(f"format error: cannot parse {what} {token!r}", path, line) from None


def _rows(source, header):
    """Yield ``(line_number, fields)`` after validating the header.

    ``source`` is a path or an open text stream. Blank lines are skipped.
    """
    if isinstance(source, (str, Path)):
        path = str(source)
        try:
            with open(source, newline="", encoding="utf-8-sig") as fh:
                text = fh.read()
        except OSError as exc:
            raise IngestionError(f"cannot read file: {exc.strerror}", path) from exc
    else:
        path = getattr(source, "name", None)
        text = source.read()
    reader = csv.reader(io.StringIO(text, newline=""))
    rows = []
    for fields in reader:
        rows.append((reader.line_num, [f.strip() for f in fields]))
    if not rows:
        raise FormatError("format error: missing header", path, 1)
    line, first = rows[0]
    if tuple(h.lower() for h in first) != header:
        raise FormatError(
            f"format error: expected header {','.join(header)!r}, got {','.join(first)!r}", path, line
        )
    out = []
    for line, fields in rows[1:]:
        if not fields or all(f == "" for f in fields):
            continue
        if len(fields) != len(header):
            raise FormatError(
                f"format error: expected {len(header)} fields, got {len(fields)}", path, line
            )
        out.append((line, fields))
    return path, out


def read_realizations(source) -> RealizationSeries:
    """Read a ``period,value`` CSV into a contiguous series.

    Rows may appear in any order; they are sorted by period. Duplicate
    periods and gaps are errors.
    """
    path, rows = _rows(source, REALIZATION_HEADER)
    data = {}
    for line, (ptok, vtok) in rows:
        period = _parse_period(ptok, path, line)
        value = _parse_float(vtok, path, line)
        if period in data:
            raise DuplicateRowError(f"duplicate row for period {period}", path, line)
        data[period] = value
    if not data:
        raise IngestionError("realization file has no data rows", path)
    periods = sorted(data)
    for prev, cur in zip(periods, periods[1:]):
        if cur - prev != 1:
            raise NonContiguousSeriesError(
                f"non-contiguous series: no value between {prev} and {cur}", path
            )
    return RealizationSeries.from_mapping(data)


def read_forecast_panel(source, source_label: str) -> ForecastPanel:
    """Read an ``origin,horizon,value`` CSV. An empty body gives an empty panel."""
    path, rows = _rows(source, FORECAST_HEADER)
    entries = {}
    for line, (otok, htok, vtok) in rows:
        origin = _parse_period(otok, path, line, "origin")
        h = _parse_int(htok, path, line, "horizon")
        if h < 0:
            raise FormatError(f"negative horizon {h}", path, line)
        value = _parse_float(vtok, path, line)
        if (origin, h) in entries:
            raise DuplicateRowError(f"duplicate row for origin {origin}, horizon {h}", path, line)
        entries[(origin, h)] = value
    return ForecastPanel(source_label, entries)


def read_survey(source) -> list[SurveyRecord]:
    """Read ``pub_year,pub_month,target_year,value`` rows."""
    path, rows = _rows(source, SURVEY_HEADER)
    records = []
    for line, (ytok, mtok, ttok, vtok) in rows:
        year = _parse_int(ytok, path, line, "pub_year")
        month = _parse_int(mtok, path, line, "pub_month")
        target = _parse_int(ttok, path, line, "target_year")
        value = _parse_float(vtok, path, line)
        try:
            records.append(SurveyRecord(MonthlyPeriod(year, month), target, value))
        except ValueError as exc:
            raise FormatError(f"format error: {exc}", path, line) from None
    return records


def align_survey(records, source_label: str = "survey") -> ForecastPanel:
    """Map fixed-event Q4 survey forecasts onto fixed horizons.

    A forecast of year-``Y`` Q4 inflation published in August of ``Y`` becomes
    the 1-quarter-ahead forecast from ``Y``Q3, May of ``Y`` the 2-quarter-ahead
    forecast from ``Y``Q2, and November of ``Y-1`` the 4-quarter-ahead forecast
    from ``(Y-1)``Q4. Every other record is ignored.
    """
    entries = {}
    skipped = Counter()
    for rec in records:
        rule = SURVEY_HORIZON_MAP.get(rec.publication.month)
        if rule is None:
            skipped[rec.publication.month] += 1
            continue
        years_before, origin_q, h = rule
        if rec.publication.year != rec.target_year - years_before:
            skipped[rec.publication.month] += 1
            continue
        origin = QuarterlyPeriod(rec.publication.year, origin_q)
        if (origin, h) in entries:
            raise AmbiguousSurveyError(
                f"ambiguous survey record: two records map to origin {origin}, horizon {h}"
            )
        entries[(origin, h)] = rec.value
    n_skipped = sum(skipped.values())
    if n_skipped:
        logger.info(
            "align_survey: %d record(s) outside the alignment map (months %s)",
            n_skipped,
            ",".join(str(m) for m in sorted(skipped)),
        )
    return ForecastPanel(source_label, entries)


def _write(target, header, rows):
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buf.getvalue()
    if isinstance(target, (str, Path)):
        with open(target, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    else:
        target.write(text)


def write_realizations(target, series: RealizationSeries):
    _write(target, REALIZATION_HEADER, [(str(p), format_float(v)) for p, v in series])


def write_forecast_panel(target, panel: ForecastPanel):
    """Write in canonical order (origin, then horizon)."""
    _write(target, FORECAST_HEADER, [(str(o), str(h), format_float(v)) for o, h, v in panel])
