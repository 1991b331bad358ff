"""Evaluation grids and their serialization.

The ``*_rows`` functions are pure: they take loaded panels and return lists
of flat dicts in a fixed order. Writers turn rows into CSV, JSON and aligned
text. Grid cells may be computed on a thread pool; output order never
depends on it.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .benchmarks import ar_panel, default_origins, random_walk_panel
from .exceptions import ComputationError, ConfigError
from .inference import compare_forecasts, fluctuation_dm, mz_regression
from .io import align_survey, format_float, read_forecast_panel, read_realizations, read_survey
from .losses import summarize
from .timeseries import ErrorPanel, QuarterlyPeriod, build_error_panel, quarter_range

SUMMARY_FIELDS = ["n", "mean", "median", "mae", "mdae", "std", "max", "min", "skew", "ac1", "ac4"]
DM_FIELDS = ["statistic", "n", "bandwidth", "b_ratio", "cv10", "cv05", "reject10", "reject05",
             "mean_differential", "lrv"]
MZ_FIELDS = ["intercept", "slope", "se_intercept", "se_slope", "joint_wald", "wald_pvalue", "n",
             "bandwidth"]


def _map(fn, items, jobs):
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# ---------------------------------------------------------------- loading


def load_realizations(config):
    if config.realizations is None:
        raise ConfigError("no realizations file configured")
    return read_realizations(config.realizations)


def benchmark_panels(config, real):
    """Benchmark panels enabled in ``config``, keyed by label."""
    lag = config.availability_lag
    span = default_origins(real, lag)
    first = config.origin_start
    if first is None:
        first = span[0]
        if config.sample_start is not None:
            # earliest origin whose forecasts can land in the evaluation sample
            first = max(first, config.sample_start - max(config.horizons))
    last = config.origin_end or span[-1]
    if last < first:
        raise ConfigError(f"origin_end {last} precedes origin_start {first}")
    origins = quarter_range(first, last)
    panels = {}
    if "rw" in config.benchmarks:
        panels["RW"] = random_walk_panel(real, origins, config.horizons, lag)
    if "ar" in config.benchmarks:
        panels["AR"] = ar_panel(
            real, origins, config.horizons, config.ar_window, config.p_max, lag, n_jobs=config.jobs
        )
    return panels


def load_sources(config):
    """Realizations plus every configured forecast panel, in a fixed order:
    forecast files, then the aligned survey, then benchmarks."""
    real = load_realizations(config)
    panels = {}
    for label, path in config.forecasts:
        if label in panels:
            raise ConfigError(f"duplicate forecast label {label!r}")
        panels[label] = read_forecast_panel(path, label)
    if config.survey is not None:
        panels["survey"] = align_survey(read_survey(config.survey))
    for label, panel in benchmark_panels(config, real).items():
        if label in panels:
            raise ConfigError(f"forecast label {label!r} clashes with a benchmark")
        panels[label] = panel
    return real, panels


# ---------------------------------------------------------------- samples


def evaluation_span(config, errors: dict[str, ErrorPanel]):
    targets = sorted({t for e in errors.values() for t in e.targets})
    first = config.sample_start or (targets[0] if targets else None)
    last = config.sample_end or (targets[-1] if targets else None)
    return first, last


def resolve_cut(config, first, last):
    """Explicit cut, or the midpoint of the evaluation span (first half gets
    the extra quarter when the span is odd)."""
    if config.cut is not None:
        return config.cut
    if not config.auto_cut or first is None or last - first < 1:
        return None
    n = last - first + 1
    return first + ((n + 1) // 2 - 1)


def samples(config, errors):
    """``[(name, first, last)]`` target windows: full and, with a cut, sub1/sub2."""
    first, last = evaluation_span(config, errors)
    out = [("full", first, last)]
    cut = resolve_cut(config, first, last)
    if cut is not None:
        out.append(("sub1", first, cut))
        out.append(("sub2", cut + 1, last))
    return out


def _in(t, first, last):
    return (first is None or t >= first) and (last is None or t <= last)


# ---------------------------------------------------------------- grids


def summary_rows(config, real, panels):
    errors = {label: build_error_panel(p, real) for label, p in panels.items()}
    cells = [
        (label, h, name, first, last)
        for label in panels
        for name, first, last in samples(config, errors)
        for h in config.horizons
    ]

    def cell(c):
        label, h, name, first, last = c
        e = [v for t, v in errors[label].at_horizon(h).items() if _in(t, first, last)]
        row = {"source": label, "horizon": h, "sample": name, "status": "ok"}
        row.update({k: None for k in SUMMARY_FIELDS})
        row["n"] = len(e)
        if not e:
            row["status"] = "no observations"
            return row
        try:
            row.update(summarize(e).as_dict())
        except ComputationError as exc:
            row["status"] = exc.reason
            partial = getattr(exc, "partial", None)
            if partial:
                row.update(partial)
        return row

    return _map(cell, cells, config.jobs)


def pairs(config, panels):
    labels = list(panels)
    if len(labels) < 2:
        raise ConfigError("comparisons need at least two forecast sources")
    cand = config.candidate or labels[0]
    if cand not in panels:
        raise ConfigError(f"candidate {cand!r} is not among the sources {labels}")
    out = [(cand, other) for other in labels if other != cand]
    if config.reverse:
        out = [(b, a) for a, b in out]
    return out


def compare_rows(config, real, panels):
    errors = {label: build_error_panel(p, real) for label, p in panels.items()}
    cells = [
        (a, b, name, first, last, spec, h)
        for a, b in pairs(config, panels)
        for name, first, last in samples(config, errors)
        for spec in config.losses
        for h in config.horizons
    ]

    def cell(c):
        a, b, name, first, last, spec, h = c
        row = {"first": a, "second": b, "sample": name, "loss": spec.label, "horizon": h,
               "status": "ok"}
        row.update({k: None for k in DM_FIELDS})
        try:
            res = compare_forecasts(errors[a], errors[b], spec, h, (first, last), config.cv_source)
            row.update({k: getattr(res, k) for k in DM_FIELDS})
        except ComputationError as exc:
            row["status"] = exc.reason
        return row

    return _map(cell, cells, config.jobs)


def compare_plot_rows(rows):
    """Tidy points: one per (pair, sample, horizon, series)."""
    out = []
    seen = set()
    for r in rows:
        key = {"first": r["first"], "second": r["second"], "sample": r["sample"], "horizon": r["horizon"]}
        out.append({**key, "series": r["loss"], "value": r["statistic"]})
    # critical values depend on n only, so one set of lines per key
    for r in rows:
        key = {"first": r["first"], "second": r["second"], "sample": r["sample"], "horizon": r["horizon"]}
        if r["status"] != "ok" or tuple(key.values()) in seen:
            continue
        seen.add(tuple(key.values()))
        for lv in ("cv10", "cv05"):
            out.append({**key, "series": f"{lv}_upper", "value": r[lv]})
            out.append({**key, "series": f"{lv}_lower", "value": -r[lv]})
    return out


def mz_rows(config, real, panels):
    errors = {label: build_error_panel(p, real) for label, p in panels.items()}
    cells = [
        (label, name, first, last, h)
        for label in panels
        for name, first, last in samples(config, errors)
        for h in config.horizons
    ]

    def cell(c):
        label, name, first, last, h = c
        fc = panels[label].at_horizon(h)
        targets = [t for t in sorted(fc) if t in real and _in(t, first, last)]
        row = {"source": label, "sample": name, "horizon": h, "status": "ok"}
        row.update({k: None for k in MZ_FIELDS})
        row["n"] = len(targets)
        try:
            res = mz_regression([fc[t] for t in targets], [real[t] for t in targets], config.mz_bandwidth)
            row.update(res.as_dict())
        except ComputationError as exc:
            row["status"] = exc.reason
        return row

    return _map(cell, cells, config.jobs)


def mz_plot_rows(config, real, panels):
    out = []
    for label, panel in panels.items():
        for h in config.horizons:
            for t, f in sorted(panel.at_horizon(h).items()):
                if t in real and _in(t, config.sample_start, config.sample_end):
                    out.append({"source": label, "horizon": h, "target": str(t), "forecast": f,
                                "realization": real[t]})
    return out


def fluct_rows(config, real, panels):
    errors = {label: build_error_panel(p, real) for label, p in panels.items()}
    first, last = evaluation_span(config, errors)
    if first is None or last - first + 1 < config.fluct_window:
        raise ComputationError(
            f"fluctuation window {config.fluct_window} is longer than the evaluation span"
        )
    errors = {k: e.restrict(first, last) for k, e in errors.items()}
    cells = [
        (a, b, spec, h)
        for a, b in pairs(config, panels)
        for spec in config.losses
        for h in config.horizons
    ]

    def cell(c):
        a, b, spec, h = c
        base = {"first": a, "second": b, "loss": spec.label, "horizon": h}
        try:
            path = fluctuation_dm(errors[a], errors[b], spec, h, config.fluct_window, config.cv_source)
        except ComputationError as exc:
            return [{**base, "window_end": None, "status": exc.reason,
                     **{k: None for k in DM_FIELDS}}]
        rows = []
        for pt in path:
            row = {**base, "window_end": str(pt.end), "status": pt.reason or "ok"}
            row.update({k: (getattr(pt.outcome, k) if pt.outcome else None) for k in DM_FIELDS})
            rows.append(row)
        return rows

    return [r for chunk in _map(cell, cells, config.jobs) for r in chunk]


def fluct_plot_rows(rows):
    out = []
    for r in rows:
        if r["window_end"] is None:
            continue
        key = {"first": r["first"], "second": r["second"], "horizon": r["horizon"],
               "window_end": r["window_end"]}
        out.append({**key, "series": r["loss"], "value": r["statistic"]})
        if r["status"] == "ok":
            for lv in ("cv10", "cv05"):
                out.append({**key, "series": f"{lv}_{r['loss']}", "value": r[lv]})
    return out


# ---------------------------------------------------------------- writers


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format_float(v)
    return str(v)


def rows_to_csv(rows, columns) -> str:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if isinstance(v, QuarterlyPeriod):
        return str(v)
    return v


def rows_to_json(rows, meta) -> str:
    payload = {"meta": meta, "rows": [{k: _json_safe(v) for k, v in r.items()} for r in rows]}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def rows_to_text(rows, columns, digits=3) -> str:
    """Right-aligned fixed-width table."""

    def fmt(v):
        if v is None:
            return "-"
        if isinstance(v, bool):
            return "yes" if v else "no"
        if isinstance(v, float):
            return f"{v:.{digits}f}"
        return str(v)

    table = [list(columns)] + [[fmt(r.get(c)) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(columns))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in table]
    return "\n".join(lines) + "\n"


def write_outputs(out_dir, stem, rows, columns, meta, text_columns=None, plot=None):
    """Write ``<stem>.csv``, ``<stem>.json`` and optionally ``<stem>.txt`` and
    ``<stem>_plot.csv``. Returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def put(name, text):
        p = out_dir / name
        with open(p, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        written.append(p)

    put(f"{stem}.csv", rows_to_csv(rows, columns))
    put(f"{stem}.json", rows_to_json(rows, meta))
    if text_columns:
        put(f"{stem}.txt", rows_to_text(rows, text_columns))
    if plot is not None:
        plot_rows, plot_columns = plot
        put(f"{stem}_plot.csv", rows_to_csv(plot_rows, plot_columns))
    return written
