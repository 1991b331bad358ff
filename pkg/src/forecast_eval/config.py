"""Evaluation configuration: flat ``key = value`` files plus overrides."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .exceptions import ConfigError
from .inference import CV_SOURCES
from .losses import DEFAULT_LOSSES, LossSpec
from .timeseries import QuarterlyPeriod

__all__ = ["EvalConfig", "read_config_file", "parse_horizons", "parse_losses", "build_config"]

DEFAULT_HORIZONS = (0, 1, 2, 4, 8, 12)
BENCHMARKS = ("rw", "ar")


@dataclass(frozen=True)
class EvalConfig:
    realizations: Path | None = None
    forecasts: tuple[tuple[str, Path], ...] = ()
    survey: Path | None = None
    horizons: tuple[int, ...] = DEFAULT_HORIZONS
    cut: QuarterlyPeriod | None = None
    auto_cut: bool = True
    losses: tuple[LossSpec, ...] = DEFAULT_LOSSES
    benchmarks: tuple[str, ...] = ()
    ar_window: int = 60
    p_max: int = 4
    availability_lag: int = 1
    cv_source: str = "fixed_b"
    candidate: str | None = None
    reverse: bool = False
    sample_start: QuarterlyPeriod | None = None
    sample_end: QuarterlyPeriod | None = None
    origin_start: QuarterlyPeriod | None = None
    origin_end: QuarterlyPeriod | None = None
    fluct_window: int = 20
    mz_bandwidth: int | None = None
    out: Path = Path(".")
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if not self.horizons or any(h < 0 for h in self.horizons):
            raise ConfigError("horizons must be a nonempty list of nonnegative integers")
        if not self.losses:
            raise ConfigError("at least one loss function is required")
        if self.cv_source not in CV_SOURCES:
            raise ConfigError(f"cv_source must be one of {', '.join(CV_SOURCES)}")
        for b in self.benchmarks:
            if b not in BENCHMARKS:
                raise ConfigError(f"unknown benchmark {b!r}; choose from {', '.join(BENCHMARKS)}")
        for name in ("ar_window", "p_max", "fluct_window", "jobs"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.availability_lag < 0:
            raise ConfigError("availability_lag must be nonnegative")

    def settings(self) -> dict:
        """Path-free settings, recorded in JSON outputs."""
        return {
            "horizons": list(self.horizons),
            "losses": [spec.label for spec in self.losses],
            "benchmarks": list(self.benchmarks),
            "ar_window": self.ar_window,
            "p_max": self.p_max,
            "availability_lag": self.availability_lag,
            "cv_source": self.cv_source,
            "reverse": self.reverse,
            "fluct_window": self.fluct_window,
            "seed": self.seed,
        }


def parse_horizons(text: str) -> tuple[int, ...]:
    """``"0,1,2,4"`` or ranges like ``"0-12"``."""
    out = set()
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "-" in part[1:]:
                lo, hi = part.split("-", 1)
                out.update(range(int(lo), int(hi) + 1))
            else:
                out.add(int(part))
    except ValueError:
        raise ConfigError(f"cannot parse horizons {text!r}") from None
    return tuple(sorted(out))


def parse_losses(text: str) -> tuple[LossSpec, ...]:
    # split on commas outside parentheses
    parts, depth, cur = [], 0, ""
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    try:
        return tuple(LossSpec.parse(p) for p in parts if p.strip())
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _period(text):
    try:
        return QuarterlyPeriod.parse(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _int(text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"not an integer: {text!r}") from None


def _list(text):
    t = text.strip().lower()
    if t in ("", "none"):
        return ()
    return tuple(p.strip().lower() for p in t.split(",") if p.strip())


_PATH_KEYS = {"realizations", "survey", "out"}
_CONVERTERS = {
    "horizons": parse_horizons,
    "losses": parse_losses,
    "benchmarks": _list,
    "ar_window": _int,
    "p_max": _int,
    "availability_lag": _int,
    "cv_source": str.strip,
    "candidate": str.strip,
    "reverse": _bool,
    "sample_start": _period,
    "sample_end": _period,
    "origin_start": _period,
    "origin_end": _period,
    "fluct_window": _int,
    "mz_bandwidth": _int,
    "seed": _int,
    "jobs": _int,
}


def _convert(key, raw, base: Path):
    if key in _PATH_KEYS:
        return base / raw.strip()
    if key == "cut":
        raw = raw.strip()
        if raw.lower() == "none":
            return {"cut": None, "auto_cut": False}
        if raw.lower() == "auto":
            return {"cut": None, "auto_cut": True}
        return {"cut": _period(raw), "auto_cut": False}
    if key not in _CONVERTERS:
        raise ConfigError(f"unknown configuration key {key!r}")
    return _CONVERTERS[key](raw)


def read_config_file(path) -> dict:
    """Parse a config file into keyword overrides for :class:`EvalConfig`.

    Lines are ``key = value``; ``#`` starts a comment. Forecast panels are
    given as ``forecast.<label> = path``. Relative paths resolve against the
    config file's directory.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    base = path.parent
    values: dict = {}
    forecasts = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        raw_key, raw = (s.strip() for s in line.split("=", 1))
        if raw_key.lower().startswith("forecast."):
            # labels keep their case
            forecasts.append((raw_key.split(".", 1)[1], base / raw))
            continue
        key = raw_key.lower().replace("-", "_")
        try:
            conv = _convert(key, raw, base)
        except ConfigError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
        if isinstance(conv, dict):
            values.update(conv)
        else:
            values[key] = conv
    if forecasts:
        values["forecasts"] = tuple(forecasts)
    return values


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> EvalConfig:
    """Combine config-file values with overrides; overrides win."""
    merged = dict(file_values or {})
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    known = {f.name for f in fields(EvalConfig)}
    unknown = set(merged) - known
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
    return replace(EvalConfig(), **merged)
