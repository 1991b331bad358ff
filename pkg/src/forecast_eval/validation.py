"""Input validation helpers shared by the estimators and test functions."""

import numbers

import numpy as np

from .exceptions import InsufficientObservationsError


def check_series(x, name="x", min_length=1, dtype=np.float64):
    """Return ``x`` as a finite 1-D float array.

    Raises ``ValueError`` for wrong shape or non-finite values and
    ``InsufficientObservationsError`` when shorter than ``min_length``.
    """
    arr = np.asarray(x, dtype=dtype)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    if arr.shape[0] < min_length:
        raise InsufficientObservationsError(
            f"insufficient observations: {name} has {arr.shape[0]}, need at least {min_length}"
        )
    return arr


def check_paired(a, b, names=("a", "b"), min_length=1):
    """Validate two equal-length series."""
    a = check_series(a, names[0])
    b = check_series(b, names[1])
    if a.shape != b.shape:
        raise ValueError(
            f"length mismatch: {names[0]} has {a.shape[0]} values, {names[1]} has {b.shape[0]}"
        )
    if a.shape[0] < min_length:
        raise InsufficientObservationsError(
            f"insufficient observations: {a.shape[0]} paired values, need at least {min_length}"
        )
    return a, b


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_horizons(horizons):
    """Sorted unique nonnegative integer horizons."""
    out = set()
    for h in np.atleast_1d(horizons).tolist():
        if isinstance(h, bool) or int(h) != h or h < 0:
            raise ValueError(f"horizons must be nonnegative integers, got {h!r}")
        out.add(int(h))
    if not out:
        raise ValueError("at least one horizon is required")
    return sorted(out)
