"""Argument checks shared by the estimator wrappers and the command line."""

from __future__ import annotations

import math
import numbers

import numpy as np

from .core.geometry import Field2D, Grid2D


def check_field(X, grid: Grid2D | None = None, name: str = "X") -> Field2D:
    """Return ``X`` as a finite `Field2D`.

    Bare 2D arrays are accepted when ``grid`` is given.
    """
    if isinstance(X, Field2D):
        field = X
    else:
        arr = np.asarray(X)
        if arr.ndim != 2:
            raise ValueError(f"{name} must be a Field2D or a 2D array, got shape {arr.shape}")
        if grid is None:
            raise ValueError(f"{name} is a bare array; pass a grid to interpret it")
        field = Field2D(grid, arr)
    if field.values.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(field.values)):
        raise ValueError(f"{name} contains non-finite values")
    return field


def check_angle(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or not math.isfinite(value):
        raise ValueError(f"{name} must be a finite angle in radians, got {value!r}")
    return float(value)


def check_positive(value, name: str, allow_none: bool = False):
    if value is None and allow_none:
        return None
    if not isinstance(value, numbers.Real) or not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return float(value)


def check_non_negative(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or not (value >= 0 and math.isfinite(value)):
        raise ValueError(f"{name} must be non-negative and finite, got {value!r}")
    return float(value)


def check_count(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
    return int(value)
