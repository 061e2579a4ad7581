"""Noise injection and error metrics."""

from __future__ import annotations

import numpy as np

from ..core.geometry import Field2D

GENERATOR = "numpy.random.PCG64"


def add_noise(field: Field2D, std_factor: float, seed: int = 0, reference_peak: float | None = None) -> Field2D:
    """Add i.i.d. Gaussian noise with ``sigma = std_factor * reference_peak``.

    ``reference_peak`` is the peak amplitude of the reference image; it
    defaults to ``max|field|``.  The generator and seed are recorded in the
    returned metadata.
    """
    if not std_factor >= 0:
        raise ValueError("std_factor must be non-negative")
    peak = float(np.max(np.abs(field.values))) if reference_peak is None else float(reference_peak)
    sigma = std_factor * peak
    meta = {"noise_sigma": sigma, "noise_seed": int(seed), "noise_generator": GENERATOR}
    if sigma == 0:
        return field.with_values(field.values.copy(), **meta)
    rng = np.random.default_rng(seed)
    return field.with_values(field.values + rng.normal(0.0, sigma, field.shape), **meta)


def metrics(estimate: Field2D, reference: Field2D) -> dict:
    """Peak absolute error, relative L2 error and peak error over reference peak."""
    if estimate.grid != reference.grid:
        raise ValueError("estimate and reference live on different grids")
    diff = np.abs(estimate.values - reference.values)
    ref_peak = float(np.max(np.abs(reference.values)))
    ref_norm = float(np.linalg.norm(reference.values))
    peak = float(diff.max())
    return {
        "peak_abs_err": peak,
        "rel_l2": float(np.linalg.norm(diff)) / ref_norm if ref_norm else float("nan"),
        "peak_abs_err_over_ref_peak": peak / ref_peak if ref_peak else float("nan"),
    }
