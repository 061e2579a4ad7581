"""Single-scatter measurement model and the differential (signed) data it yields."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import as_direction
from .phantom import Phantom
from .transforms import brt

HC_KEV_ANGSTROM = 12.398419


class MomentumConditionError(ValueError):
    """Scatter directions do not share a scatter angle with the detector direction."""


@dataclass(frozen=True)
class ScatterConfig:
    """Beam energy in keV and the ``h*c`` product in keV*Angstrom."""

    energy: float
    hc: float = HC_KEV_ANGSTROM

    def __post_init__(self):
        if not (self.energy > 0 and math.isfinite(self.energy)):
            raise ValueError(f"energy must be positive, got {self.energy!r}")
        if not self.hc > 0:
            raise ValueError("hc must be positive")


def momentum_transfer(s, cfg: ScatterConfig):
    """Momentum transfer ``2 (E/hc) sqrt((1 - s)/2)`` for scatter-angle cosine ``s``."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(np.abs(s_arr) > 1.0) or not np.all(np.isfinite(s_arr)):
        raise ValueError("scatter-angle cosine must lie in [-1, 1]")
    q = 2.0 * (cfg.energy / cfg.hc) * np.sqrt((1.0 - s_arr) / 2.0)
    return float(q) if q.ndim == 0 else q


ScatterDensity = Callable[[np.ndarray, float], np.ndarray]


def log_measurement(f: ScatterDensity, mu: Phantom, x, theta_i, theta_j, cfg: ScatterConfig):
    """Log of the detected intensity: ``ln f(x, q(-theta_i.theta_j)) - G mu``.

    ``f(x, q)`` is the scatter density; it must be strictly positive.
    """
    theta_i, theta_j = as_direction(theta_i), as_direction(theta_j)
    x = np.asarray(x, dtype=float)
    q = momentum_transfer(-theta_i.dot(theta_j), cfg)
    dens = np.asarray(f(x, q), dtype=float)
    if np.any(~(dens > 0)):
        raise ValueError("scatter density must be strictly positive")
    out = np.log(dens) - brt(mu, x, theta_i, theta_j)
    return float(out) if np.ndim(out) == 0 else out


def sbrt_from_measurements(f: ScatterDensity, mu: Phantom, x, theta_i, theta_j, theta_k,
                           cfg: ScatterConfig, tol: float = 1e-12):
    """Difference of two log measurements sharing detector direction ``theta_k``.

    The scatter density cancels when ``theta_i . theta_k == theta_j . theta_k``,
    leaving the signed broken-ray transform of ``mu``.
    """
    theta_i, theta_j, theta_k = (as_direction(t) for t in (theta_i, theta_j, theta_k))
    if abs(theta_i.dot(theta_k) - theta_j.dot(theta_k)) > tol:
        raise MomentumConditionError(
            "theta_i . theta_k must equal theta_j . theta_k "
            f"(got {theta_i.dot(theta_k):.15g} vs {theta_j.dot(theta_k):.15g})"
        )
    return (log_measurement(f, mu, x, theta_i, theta_k, cfg)
            - log_measurement(f, mu, x, theta_j, theta_k, cfg))
