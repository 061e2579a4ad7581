"""Exact cone-beam, broken-ray and Radon transforms of shape phantoms.

Points are arrays of shape ``(..., 2)``; results have shape ``(...)``.
Directions may be given as `Direction` objects or angles in radians.
"""

from __future__ import annotations

import numpy as np

from .geometry import Direction, Field2D, Grid2D, as_direction, check_pair
from .phantom import Phantom, segment_integral


def cbt(phantom: Phantom, x, theta) -> np.ndarray:
    """Cone-beam transform: integral of the density along ``x + t theta``, ``t >= 0``."""
    theta = as_direction(theta)
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape[:-1])
    for s in phantom:
        out += segment_integral(s, x, theta.vec)
    return out if out.ndim else float(out)


def brt(phantom: Phantom, x, theta_i, theta_j) -> np.ndarray:
    """Broken-ray transform, the sum of two cone-beam transforms sharing ``x``."""
    theta_i, theta_j = as_direction(theta_i), as_direction(theta_j)
    check_pair(theta_i, theta_j)
    return cbt(phantom, x, theta_i) + cbt(phantom, x, theta_j)


def sbrt(phantom: Phantom, x, theta_i, theta_j) -> np.ndarray:
    """Signed broken-ray transform ``-B(x, theta_i) + B(x, theta_j)``."""
    theta_i, theta_j = as_direction(theta_i), as_direction(theta_j)
    check_pair(theta_i, theta_j)
    return cbt(phantom, x, theta_j) - cbt(phantom, x, theta_i)


def radon(phantom: Phantom, v, theta) -> np.ndarray:
    """Line integral along ``{v theta^perp + t theta}``.

    Evaluated as a cone-beam transform started from a point on the line that
    lies behind the whole support, so it shares the chord kernel with `cbt`.
    """
    theta = as_direction(theta)
    v = np.asarray(v, dtype=float)
    t0 = -(phantom.bounding_radius() + 1.0)
    start = v[..., None] * theta.perp + t0 * theta.vec
    return cbt(phantom, start, theta)


def rasterize(phantom: Phantom, grid: Grid2D) -> Field2D:
    """Point samples of the density at every lattice point."""
    return Field2D(grid, phantom.evaluate(grid.points()))


def sample_cbt(phantom: Phantom, grid: Grid2D, theta) -> Field2D:
    return Field2D(grid, np.asarray(cbt(phantom, grid.points(), theta)))


def sample_brt(phantom: Phantom, grid: Grid2D, theta_i, theta_j) -> Field2D:
    """Analytic BRT sampled at the lattice points (scatter points)."""
    theta_i, theta_j = as_direction(theta_i), as_direction(theta_j)
    return Field2D(
        grid,
        np.asarray(brt(phantom, grid.points(), theta_i, theta_j)),
        {"xi_i": theta_i.xi, "xi_j": theta_j.xi, "kind": "brt"},
    )


def sample_sbrt(phantom: Phantom, grid: Grid2D, theta_i, theta_j) -> Field2D:
    theta_i, theta_j = as_direction(theta_i), as_direction(theta_j)
    return Field2D(
        grid,
        np.asarray(sbrt(phantom, grid.points(), theta_i, theta_j)),
        {"xi_i": theta_i.xi, "xi_j": theta_j.xi, "kind": "sbrt"},
    )


def sample_radon(phantom: Phantom, v, theta) -> np.ndarray:
    return np.asarray(radon(phantom, v, theta))


__all__ = [
    "Direction",
    "brt",
    "cbt",
    "radon",
    "rasterize",
    "sample_brt",
    "sample_cbt",
    "sample_radon",
    "sample_sbrt",
    "sbrt",
]
