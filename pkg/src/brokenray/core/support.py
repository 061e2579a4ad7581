"""Support geometry of a phantom relative to one or two scatter directions.

For a direction ``theta`` the plane splits into the support hull, the shadow
behind it (``x . theta`` smaller than the entry point, where cone-beam data
equal Radon data), and a clear region where cone-beam data vanish.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .geometry import Direction, Parallelogram, as_direction, check_pair, det2
from .phantom import Phantom


class Region(enum.IntEnum):
    """Partition of broken-ray data by which transform explains the value."""

    ZERO = 0
    SHADOW_I = 1      # only the theta_i shadow: G = R_i
    SHADOW_J = 2      # only the theta_j shadow: G = R_j
    SHADOW_IJ = 3     # both shadows: G = R_i + R_j
    C = 4             # support (hull): G is the raw broken-ray value


class _Status(enum.IntEnum):
    CLEAR = 0
    SHADOW = 1
    HULL = 2


@dataclass(frozen=True)
class SupportGeometry:
    """Band ``[v_minus, v_plus]`` of ``x . theta^perp`` and chord endpoints per line."""

    direction: Direction
    v_minus: float
    v_plus: float
    phantom: Phantom

    @property
    def width(self) -> float:
        return self.v_plus - self.v_minus

    def _chords(self, v):
        v = np.asarray(v, dtype=float)
        starts = v[..., None] * self.direction.perp
        lo = np.full(v.shape, np.nan)
        hi = np.full(v.shape, np.nan)
        with np.errstate(invalid="ignore"):
            for s in self.phantom:
                t_in, t_out = s.ray_interval(starts, self.direction.vec)
                lo = np.fmin(lo, t_in)
                hi = np.fmax(hi, t_out)
        return lo, hi

    def u_minus(self, v):
        """Smallest ``t`` with ``t theta + v theta^perp`` in the support (NaN off support)."""
        return self._chords(v)[0]

    def u_plus(self, v):
        return self._chords(v)[1]

    def f_minus(self, v) -> np.ndarray:
        """Entry point of the line ``v`` into the support."""
        v = np.asarray(v, dtype=float)
        return self.u_minus(v)[..., None] * self.direction.vec + v[..., None] * self.direction.perp

    def f_plus(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return self.u_plus(v)[..., None] * self.direction.vec + v[..., None] * self.direction.perp

    def status(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        v = x @ self.direction.perp
        s = x @ self.direction.vec
        lo, hi = self._chords(v)
        out = np.full(v.shape, _Status.CLEAR, dtype=np.int8)
        band = (v >= self.v_minus) & (v <= self.v_plus) & ~np.isnan(lo)
        out[band & (s < lo)] = _Status.SHADOW
        out[band & (s >= lo) & (s <= hi)] = _Status.HULL
        return out

    def in_shadow(self, x) -> np.ndarray:
        """Membership in the shadow ``C^-``."""
        return self.status(x) == _Status.SHADOW

    def in_clear(self, x) -> np.ndarray:
        """Membership in ``C^+ union V^- union V^+`` (cone-beam data vanish)."""
        return self.status(x) == _Status.CLEAR


def support_geometry(phantom: Phantom, theta) -> SupportGeometry:
    """Band of the phantom support seen from direction ``theta``.

    The band comes from the closed-form support function of each shape; the
    chord functions take the min/max over shapes crossing a line, so gaps
    between disjoint components are folded into the hull.
    """
    if phantom.is_empty:
        raise ValueError("support geometry needs a non-empty phantom")
    theta = as_direction(theta)
    v_minus, v_plus = phantom.extent(theta.perp)
    return SupportGeometry(theta, v_minus, v_plus, phantom)


def region_codes(x, geom_i: SupportGeometry, geom_j: SupportGeometry) -> np.ndarray:
    """Vectorised `classify_region`; returns an integer array of `Region` values."""
    si = geom_i.status(x)
    sj = geom_j.status(x)
    out = np.full(si.shape, Region.ZERO, dtype=np.int8)
    out[(si == _Status.SHADOW) & (sj == _Status.CLEAR)] = Region.SHADOW_I
    out[(sj == _Status.SHADOW) & (si == _Status.CLEAR)] = Region.SHADOW_J
    out[(si == _Status.SHADOW) & (sj == _Status.SHADOW)] = Region.SHADOW_IJ
    out[(si == _Status.HULL) | (sj == _Status.HULL)] = Region.C
    return out


def classify_region(x, geom_i: SupportGeometry, geom_j: SupportGeometry):
    """Which branch of the broken-ray partition the point ``x`` falls in."""
    codes = region_codes(x, geom_i, geom_j)
    if codes.ndim == 0:
        return Region(int(codes))
    return codes


def partition_value(phantom: Phantom, x, theta_i, theta_j) -> np.ndarray:
    """Broken-ray data assembled from the region partition alone.

    Inside the support the raw transform is used; in the shadows the
    appropriate Radon values, elsewhere zero.
    """
    from .transforms import brt, radon

    theta_i, theta_j = as_direction(theta_i), as_direction(theta_j)
    x = np.asarray(x, dtype=float)
    gi = support_geometry(phantom, theta_i)
    gj = support_geometry(phantom, theta_j)
    codes = region_codes(x, gi, gj)
    ri = radon(phantom, x @ theta_i.perp, theta_i)
    rj = radon(phantom, x @ theta_j.perp, theta_j)
    out = np.zeros(codes.shape)
    out = np.where(codes == Region.SHADOW_I, ri, out)
    out = np.where(codes == Region.SHADOW_J, rj, out)
    out = np.where(codes == Region.SHADOW_IJ, ri + rj, out)
    inside = codes == Region.C
    if np.any(inside):
        out[inside] = brt(phantom, x[inside], theta_i, theta_j)
    return out


def is_centered(phantom: Phantom, theta_i, theta_j, tol: float = 1e-9) -> bool:
    for theta in (as_direction(theta_i), as_direction(theta_j)):
        lo, hi = phantom.extent(theta.perp)
        if abs(lo + hi) > tol:
            return False
    return True


def circumscribed_parallelogram(phantom: Phantom, theta_i, theta_j) -> Parallelogram:
    """Smallest origin-centred parallelogram with edges along the two directions
    that contains the support.

    For a centred phantom this is the circumscribed parallelogram exactly;
    otherwise the band widths are doubled about the origin so the result
    still contains the support.
    """
    theta_i, theta_j = as_direction(theta_i), as_direction(theta_j)
    check_pair(theta_i, theta_j)
    widths = []
    for theta in (theta_i, theta_j):
        lo, hi = phantom.extent(theta.perp)
        widths.append(2.0 * max(abs(lo), abs(hi)))
    v_i, v_j = widths
    d = abs(det2(theta_i, theta_j))
    return Parallelogram(theta_i, theta_j, alpha_i=v_j / d, alpha_j=v_i / d)
