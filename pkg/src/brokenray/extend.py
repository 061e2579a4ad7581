"""Extend truncated cone-beam / broken-ray data beyond the sampled window.

Behind the support, cone-beam data are constant along the integration
direction and equal the Radon transform, so samples on the window boundary
can be slid along ``-theta`` to fill the missing quadrants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core.geometry import Field2D, Grid2D
from .spectral import non_int_shift

DEFAULT_PAD = 16
MAX_EXTENSION = 1 << 14


class DataNotTruncatedError(ValueError):
    """Window corners that must lie outside the support carry non-zero data."""


@dataclass(frozen=True)
class ExtensionPlan:
    """Requested extension sizes.

    Parameters
    ----------
    m_t, m_y : int
        Samples to synthesise along ``-t`` and ``-y`` (behind the support
        along the second scatter direction).
    p : int
        Zero padding for the Fourier shifts.
    lam : float, optional
        ``(dt / dy) tan(xi)``; derived from the grid when omitted.
    m_right : int, optional
        Columns added by repeating the last column (``theta_i = (-1, 0)``
        shadow); defaults to ``m_t``.
    """

    m_t: int
    m_y: int
    p: int = DEFAULT_PAD
    lam: float | None = None
    m_right: int | None = None

    def __post_init__(self):
        for name in ("m_t", "m_y", "p"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")
            if v > MAX_EXTENSION:
                raise ValueError(f"{name}={v} exceeds the cap of {MAX_EXTENSION} samples")
        if self.m_right is not None and (int(self.m_right) != self.m_right or self.m_right < 0):
            raise ValueError("m_right must be a non-negative integer")
        if self.lam is not None and not math.isfinite(self.lam):
            raise ValueError("lam must be finite")

    @property
    def right(self) -> int:
        return self.m_t if self.m_right is None else int(self.m_right)

    def with_lam(self, lam: float) -> "ExtensionPlan":
        return ExtensionPlan(self.m_t, self.m_y, self.p, lam, self.m_right)


def shift_ratio(grid: Grid2D, xi: float) -> float:
    """``lambda = (dt / dy) tan(xi)``: samples of ``y`` travelled per column step."""
    return grid.dt / grid.dy * math.tan(xi)


def cbt_extend(b_y, b_t, lam: float, m_t: int, m_y: int, p: int = DEFAULT_PAD):
    """Synthesise quadrants 2-4 of cone-beam data from the first column and row.

    The sampled data ``B`` occupy the first quadrant; the integration direction
    points into it (``0 < xi < pi/2``) and the first row and column lie in the
    shadow, so they sample the Radon transform.

    Parameters
    ----------
    b_y : array_like, shape (Ny,)
        First column of ``B`` (minimum ``t``), ordered by increasing ``y``.
    b_t : array_like, shape (Nt,)
        First row of ``B`` (minimum ``y``), ordered by increasing ``t``.
    lam : float
        ``(dt / dy) tan(xi) > 0``.
    m_t, m_y : int
        Number of columns to the left and rows below to synthesise.
    p : int
        Zero padding passed to the Fourier shifts.

    Returns
    -------
    Q2 : ndarray, shape (Ny, m_t)
        Left of ``B``.
    Q3 : ndarray, shape (m_y, m_t)
        Below-left.
    Q4 : ndarray, shape (m_y, Nt)
        Below ``B``.
    """
    if not (lam > 0 and math.isfinite(lam)):
        raise ValueError(f"lambda must be positive (flip the data first); got {lam!r}")
    b_y = np.asarray(b_y, dtype=float)
    b_t = np.asarray(b_t, dtype=float)
    n_y, n_t = b_y.size, b_t.size
    m_t, m_y, p = int(m_t), int(m_y), int(p)

    if m_t:
        x_r = b_y
        x_l = b_t[1:1 + p][::-1]
        s = lam * np.arange(-m_t, 0)
        # zeros must cover the lambda*m_t samples read above the column
        p_w = p + max(m_y, math.ceil(lam * m_t))
        q2 = non_int_shift(x_r, s, p_w, x_l)[:n_y]
    else:
        q2 = np.zeros((n_y, 0))

    if not m_y:
        return q2, np.zeros((0, m_t)), np.zeros((0, n_t))

    top = q2[0] if m_t else np.zeros(0)
    x_r = np.concatenate([top, b_t])
    x_l = q2[1:1 + p, 0][::-1] if m_t else b_y[1:1 + p][::-1]
    s = np.arange(-m_y, 0) / lam
    p_w = p + math.ceil(m_y / lam)
    w = non_int_shift(x_r, s, p_w, x_l)
    q3 = w[:m_t].T
    q4 = w[m_t:m_t + n_t].T
    return q2, q3, q4


def check_truncated(G: Field2D, rtol: float = 1e-9) -> None:
    """The two right-hand corners must be (numerically) zero."""
    v = G.values
    scale = float(np.max(np.abs(v))) if v.size else 0.0
    tol = rtol * scale
    corners = (v[0, -1], v[-1, -1])
    if any(abs(c) > tol for c in corners):
        raise DataNotTruncatedError(
            "data not truncated outside support: corner samples "
            f"{corners[0]:.3g}, {corners[1]:.3g} exceed {tol:.3g}"
        )


def brt_extend(G: Field2D, xi_j: float, plan: ExtensionPlan, corner_rtol: float = 1e-9) -> Field2D:
    """Enlarge broken-ray data with ``theta_i = (-1, 0)`` and ``|xi_j| < pi/2``.

    The ``theta_i`` shadow is continued to the right by repeating the last
    column.  The ``theta_j`` shadow is rebuilt with `cbt_extend` from the
    first column together with the first row (``xi_j > 0``) or the last row
    (``xi_j < 0``, handled by flipping ``y``).

    Returns a field on an enlarged grid: ``plan.m_t`` columns on the left,
    ``plan.right`` on the right and ``plan.m_y`` rows below (``xi_j > 0``) or
    above (``xi_j < 0``).  ``corner_rtol`` bounds the right-hand corner
    samples relative to ``max|G|``; noisy data need it raised to the noise
    level.
    """
    xi_j = float(xi_j)
    if not abs(xi_j) < math.pi / 2:
        raise ValueError("brt_extend needs |xi_j| < pi/2")
    if xi_j == 0.0:
        raise ValueError("xi_j = 0 makes theta_j antiparallel to theta_i = (-1, 0)")
    check_truncated(G, corner_rtol)

    flip = xi_j < 0
    values = G.values[::-1] if flip else G.values
    grid = G.grid
    lam = shift_ratio(grid, abs(xi_j))
    q2, q3, q4 = cbt_extend(values[:, 0], values[0, :], lam, plan.m_t, plan.m_y, plan.p)

    right = plan.right
    n_y, n_t = values.shape
    out = np.zeros((plan.m_y + n_y, plan.m_t + n_t + right))
    out[:plan.m_y, :plan.m_t] = q3
    out[:plan.m_y, plan.m_t:plan.m_t + n_t] = q4
    out[plan.m_y:, :plan.m_t] = q2
    out[plan.m_y:, plan.m_t:plan.m_t + n_t] = values
    out[plan.m_y:, plan.m_t + n_t:] = values[:, -1:]

    if flip:
        out = out[::-1]
        new_grid = grid.enlarge(left=plan.m_t, right=right, above=plan.m_y)
    else:
        new_grid = grid.enlarge(left=plan.m_t, right=right, below=plan.m_y)
    return Field2D(new_grid, out, {**G.meta, "extended": (plan.m_t, plan.m_y, right), "xi_j": xi_j})


def embed(field: Field2D, grid: Grid2D) -> Field2D:
    """Place ``field`` on a larger aligned ``grid``, zero outside its samples."""
    r, c = grid.index_of(field.grid.t0, field.grid.y0)
    r0, c0 = int(round(r)), int(round(c))
    if abs(r - r0) > 1e-6 or abs(c - c0) > 1e-6:
        raise ValueError("field lattice is not aligned with the target grid")
    ny, nt = field.shape
    if r0 < 0 or c0 < 0 or r0 + ny > grid.ny or c0 + nt > grid.nt:
        raise ValueError("target grid does not contain the field")
    out = np.zeros(grid.shape, dtype=field.values.dtype)
    out[r0:r0 + ny, c0:c0 + nt] = field.values
    return Field2D(grid, out, dict(field.meta))
