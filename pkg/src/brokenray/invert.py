"""Frequency-domain inversion of broken-ray data with bounded support.

The system function of the transform (delta terms excluded) is

    h(w) = -w.(theta_i + theta_j) / (i 2 pi (w.theta_i)(w.theta_j)),

sampled at the signed DFT frequencies of the data grid.  Its Tikhonov
pseudo-inverse ``K`` turns filtered data into the filtered image; the four
non-overlapping copies of that image are then reassembled, or the data are
integrated once along ``theta_i + theta_j`` to obtain a blurred image.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core.geometry import Field2D, FilterSpec, Grid2D, Parallelogram, as_direction, check_pair
from .spectral import Spectrum2D, dft2, frequency_grid, idft2, shift2d

NULLSPACE_TOL = 1e-9


class SingularFrequencyError(ValueError):
    """The system function was requested where its denominator vanishes."""


class ShiftBoundError(ValueError):
    """PSF shifts too short for the copies of the image to separate."""


def _dirs(xi_i, xi_j):
    ti, tj = as_direction(xi_i), as_direction(xi_j)
    check_pair(ti, tj)
    return ti, tj


def _projections(wt, wy, ti, tj):
    wi = wt * ti.vec[0] + wy * ti.vec[1]
    wj = wt * tj.vec[0] + wy * tj.vec[1]
    return wi, wj


def _h_from_projections(wi, wj):
    # written as i * real so the real part is exactly zero
    return 1j * ((wi + wj) / (2.0 * np.pi * (wi * wj)))


def h_hat(w_t, w_y, xi_i, xi_j):
    """System function at ``w = (w_t, w_y)``; symmetric in ``(xi_i, xi_j)``.

    Raises `SingularFrequencyError` where ``(w.theta_i)(w.theta_j) = 0``.
    """
    ti, tj = _dirs(xi_i, xi_j)
    wt, wy = np.asarray(w_t, dtype=float), np.asarray(w_y, dtype=float)
    wi, wj = _projections(wt, wy, ti, tj)
    d = wi * wj
    if np.any(d == 0):
        raise SingularFrequencyError("denominator (w.theta_i)(w.theta_j) vanishes")
    out = _h_from_projections(wi, wj)
    out = np.asarray(out)
    return complex(out) if out.ndim == 0 else out


def h_hat_polar(rho, phi, xi_i, xi_j):
    """System function in polar frequency coordinates ``w = rho (cos phi, sin phi)``."""
    _dirs(xi_i, xi_j)
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(rho <= 0):
        raise ValueError("rho must be positive")
    ci = np.cos(phi - xi_i)
    cj = np.cos(phi - xi_j)
    if np.any(np.abs(ci * cj) < 1e-12):
        raise SingularFrequencyError("phi lies on a singular line xi +- pi/2")
    num = np.cos(phi - 0.5 * (xi_i + xi_j)) * np.cos(0.5 * (xi_i - xi_j))
    out = 1j * (num / (np.pi * rho * ci * cj))
    out = np.asarray(out)
    return complex(out) if out.ndim == 0 else out


def nyquist_mask(grid: Grid2D) -> np.ndarray:
    """Coefficients on the unpaired Nyquist row/column of even-length axes."""
    mask = np.zeros(grid.shape, dtype=bool)
    if grid.ny % 2 == 0:
        mask[grid.ny // 2, :] = True
    if grid.nt % 2 == 0:
        mask[:, grid.nt // 2] = True
    return mask


def nullspace_mask(grid: Grid2D, xi_i, xi_j, tol: float = NULLSPACE_TOL) -> np.ndarray:
    """Frequencies with ``|w.(theta_i + theta_j)| <= tol * |w|``, plus DC."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    ti, tj = _dirs(xi_i, xi_j)
    wt, wy = frequency_grid(grid)
    wi, wj = _projections(wt, wy, ti, tj)
    mask = np.abs(wi + wj) <= tol * np.hypot(wt, wy)
    mask[0, 0] = True
    return mask


@dataclass(frozen=True)
class SystemSpectrum:
    """Samples ``H`` of the system function on a grid's DFT frequencies.

    ``H`` is zero where the denominator vanishes (``denom_zero_mask``) and on
    the unpaired Nyquist row/column, so the matrix is odd and purely
    imaginary, the spectrum of a real kernel.  A factor ``w.theta`` counts as
    zero when ``|w.theta| <= tol * |w|``: ``cos``/``sin`` of exact multiples of
    ``pi/2`` carry ``1e-16`` residues that would otherwise leave singular
    lines at ``|H| ~ 1e15``.
    """

    grid: Grid2D
    H: np.ndarray
    denom_zero_mask: np.ndarray
    xi_i: float
    xi_j: float

    @classmethod
    def from_grid(cls, grid: Grid2D, xi_i, xi_j, tol: float = NULLSPACE_TOL) -> "SystemSpectrum":
        ti, tj = _dirs(xi_i, xi_j)
        wt, wy = frequency_grid(grid)
        wi, wj = _projections(wt, wy, ti, tj)
        rho = np.hypot(wt, wy)
        zero = (np.abs(wi) <= tol * rho) | (np.abs(wj) <= tol * rho)
        with np.errstate(divide="ignore", invalid="ignore"):
            H = _h_from_projections(wi, wj)
        H[zero | nyquist_mask(grid)] = 0.0
        return cls(grid, H, zero, ti.xi, tj.xi)


@dataclass(frozen=True)
class TikhonovSpec:
    """Smoothing parameter ``epsilon >= 0`` of the regularised inverse."""

    epsilon: float = 0.0

    def __post_init__(self):
        if not (self.epsilon >= 0 and math.isfinite(self.epsilon)):
            raise ValueError(f"epsilon must be a finite non-negative number, got {self.epsilon!r}")


def tikhonov_inverse(H: np.ndarray, epsilon: float, exclude=None) -> np.ndarray:
    """``conj(H) / (|H|^2 + epsilon)``, zero where excluded or where the ratio is 0/0."""
    TikhonovSpec(epsilon)
    denom = np.abs(H) ** 2 + epsilon
    ok = denom > 0
    if exclude is not None:
        ok &= ~exclude
    K = np.zeros(H.shape, dtype=complex)
    K[ok] = np.conj(H[ok]) / denom[ok]
    return K


def compute_K(grid: Grid2D, xi_i, xi_j, epsilon: float, null_tol: float = NULLSPACE_TOL) -> np.ndarray:
    """Regularised reciprocal of the sampled system function.

    Zero where the denominator vanishes, on the nullspace line (relative
    tolerance ``null_tol``), at DC and on the unpaired Nyquist bins.
    """
    sysm = SystemSpectrum.from_grid(grid, xi_i, xi_j)
    exclude = sysm.denom_zero_mask | nullspace_mask(grid, xi_i, xi_j, null_tol) | nyquist_mask(grid)
    return tikhonov_inverse(sysm.H, epsilon, exclude)


def brt_invert_filtered(G: Field2D, xi_i, xi_j, epsilon: float = 0.0) -> Field2D:
    """Filtered image ``Psi = IDFT(DFT(G) * K)`` from bounded-support data."""
    K = compute_K(G.grid, xi_i, xi_j, epsilon)
    spec = dft2(G)
    out = idft2(spec.with_coeffs(spec.coeffs * K))
    return out.with_values(out.values, kind="filtered-image", epsilon=float(epsilon))


def data_residual(G: Field2D, psi: Field2D, xi_i, xi_j) -> float:
    """``|| DFT(G) - DFT(Psi) * H ||`` over the frequencies the inverse uses."""
    sysm = SystemSpectrum.from_grid(G.grid, xi_i, xi_j)
    keep = ~(sysm.denom_zero_mask | nullspace_mask(G.grid, xi_i, xi_j) | nyquist_mask(G.grid))
    r = dft2(G).coeffs - dft2(psi).coeffs * sysm.H
    return float(np.linalg.norm(r[keep]))


def check_shift_bound(spec: FilterSpec, par: Parallelogram) -> None:
    if not (spec.a_i > par.alpha_i / 2 and spec.a_j > par.alpha_j / 2):
        raise ShiftBoundError(
            "shift lengths must satisfy a_i > alpha_i/2 and a_j > alpha_j/2 "
            f"(got a_i={spec.a_i:.4g} vs {par.alpha_i / 2:.4g}, a_j={spec.a_j:.4g} vs {par.alpha_j / 2:.4g})"
        )


def recover_unfiltered(psi_m: Field2D, spec: FilterSpec, parallelogram: Parallelogram, p: int | None = None) -> Field2D:
    """Reassemble the image from the four separated copies in the filtered image.

    With ``x = s_i theta_i + s_j theta_j`` the sign of ``(s_i, s_j)`` selects
    the copy ``+-Psi(x -+ h_i -+ h_j)`` whose other three terms vanish
    because they fall outside ``parallelogram``.
    """
    check_shift_bound(spec, parallelogram)
    hi = spec.a_i / 2 * spec.theta_i.vec
    hj = spec.a_j / 2 * spec.theta_j.vec
    s_i, s_j = parallelogram.coords(psi_m.grid.points())

    def copy(delta):
        # output(x) = psi(x - delta)
        return shift2d(psi_m, delta, p).values

    out = np.zeros(psi_m.shape)
    neg_i, neg_j = s_i <= 0, s_j <= 0
    cases = (
        (neg_i & neg_j, 1.0, hi + hj),
        (neg_i & ~neg_j, -1.0, hi - hj),
        (~neg_i & neg_j, -1.0, -hi + hj),
        (~neg_i & ~neg_j, 1.0, -hi - hj),
    )
    for mask, sign, delta in cases:
        if np.any(mask):
            out[mask] = sign * copy(delta)[mask]
    return psi_m.with_values(out, kind="image")


def recover_blurred(G_filtered: Field2D, spec: FilterSpec, epsilon: float = 0.0,
                    mean: float | None = None) -> Field2D:
    """Parallelogram-blurred image from filtered data.

    Divides the data spectrum by ``-i 2 pi a_i a_j w.(theta_i + theta_j)``
    through the same stabilised reciprocal as `compute_K`; nullspace,
    DC and Nyquist bins are set to zero.  The data carry no information
    about the image mean, so the result has zero mean unless ``mean`` (the
    mean of the image over the grid) is supplied.
    """
    grid = G_filtered.grid
    wt, wy = frequency_grid(grid)
    wi, wj = _projections(wt, wy, spec.theta_i, spec.theta_j)
    D = -2j * np.pi * spec.a_i * spec.a_j * (wi + wj)
    exclude = nullspace_mask(grid, spec.theta_i, spec.theta_j) | nyquist_mask(grid)
    Kp = tikhonov_inverse(D, epsilon, exclude)
    data = dft2(G_filtered)
    out = idft2(data.with_coeffs(data.coeffs * Kp))
    values = out.values if mean is None else out.values - out.values.mean() + float(mean)
    return out.with_values(values, kind="blurred-image", epsilon=float(epsilon))


def enforce_boundary(psi_hat: Spectrum2D) -> Spectrum2D:
    """Project a spectrum so every row and column sums to zero.

    Equivalent to zeroing the image on the ``t = t0`` column and ``y = y0``
    row.  The projection removes row means and column means and restores the
    grand mean, so it is orthogonal and idempotent.
    """
    X = psi_hat.coeffs
    ny, nt = X.shape
    rows = X.sum(axis=1, keepdims=True)
    cols = X.sum(axis=0, keepdims=True)
    total = X.sum()
    out = X - rows / nt - cols / ny + total / (nt * ny)
    return psi_hat.with_coeffs(out)


def directional_inverse(G: Field2D, xi_i, xi_j, variant: str = "forward") -> Field2D:
    """Spectral form of the derivative/integral reconstruction formulas.

    The data are integrated along ``u = (theta_i + theta_j)/|theta_i + theta_j|``
    over ``s >= 0`` (``"forward"``) or ``s <= 0`` (``"backward"``) and then
    differentiated along ``theta_i`` and ``theta_j``.  Off the nullspace line
    the two variants are algebraically identical, which makes their
    agreement a consistency check on the system function.
    """
    if variant not in ("forward", "backward"):
        raise ValueError("variant must be 'forward' or 'backward'")
    ti, tj = _dirs(xi_i, xi_j)
    grid = G.grid
    wt, wy = frequency_grid(grid)
    wi, wj = _projections(wt, wy, ti, tj)
    norm = float(np.linalg.norm(ti.vec + tj.vec))
    wu = (wi + wj) / norm
    exclude = nullspace_mask(grid, ti, tj) | nyquist_mask(grid)
    wu_safe = np.where(exclude, 1.0, wu)
    if variant == "forward":
        integ, lead = -1.0 / (2j * np.pi * wu_safe), 1.0 / norm
    else:
        integ, lead = 1.0 / (2j * np.pi * wu_safe), -1.0 / norm
    mult = lead * (2j * np.pi * wi) * (2j * np.pi * wj) * integ
    mult[exclude] = 0.0
    data = dft2(G)
    return idft2(data.with_coeffs(data.coeffs * mult))
