"""Discrete Fourier machinery on `Grid2D` fields.

Spectra keep numpy's ordering: DC at ``[0, 0]`` and indices above ``N/2``
standing for negative frequencies.  Physical frequencies are always read
through `freq_at` / `frequency_grid`, never from raw indices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core.geometry import Field2D, FilterSpec, Grid2D, as_direction, check_pair, det2


class ShiftResidueError(RuntimeError):
    """A real-valued shift produced a non-negligible imaginary part."""


@dataclass(frozen=True)
class Spectrum2D:
    """Unnormalised 2D DFT of a field on ``grid``."""

    grid: Grid2D
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != self.grid.shape:
            raise ValueError(f"coefficient shape {coeffs.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def shape(self):
        return self.coeffs.shape

    def frequencies(self):
        return frequency_grid(self.grid)

    def with_coeffs(self, coeffs) -> "Spectrum2D":
        return Spectrum2D(self.grid, coeffs)


def dft2(field: Field2D) -> Spectrum2D:
    """Unnormalised forward transform ``sum x[n, m] exp(-i 2 pi (n k / Ny + m l / Nt))``."""
    return Spectrum2D(field.grid, np.fft.fft2(field.values))


def idft2(spec: Spectrum2D, real: bool = True) -> Field2D:
    """Inverse transform with the ``1 / (Nt Ny)`` normalisation.

    With ``real=True`` the imaginary part is dropped; it is only roundoff when
    the spectrum is conjugate symmetric.
    """
    values = np.fft.ifft2(spec.coeffs)
    return Field2D(spec.grid, values.real if real else values)


def axis_frequencies(n: int, spacing: float) -> np.ndarray:
    """Signed frequencies ``k / (n * spacing)`` in DFT order."""
    return np.fft.fftfreq(n, d=spacing)


def frequency_grid(grid: Grid2D) -> tuple[np.ndarray, np.ndarray]:
    """``(w_t, w_y)`` arrays of shape ``(ny, nt)`` for every DFT coefficient."""
    wt = axis_frequencies(grid.nt, grid.dt)
    wy = axis_frequencies(grid.ny, grid.dy)
    return np.meshgrid(wt, wy)


def freq_at(spec, n: int, m: int) -> tuple[float, float]:
    """Physical frequency ``(w_t, w_y)`` of coefficient ``[n, m]``."""
    grid = spec.grid if hasattr(spec, "grid") else spec
    if not (0 <= n < grid.ny and 0 <= m < grid.nt):
        raise IndexError(f"coefficient index {(n, m)} outside {grid.shape}")
    return (float(axis_frequencies(grid.nt, grid.dt)[m]), float(axis_frequencies(grid.ny, grid.dy)[n]))


def _shift_phasor(length: int, shifts) -> np.ndarray:
    """``exp(-i 2 pi k s / L)`` over signed bins ``k``; shape ``(L, len(shifts))``.

    The Nyquist bin of an even length is split evenly between ``+L/2`` and
    ``-L/2``, which turns its phasor into ``cos(pi s)`` and keeps the output
    of a real signal real.
    """
    s = np.atleast_1d(np.asarray(shifts, dtype=float))
    k = np.fft.fftfreq(length) * length
    phase = np.exp(-2j * np.pi * np.outer(k, s) / length)
    if length % 2 == 0:
        phase[length // 2] = np.cos(np.pi * s)
    return phase


def non_int_shift(x, s, p: int = 0, fill=None, check_real: bool = True) -> np.ndarray:
    """Fourier-shift a sampled signal by non-integer sample counts.

    The signal is extended as ``[x, 0 * p, fill]``, transformed, multiplied by
    a linear phase per requested shift and transformed back, so that output
    sample ``n`` approximates ``x(n - s)``.

    Parameters
    ----------
    x : array_like, shape (N,) or (N, K)
        Signal(s) along axis 0.  Columns of a 2D input are shifted
        independently.
    s : float or array_like, shape (S,)
        Shift(s) in samples.  A 1D ``x`` against ``S`` shifts yields ``S``
        columns; a 2D ``x`` against one shift shifts every column; a 2D ``x``
        with ``K`` shifts pairs them column by column.
    p : int
        Number of zeros appended after ``x``.
    fill : array_like, optional
        Samples appended after the zeros; they wrap around to sit just before
        ``x[0]``.

    Returns
    -------
    ndarray, shape (N + p + len(fill), S or K)
        Real part for real input (after checking the discarded imaginary part
        is below ``1e-8`` of the signal norm); complex input stays complex.
    """
    x = np.asarray(x)
    if p < 0:
        raise ValueError("padding p must be non-negative")
    one_d = x.ndim == 1
    cols = x[:, None] if one_d else x
    parts = [cols, np.zeros((int(p), cols.shape[1]), dtype=cols.dtype)]
    if fill is not None:
        f = np.asarray(fill)
        f = f[:, None] if f.ndim == 1 else f
        parts.append(np.broadcast_to(f, (f.shape[0], cols.shape[1])))
    ext = np.concatenate(parts, axis=0)
    length = ext.shape[0]
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if s_arr.ndim != 1:
        raise ValueError("shifts must be a scalar or a 1D array")
    if cols.shape[1] > 1 and s_arr.size > 1 and s_arr.size != cols.shape[1]:
        raise ValueError("a 2D signal needs one shift or one shift per column")
    spec = np.fft.fft(ext, axis=0)
    z = np.fft.ifft(spec * _shift_phasor(length, s_arr), axis=0)
    if np.iscomplexobj(x):
        return z
    if check_real:
        norm = np.linalg.norm(ext) * np.sqrt(z.shape[1] / ext.shape[1])
        resid = np.linalg.norm(z.imag)
        if resid > 1e-8 * max(norm, np.finfo(float).tiny):
            raise ShiftResidueError(f"imaginary residue {resid:.3g} exceeds 1e-8 of signal norm {norm:.3g}")
    return z.real


def default_pad(n: int) -> int:
    return max(n // 8, 16)


def _shift_axis(values: np.ndarray, shift: float, pad: int, axis: int) -> np.ndarray:
    if shift == 0.0:
        return values
    moved = np.moveaxis(values, axis, 0)
    n = moved.shape[0]
    flat = moved.reshape(n, -1)
    out = non_int_shift(flat, shift, pad)[:n]
    return np.moveaxis(out.reshape(moved.shape), 0, axis)


def shift2d(field: Field2D, delta, p: int | None = None) -> Field2D:
    """Translate a field by ``delta = (d_t, d_y)`` in physical units.

    Output sample at ``x`` approximates the input at ``x - delta``.  Rows are
    shifted first, then columns, each through `non_int_shift` with ``p`` zeros
    of padding (default ``max(N/8, 16)`` per axis); the result is cropped back
    to the input grid.
    """
    if field.values.size == 0:
        raise ValueError("cannot shift an empty field")
    d_t, d_y = (float(v) for v in delta)
    grid = field.grid
    s_t = d_t / grid.dt
    s_y = d_y / grid.dy
    pad_t = default_pad(grid.nt) if p is None else int(p)
    pad_y = default_pad(grid.ny) if p is None else int(p)
    out = _shift_axis(field.values, s_t, pad_t, axis=1)
    out = _shift_axis(out, s_y, pad_y, axis=0)
    return field.with_values(np.array(out, copy=True))


def psf_hat(w, spec: FilterSpec) -> np.ndarray:
    """Fourier transform of the four-impulse PSF, ``-4 sin(pi a_i w.ti) sin(pi a_j w.tj)``."""
    w = np.asarray(w, dtype=float)
    wi = w @ spec.theta_i.vec
    wj = w @ spec.theta_j.vec
    return -4.0 * np.sin(np.pi * spec.a_i * wi) * np.sin(np.pi * spec.a_j * wj)


def parallelogram_ft(w, theta_i, theta_j, a_i: float, a_j: float) -> np.ndarray:
    """Fourier transform of the origin-centred parallelogram indicator.

    Edges of length ``a_i`` along ``theta_i`` and ``a_j`` along ``theta_j``;
    ``sinc`` is the normalised ``sin(pi x) / (pi x)``.
    """
    theta_i, theta_j = as_direction(theta_i), as_direction(theta_j)
    check_pair(theta_i, theta_j)
    if not (a_i > 0 and a_j > 0):
        raise ValueError("edge lengths must be positive")
    w = np.asarray(w, dtype=float)
    area = a_i * a_j * abs(det2(theta_i, theta_j))
    return area * np.sinc(a_j * (w @ theta_j.vec)) * np.sinc(a_i * (w @ theta_i.vec))


def grid_phase(grid: Grid2D) -> np.ndarray:
    """``exp(-i 2 pi w . x_origin)``: converts a DFT into continuous-FT phase.

    ``dt * dy * dft2(samples) * grid_phase`` approximates the continuous
    Fourier transform at the DFT frequencies.
    """
    wt, wy = frequency_grid(grid)
    return np.exp(-2j * np.pi * (wt * grid.t0 + wy * grid.y0))
