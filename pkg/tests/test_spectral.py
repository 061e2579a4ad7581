import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brokenray import Field2D, Grid2D, disk, sample_cbt
from brokenray.core.geometry import Direction, FilterSpec
from brokenray.spectral import (
    ShiftResidueError,
    Spectrum2D,
    dft2,
    freq_at,
    frequency_grid,
    grid_phase,
    idft2,
    non_int_shift,
    parallelogram_ft,
    psf_hat,
    shift2d,
)


def brute_dft2(x):
    ny, nt = x.shape
    n = np.arange(ny)[:, None]
    m = np.arange(nt)[None, :]
    out = np.zeros(x.shape, dtype=complex)
    for k in range(ny):
        for l in range(nt):
            out[k, l] = np.sum(x * np.exp(-2j * np.pi * (n * k / ny + m * l / nt)))
    return out


def test_dft2_matches_direct_sum(rng):
    grid = Grid2D(0, 0, 1, 1, 8, 8)
    x = rng.standard_normal(grid.shape)
    np.testing.assert_allclose(dft2(Field2D(grid, x)).coeffs, brute_dft2(x), atol=1e-10)


def test_dft2_trivial_cases():
    grid = Grid2D(0, 0, 1, 1, 6, 5)
    c = dft2(Field2D(grid, np.full(grid.shape, 3.0))).coeffs
    assert c[0, 0] == pytest.approx(3.0 * 30)
    assert np.max(np.abs(c.ravel()[1:])) < 1e-12
    impulse = np.zeros(grid.shape)
    impulse[0, 0] = 1.0
    np.testing.assert_allclose(dft2(Field2D(grid, impulse)).coeffs, 1.0)


@settings(max_examples=25, deadline=None)
@given(ny=st.integers(1, 12), nt=st.integers(1, 12), seed=st.integers(0, 1000))
def test_round_trip_parseval_and_symmetry(ny, nt, seed):
    x = np.random.default_rng(seed).standard_normal((ny, nt))
    grid = Grid2D(0, 0, 0.1, 0.2, nt, ny)
    spec = dft2(Field2D(grid, x))
    np.testing.assert_allclose(idft2(spec).values, x, atol=1e-10 * max(1, np.abs(x).max()))
    assert np.sum(x**2) == pytest.approx(np.sum(np.abs(spec.coeffs) ** 2) / (nt * ny), rel=1e-10)
    flipped = np.roll(spec.coeffs[::-1, ::-1], (1, 1), axis=(0, 1))
    np.testing.assert_allclose(flipped, np.conj(spec.coeffs), atol=1e-9)


def test_spectrum_shape_checked():
    with pytest.raises(ValueError):
        Spectrum2D(Grid2D(0, 0, 1, 1, 4, 4), np.zeros((3, 4)))


def test_freq_at_examples():
    grid = Grid2D.from_extent((-0.75, 0.75), (-1, 1), 400, 600)
    assert freq_at(grid, 0, 0) == (0.0, 0.0)
    assert freq_at(grid, 0, 1)[0] == pytest.approx(1 / 1.5)
    assert freq_at(grid, 599, 0)[1] == pytest.approx(-1 / (600 * grid.dy))
    with pytest.raises(IndexError):
        freq_at(grid, 600, 0)
    wt, wy = frequency_grid(grid)
    assert wt[3, 7] == pytest.approx(freq_at(grid, 3, 7)[0])
    assert wy[3, 7] == pytest.approx(freq_at(grid, 3, 7)[1])


# -- non-integer shift ---------------------------------------------------------------

def test_non_int_shift_identity_and_rotation():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    np.testing.assert_allclose(non_int_shift(x, 0.0)[:, 0], x, atol=1e-12)
    np.testing.assert_allclose(non_int_shift(x, 1.0)[:, 0], [4, 1, 2, 3], atol=1e-12)


@pytest.mark.parametrize("n", [63, 64])
def test_non_int_shift_bandlimited(n):
    k = np.arange(n)
    x = np.sin(2 * np.pi * 3 * k / n)
    y = non_int_shift(x, 0.5)[:, 0]
    np.testing.assert_allclose(y, np.sin(2 * np.pi * 3 * (k - 0.5) / n), atol=1e-9)


def test_non_int_shift_broadcasting_and_fill():
    x = np.arange(5.0)
    out = non_int_shift(x, [0.0, 1.0, 2.0], p=2, fill=[9.0])
    assert out.shape == (8, 3)
    # the fill sample wraps round to sit just before x[0]
    np.testing.assert_allclose(out[0, 1], 9.0, atol=1e-12)
    cols = np.stack([x, 2 * x], axis=1)
    np.testing.assert_allclose(non_int_shift(cols, [0.0, 1.0])[:, 1], np.roll(2 * x, 1), atol=1e-12)
    with pytest.raises(ValueError):
        non_int_shift(cols, [0.0, 1.0, 2.0])
    with pytest.raises(ValueError):
        non_int_shift(x, 0.5, p=-1)


def test_non_int_shift_complex_passthrough():
    z = np.exp(2j * np.pi * np.arange(8) / 8)
    assert np.iscomplexobj(non_int_shift(z, 0.25))


def test_shift_then_unshift_interior(rng):
    k = np.arange(128)
    x = np.exp(-((k - 64) / 9.0) ** 2)
    there = non_int_shift(x, 3.3, p=32)[:128, 0]
    back = non_int_shift(there, -3.3, p=32)[:128, 0]
    np.testing.assert_allclose(back[10:-10], x[10:-10], atol=1e-8)


def test_residue_check_is_silent_for_real_signals():
    assert non_int_shift(np.ones(7), 0.3).shape == (7, 1)
    assert ShiftResidueError.__mro__[1] is RuntimeError


# -- shift2d -------------------------------------------------------------------------

def test_shift2d_integer_and_identity(rng):
    grid = Grid2D(0, 0, 0.5, 0.25, 6, 5)
    F = Field2D(grid, rng.standard_normal(grid.shape))
    np.testing.assert_allclose(shift2d(F, (0.5, 0.0), p=0).values, np.roll(F.values, 1, axis=1), atol=1e-12)
    np.testing.assert_allclose(shift2d(F, (0.0, 0.0)).values, F.values)


def test_shift2d_gaussian():
    grid = Grid2D.from_extent((-1, 1), (-1, 1), 128, 96)

    def bump(p):
        return np.exp(-np.sum(p**2, axis=-1) / (2 * 0.1**2))

    F = Field2D(grid, bump(grid.points()))
    delta = np.array([0.3 * grid.dt, 0.7 * grid.dy])
    out = shift2d(F, delta)
    np.testing.assert_allclose(out.values, bump(grid.points() - delta), atol=1e-6)


# -- closed-form spectra -------------------------------------------------------------

def test_psf_hat_examples():
    spec = FilterSpec(0.4, 1.7, 0.3, 0.2)
    assert psf_hat(np.zeros(2), spec) == 0.0
    # w with w.ti = 1/(2 a_i), w.tj = 1/(2 a_j)
    A = np.array([spec.theta_i.vec, spec.theta_j.vec])
    w = np.linalg.solve(A, [1 / (2 * spec.a_i), 1 / (2 * spec.a_j)])
    assert psf_hat(w, spec) == pytest.approx(-4.0)


def test_psf_hat_matches_impulse_raster_dft():
    # lattice-aligned taps: theta_i = (-1, 0), theta_j = (0, 1)
    grid = Grid2D(-2.0, -2.0, 0.125, 0.125, 32, 32)
    spec = FilterSpec(math.pi, math.pi / 2, 0.5, 0.75)
    raster = np.zeros(grid.shape)
    for sign, off in spec.taps():
        # kernel m with g^m(x) = sum sign g(x + off): impulse at -off
        r, c = grid.index_of(-off[0], -off[1])
        raster[int(round(r)), int(round(c))] += sign
    spectrum = np.fft.fft2(raster) * grid_phase(grid)
    wt, wy = frequency_grid(grid)
    expected = psf_hat(np.stack([wt, wy], axis=-1), spec)
    np.testing.assert_allclose(spectrum, expected, atol=1e-10)


def test_parallelogram_ft_examples():
    ti, tj = Direction(0.2), Direction(1.3)
    area = 0.3 * 0.5 * abs(math.sin(1.1))
    assert parallelogram_ft(np.zeros(2), ti, tj, 0.3, 0.5) == pytest.approx(area)
    w = np.array([1.7, -0.9])
    rect = 0.3 * 0.5 * np.sinc(0.3 * w[0]) * np.sinc(0.5 * w[1])
    assert parallelogram_ft(w, Direction(0.0), Direction(math.pi / 2), 0.3, 0.5) == pytest.approx(rect)
    with pytest.raises(ValueError):
        parallelogram_ft(w, ti, tj, 0.0, 0.5)


def test_cbt_spectrum_matches_closed_form():
    """Single disk: DFT of a large CBT field vs. mu_hat(w) * (-1 / (i 2 pi w.theta)).

    With ``theta = (0, 1)`` the shadow is the Radon profile ``R(t)`` for all
    ``y`` below the disk, so the window cuts it at ``y = -L/2``.  That cut
    adds ``mu_hat(w_t, 0) (-1)^k / (i 2 pi w_y)`` at ``w_y = k / L``
    (projection slice), which is included in the model.  Away from the
    singular line ``w_y = 0`` the agreement is limited by aliasing.
    """
    from scipy.special import j1

    L, n, r = 16.0, 256, 0.5
    grid = Grid2D.from_extent((-L / 2, L / 2), (-L / 2, L / 2), n, n)
    F = sample_cbt(disk(r), grid, Direction(math.pi / 2))
    spec = grid.dt * grid.dy * np.fft.fft2(F.values) * grid_phase(grid)
    wt, wy = frequency_grid(grid)

    def disk_ft(rho):
        rho = np.asarray(rho, dtype=float)
        safe = np.where(rho > 0, rho, 1.0)
        return np.where(rho > 0, r * j1(2 * np.pi * r * safe) / safe, math.pi * r**2)

    k = np.rint(wy * L)
    with np.errstate(divide="ignore", invalid="ignore"):
        model = (-disk_ft(np.hypot(wt, wy)) + (-1.0) ** k * disk_ft(np.abs(wt))) / (2j * np.pi * wy)
    sel = (np.abs(wy) > 0.2) & (np.hypot(wt, wy) < 2.0)
    err = np.linalg.norm(spec[sel] - model[sel]) / np.linalg.norm(model[sel])
    assert err < 0.05
