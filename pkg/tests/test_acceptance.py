"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

The lines are printed by each test and collected again in the
"acceptance criteria" section of the pytest terminal summary.
"""

import math

import numpy as np
import pytest

from brokenray import Field2D, Grid2D, ScatterConfig, cbt, radon, sbrt, sbrt_from_measurements, square
from brokenray.core.geometry import Direction, FilterSpec, Parallelogram
from brokenray.core.support import circumscribed_parallelogram, support_geometry
from brokenray.experiments import (
    FIG7_EPS,
    FIG7_XI_J,
    filtering_error,
    k_panels,
    k_structure,
    noisy_sweep,
    sbrt_filtering_error,
    square_reconstruction,
)
from brokenray.filtering import filtered_brt_analytic
from brokenray.invert import SystemSpectrum, brt_invert_filtered, compute_K
from brokenray.io import RunConfig, export_pgm
from brokenray.spectral import dft2, frequency_grid, grid_phase, idft2, non_int_shift, parallelogram_ft

from conftest import random_ellipse_phantom

FILTER_TOLERANCE = 0.05
# first verified run gave 0.0575; frozen with a little headroom, below the 10% ceiling
SQUARE_THRESHOLD = 0.065
SQUARE_CEILING = 0.10


@pytest.mark.criterion(1, "extend + filter matches analytic filtered data to < 5% of peak")
def test_filtering_error(acceptance):
    cfg = RunConfig()
    brt_ratio = filtering_error(cfg).peak_error_over_image_peak
    sbrt_ratio = sbrt_filtering_error(cfg, -math.pi / 5).peak_error_over_image_peak
    assert brt_ratio < FILTER_TOLERANCE
    assert sbrt_ratio < FILTER_TOLERANCE
    acceptance.passed(f"brt {brt_ratio:.4f}, sbrt {sbrt_ratio:.4f}")


@pytest.mark.criterion(2, "cone-beam support identities hold to 1e-12")
def test_support_identities(acceptance):
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(3):
        ph = random_ellipse_phantom(rng)
        for xi in rng.uniform(-math.pi, math.pi, 5):
            theta = Direction(float(xi))
            geom = support_geometry(ph, theta)
            x = rng.uniform(-2.5, 2.5, size=(4000, 2))
            v = x @ theta.perp
            b = cbt(ph, x, theta)
            r = radon(ph, v, theta)
            clear, shadow = geom.in_clear(x), geom.in_shadow(x)
            outside_band = (v < geom.v_minus) | (v > geom.v_plus)
            assert clear.sum() > 100 and shadow.sum() > 100
            # cone-beam data vanish in the clear region
            worst = max(worst, np.abs(b[clear]).max())
            # shadow data are Radon data
            worst = max(worst, np.abs(b[shadow] - r[shadow]).max())
            # Radon data are cone-beam data from the entry point, zero off the band
            vs = np.linspace(geom.v_minus - 0.3, geom.v_plus + 0.3, 301)
            entry = geom.f_minus(vs)
            hit = ~np.isnan(entry[:, 0])
            worst = max(worst, np.abs(radon(ph, vs[hit], theta) - cbt(ph, entry[hit], theta)).max())
            off = (vs < geom.v_minus) | (vs > geom.v_plus)
            worst = max(worst, np.abs(radon(ph, vs[off], theta)).max())
            # cone-beam equals Radon everywhere outside the band and in the shadow
            keep = shadow | outside_band
            worst = max(worst, np.abs(b[keep] - r[keep]).max())
    assert worst <= 1e-12
    acceptance.passed(f"max deviation {worst:.1e}")


@pytest.mark.criterion(3, "filtered data vanish outside the expanded parallelogram")
def test_bounded_support(acceptance):
    ph = square(0.25)
    spec = FilterSpec(math.pi, -math.pi / 4, 0.3, 0.2)
    par = circumscribed_parallelogram(ph, spec.theta_i, spec.theta_j)
    grown = Parallelogram(spec.theta_i, spec.theta_j, par.alpha_i + spec.a_i, par.alpha_j + spec.a_j)
    # the grown parallelogram spans about [-0.8, 0.8]; sample twice that
    grid = Grid2D.from_extent((-1.6, 1.6), (-1.6, 1.6), 321, 321)
    F = filtered_brt_analytic(ph, spec, grid).values
    outside = ~grown.contains(grid.points(), margin=1e-9)
    worst = float(np.abs(F[outside]).max())
    assert outside.sum() > 0.5 * outside.size
    assert worst <= 1e-12
    acceptance.passed(f"max outside {worst:.1e}")


@pytest.mark.criterion(4, "discrete inversion identity to 1e-8")
def test_discrete_inverse_identity(acceptance):
    grid = Grid2D(0.0, 0.0, 0.01, 0.01, 64, 80)
    worst = 0.0
    for xi_j in (math.pi / 11, -math.pi / 5, math.pi / 2):
        spec = dft2(Field2D(grid, np.random.default_rng(5).standard_normal(grid.shape)))
        keep = compute_K(grid, math.pi, xi_j, 0.0) != 0
        psi = idft2(spec.with_coeffs(np.where(keep, spec.coeffs, 0.0)))
        H = SystemSpectrum.from_grid(grid, math.pi, xi_j).H
        G = idft2(dft2(psi).with_coeffs(dft2(psi).coeffs * H))
        out = brt_invert_filtered(G, math.pi, xi_j, 0.0)
        worst = max(worst, np.linalg.norm(out.values - psi.values) / np.linalg.norm(psi.values))
    assert worst <= 1e-8
    acceptance.passed(f"rel L2 {worst:.1e}")


@pytest.mark.criterion(5, "noise-free square reconstruction within the frozen threshold")
def test_square_reconstruction(acceptance):
    res = square_reconstruction()
    assert res.rel_l2 <= SQUARE_THRESHOLD <= SQUARE_CEILING
    acceptance.passed(f"rel L2 {res.rel_l2:.4f} <= {SQUARE_THRESHOLD}")


@pytest.mark.criterion(6, "|K| troughs, ridge and ridge peak ordering")
def test_k_structure(acceptance):
    grid, panels = k_panels(math.pi)
    worst_offset, worst_trough = 0.0, 0.0
    for xj in FIG7_XI_J:
        peaks = []
        for eps in FIG7_EPS:
            ks = k_structure(panels[(eps, xj)], grid, math.pi, xj)
            # ridge along phi = xi_j / 2 (mod pi), within two angular bins
            worst_offset = max(worst_offset, ks.ridge_offset)
            assert ks.ridge_offset <= 2 * math.pi / len(ks.profile)
            # troughs along phi = pi/2 and phi = xi_j + pi/2, well below the median
            worst_trough = max(worst_trough, *ks.trough_ratios)
            assert max(ks.trough_ratios) < 0.1
            peaks.append(ks.peak)
        assert all(b <= a for a, b in zip(peaks, peaks[1:]))
    acceptance.passed(f"ridge offset {worst_offset:.3f} rad, trough ratio {worst_trough:.3f}")


@pytest.mark.criterion(7, "noisy sweep emits panels; residual non-decreasing in epsilon")
def test_noisy_sweep(acceptance, tmp_path):
    res = noisy_sweep(RunConfig())
    assert len(res.images) == len(FIG7_XI_J) * len(FIG7_EPS)
    for (xj, eps), img in res.images.items():
        assert np.isfinite(img.values).all()
        path = export_pgm(img, tmp_path / f"psi_{xj:.4f}_{eps:.0e}.pgm")
        assert path.stat().st_size > img.values.size * 2
    for xj in FIG7_XI_J:
        resid = [res.residuals[(xj, eps)] for eps in FIG7_EPS]
        assert all(b >= a for a, b in zip(resid, resid[1:])), resid
    acceptance.passed(f"{len(res.images)} panels written")


@pytest.mark.criterion(8, "parallelogram transform vs rasterized indicator DFT within 2%")
def test_parallelogram_ft_oracle(acceptance):
    grid = Grid2D.from_extent((-2, 2), (-2, 2), 512, 512)
    ti, tj = Direction(0.3), Direction(1.4)
    raster = Parallelogram(ti, tj, 0.6, 0.4).rasterize(grid, supersample=8)
    S = grid.dt * grid.dy * np.fft.fft2(raster) * grid_phase(grid)
    wt, wy = frequency_grid(grid)
    model = parallelogram_ft(np.stack([wt, wy], axis=-1), ti, tj, 0.6, 0.4)
    below = np.hypot(wt, wy) < 0.25 / grid.dt
    err = np.linalg.norm(S[below] - model[below]) / np.linalg.norm(model[below])
    assert err <= 0.02
    acceptance.passed(f"rel L2 {err:.4f}")


@pytest.mark.criterion(9, "non-integer shift: integer rotations and half-sample shifts")
def test_non_int_shift_exactness(acceptance):
    rng = np.random.default_rng(9)
    x = rng.standard_normal(50)
    worst_int = max(np.abs(non_int_shift(x, float(k))[:, 0] - np.roll(x, k)).max() for k in range(-7, 8))
    n = np.arange(64)
    tone = np.cos(2 * np.pi * 5 * n / 64) + 0.3 * np.sin(2 * np.pi * 11 * n / 64)
    shifted = non_int_shift(tone, 0.5)[:, 0]
    exact = np.cos(2 * np.pi * 5 * (n - 0.5) / 64) + 0.3 * np.sin(2 * np.pi * 11 * (n - 0.5) / 64)
    worst_half = np.abs(shifted - exact).max()
    assert worst_int <= 1e-10
    assert worst_half <= 1e-9
    acceptance.passed(f"integer {worst_int:.1e}, half-sample {worst_half:.1e}")


@pytest.mark.criterion(10, "differential measurements cancel the scatter density")
def test_sbrt_cancellation(acceptance):
    rng = np.random.default_rng(10)
    cfg = ScatterConfig(energy=60.0)

    def f(x, q):
        x = np.asarray(x, dtype=float)
        return 1.5 + np.sin(3 * x[..., 0]) ** 2 * np.exp(-q / 10.0) + 0.2 * np.cos(x[..., 1])

    worst = 0.0
    for _ in range(5):
        ph = random_ellipse_phantom(rng)
        xi_k = rng.uniform(-math.pi, math.pi)
        d = rng.uniform(0.3, 2.5)
        ti, tj = xi_k + d, xi_k - d
        for x in rng.uniform(-1, 1, size=(20, 2)):
            got = sbrt_from_measurements(f, ph, x, ti, tj, xi_k, cfg)
            worst = max(worst, abs(got - sbrt(ph, x, ti, tj)))
    assert worst <= 1e-12
    acceptance.passed(f"max deviation {worst:.1e}")
