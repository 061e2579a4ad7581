"""End-to-end pipelines behind the figure reproductions.

Each function returns plain arrays/fields plus the numbers the acceptance
suite asserts on; the command line wraps them and writes panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core.geometry import Direction, Field2D, FilterSpec, Grid2D
from .core.phantom import Phantom, load_phantom, square
from .core.support import circumscribed_parallelogram
from .core.transforms import rasterize, sample_brt
from .extend import ExtensionPlan, brt_extend, embed
from .filtering import (
    apply_psf,
    default_filter_spec,
    filtered_brt_analytic,
    filtered_sbrt_analytic,
    sbrt_filter_spec,
)
from .invert import brt_invert_filtered, compute_K, data_residual, recover_unfiltered
from .io.config import RunConfig
from .io.noise import add_noise, metrics
from .spectral import frequency_grid

FIG7_XI_J = (math.pi / 20, math.pi / 7, math.pi / 4)
FIG7_EPS = (1e-6, 1e-5, 1e-4)


def extended_grid(grid: Grid2D, plan: ExtensionPlan) -> Grid2D:
    """Smallest grid holding `brt_extend` output for either sign of ``xi_j``."""
    return grid.enlarge(plan.m_t, plan.right, plan.m_y, plan.m_y)


def extend_and_filter(G: Field2D, xi_j: float, spec: FilterSpec, plan: ExtensionPlan,
                      target: Grid2D | None = None, corner_rtol: float = 1e-9) -> Field2D:
    """Extend truncated data (``theta_i = (-1, 0)``), filter, crop to ``target``.

    ``target`` defaults to the input grid; it must stay far enough from the
    extended edges for the PSF taps to read valid samples.
    """
    E = embed(brt_extend(G, xi_j, plan, corner_rtol), extended_grid(G.grid, plan))
    return apply_psf(E, spec).crop_to(target or G.grid)


# -- filtering error (extend + filter vs. analytic filtered data) -----------------

@dataclass
class FilterResult:
    filtered: Field2D
    reference: Field2D
    metrics: dict
    image_peak: float

    @property
    def peak_error_over_image_peak(self) -> float:
        return self.metrics["peak_abs_err"] / self.image_peak


def filtering_error(cfg: RunConfig, phantom: Phantom | None = None) -> FilterResult:
    """Broken-ray data with ``theta_i = (cos xi_i, sin xi_i)`` (must be ``(-1, 0)``)."""
    _require_theta_i_left(cfg.xi_i)
    phantom = load_phantom(cfg.phantom) if phantom is None else phantom
    grid = cfg.grid
    spec = _spec_for(cfg, grid, cfg.xi_i, cfg.xi_j)
    plan = ExtensionPlan(cfg.m_t, cfg.m_y, cfg.p)
    G = sample_brt(phantom, grid, cfg.xi_i, cfg.xi_j)
    F = extend_and_filter(G, cfg.xi_j, spec, plan)
    ref = filtered_brt_analytic(phantom, spec, grid)
    return FilterResult(F, ref, metrics(F, ref), phantom.peak())


def sbrt_filtering_error(cfg: RunConfig, xi_j2: float, phantom: Phantom | None = None) -> FilterResult:
    """Signed data ``G(xi_i, xi_j) - G(xi_i, xi_j2)`` extended, differenced and filtered."""
    _require_theta_i_left(cfg.xi_i)
    phantom = load_phantom(cfg.phantom) if phantom is None else phantom
    grid = cfg.grid
    plan = ExtensionPlan(cfg.m_t, cfg.m_y, cfg.p)
    big = extended_grid(grid, plan)
    parts = []
    for xi in (cfg.xi_j, xi_j2):
        G = sample_brt(phantom, grid, cfg.xi_i, xi)
        parts.append(embed(brt_extend(G, xi, plan), big))
    S = parts[0] - parts[1]
    base = default_filter_spec(grid, xi_j2, cfg.xi_j)
    spec = sbrt_filter_spec(cfg.xi_j, xi_j2, cfg.a_j or base.a_j, cfg.a_i or base.a_i)
    F = apply_psf(S, spec).crop_to(grid)
    ref = filtered_sbrt_analytic(phantom, spec, grid)
    return FilterResult(F, ref, metrics(F, ref), phantom.peak())


# -- noise-free square reconstruction ----------------------------------------------

SQUARE_HALF_WIDTH = 0.25


@dataclass
class SquareResult:
    recovered: Field2D
    truth: Field2D
    psi: Field2D
    rel_l2: float
    spec: FilterSpec


def square_reconstruction(n: int = 160, window: float = 0.4, xi_j: float = -math.pi / 4,
                          epsilon: float = 1e-6, reach: float = 1.6, margin: float = 0.55) -> SquareResult:
    """Extend, filter, invert and reassemble the centred square.

    The data are sampled on ``[-window, window]^2`` with ``n`` points per axis
    and extended by ``reach`` on every side; the filtered data are inverted
    on the sub-grid lying ``margin`` inside the extended edges.  Shift
    lengths are rounded to whole samples along both axes because the data
    jump across the square's edges and cannot be shifted by fractions of a
    sample without ringing.
    """
    xi_i = math.pi
    phantom = square(SQUARE_HALF_WIDTH)
    grid = Grid2D.from_extent((-window, window), (-window, window), n, n)
    d = grid.dt
    par = circumscribed_parallelogram(phantom, xi_i, xi_j)
    spec = lattice_spec(grid, xi_i, xi_j, 1.2 * par.alpha_i / 2, 1.2 * par.alpha_j / 2)
    m = int(round(reach / d))
    k = int(round(margin / d))
    inner = grid.enlarge(m - k, m - k, m - k, m - k)
    G = sample_brt(phantom, grid, xi_i, xi_j)
    F = extend_and_filter(G, xi_j, spec, ExtensionPlan(m, m), target=inner)
    psi = brt_invert_filtered(F, xi_i, xi_j, epsilon)
    mu = recover_unfiltered(psi, spec, par)
    truth = rasterize(phantom, inner)
    rel = float(np.linalg.norm(mu.values - truth.values) / np.linalg.norm(truth.values))
    return SquareResult(mu, truth, psi, rel, spec)


def lattice_spec(grid: Grid2D, xi_i, xi_j, a_i_min: float, a_j_min: float) -> FilterSpec:
    """Smallest shift lengths above the minima whose half-offsets are whole samples.

    Only directions whose components are commensurate with the grid
    (axis-aligned, or diagonal on a square lattice) can be snapped exactly;
    other directions keep their fractional remainder.
    """
    out = []
    for xi, a_min in ((xi_i, a_i_min), (xi_j, a_j_min)):
        v = Direction(xi).vec
        step = max(abs(v[0]) / grid.dt, abs(v[1]) / grid.dy)
        samples = math.ceil(a_min / 2 * step - 1e-9)
        out.append(2 * samples / step)
    return FilterSpec(xi_i, xi_j, out[0], out[1])


# -- |K| structure -------------------------------------------------------------------

def k_magnitude_grid() -> Grid2D:
    """Fine frequency lattice used for the |K| panels (step 1/32, 1024 points)."""
    return Grid2D(0.0, 0.0, 1 / 32, 1 / 32, 1024, 1024)


@dataclass
class KStructure:
    profile: np.ndarray
    centers: np.ndarray
    ridge_angle: float
    ridge_offset: float
    trough_ratios: tuple
    peak: float


def angular_profile(values: np.ndarray, grid: Grid2D, rho_range=(0.2, 0.6), nbins: int = 36):
    """Mean of ``values`` over an annulus, binned by ``phi mod pi``."""
    wt, wy = frequency_grid(grid)
    rho = np.hypot(wt, wy)
    phi = np.mod(np.arctan2(wy, wt), np.pi)
    ring = (rho >= rho_range[0]) & (rho <= rho_range[1])
    bins = np.minimum((phi / np.pi * nbins).astype(int), nbins - 1)
    prof = np.array([values[ring & (bins == b)].mean() for b in range(nbins)])
    centers = (np.arange(nbins) + 0.5) * np.pi / nbins
    return prof, centers, ring


def _angle_gap(a: float, b: float) -> float:
    """Distance between two line directions (angles mod pi)."""
    return abs((a - b + np.pi / 2) % np.pi - np.pi / 2)


def k_structure(K: np.ndarray, grid: Grid2D, xi_i: float, xi_j: float, **kw) -> KStructure:
    """Locate the ridge and the two singular-line troughs of ``|K|``.

    The annulus sits at low ``|w|`` where ``|h|`` dominates ``sqrt(eps)``,
    so ``|K| ~ 1/|h|`` and its angular structure is visible.
    """
    mag = np.abs(K)
    prof, centers, ring = angular_profile(mag, grid, **kw)
    nb = len(prof)
    ridge = float(centers[int(np.argmax(prof))])
    expected = 0.5 * (xi_i + xi_j) + np.pi / 2

    def at(angle):
        return prof[int(np.mod(angle, np.pi) / np.pi * nb) % nb]

    med = float(np.median(prof))
    troughs = (at(xi_i + np.pi / 2) / med, at(xi_j + np.pi / 2) / med)
    return KStructure(prof, centers, ridge, _angle_gap(ridge, expected), troughs, float(mag[ring].max()))


def k_panels(xi_i: float = math.pi, xi_js=FIG7_XI_J, epsilons=FIG7_EPS, grid: Grid2D | None = None):
    """``|K|`` for every ``(epsilon, xi_j)`` pair, keyed by that tuple."""
    grid = grid or k_magnitude_grid()
    return grid, {(eps, xj): np.abs(compute_K(grid, xi_i, xj, eps)) for eps in epsilons for xj in xi_js}


# -- noisy sweep ---------------------------------------------------------------------

@dataclass
class SweepResult:
    grid: Grid2D
    images: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)


def noisy_sweep(cfg: RunConfig, xi_js=FIG7_XI_J, epsilons=FIG7_EPS, std_factor: float = 1e-3,
                phantom: Phantom | None = None) -> SweepResult:
    """Extend, filter and invert noisy truncated data for every ``(xi_j, epsilon)``.

    One noise realisation (seed ``cfg.seed``) with ``sigma = std_factor *``
    peak image value is added to the truncated data of each ``xi_j``.  The
    corner check of the extension is relaxed to six noise deviations.
    """
    _require_theta_i_left(cfg.xi_i)
    phantom = load_phantom(cfg.phantom) if phantom is None else phantom
    grid = cfg.grid
    peak = phantom.peak()
    plan = ExtensionPlan(cfg.m_t, cfg.m_y, cfg.p)
    out = SweepResult(grid)
    for xj in xi_js:
        G = sample_brt(phantom, grid, cfg.xi_i, xj)
        noisy = add_noise(G, std_factor, cfg.seed, reference_peak=peak)
        scale = float(np.max(np.abs(noisy.values)))
        rtol = max(1e-9, 6 * std_factor * peak / scale) if scale else 1e-9
        spec = _spec_for(cfg, grid, cfg.xi_i, xj)
        F = extend_and_filter(noisy, xj, spec, plan, corner_rtol=rtol)
        for eps in epsilons:
            psi = brt_invert_filtered(F, cfg.xi_i, xj, eps)
            out.images[(xj, eps)] = psi
            out.residuals[(xj, eps)] = data_residual(F, psi, cfg.xi_i, xj)
    return out


def _spec_for(cfg: RunConfig, grid: Grid2D, xi_i, xi_j) -> FilterSpec:
    base = default_filter_spec(grid, xi_i, xi_j)
    return FilterSpec(xi_i, xi_j, cfg.a_i or base.a_i, cfg.a_j or base.a_j)


def _require_theta_i_left(xi_i: float) -> None:
    if abs(math.cos(xi_i) + 1) > 1e-12:
        raise ValueError("data extension requires theta_i = (-1, 0), i.e. xi_i = pi")
