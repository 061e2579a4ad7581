"""Command line entry point: ``brokenray <command> [options]``.

Fields travel between commands as ``.brt`` field files.  Failures print one
JSON object on stderr (``{"error": ..., "message": ...}``) and exit non-zero.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .core.geometry import Field2D, FilterSpec, Grid2D
from .core.phantom import load_phantom
from .core.support import circumscribed_parallelogram
from .core.transforms import rasterize, sample_brt, sample_cbt, sample_sbrt
from .extend import ExtensionPlan, brt_extend, embed
from .experiments import (
    FIG7_EPS,
    FIG7_XI_J,
    extended_grid,
    filtering_error,
    k_panels,
    k_structure,
    noisy_sweep,
    sbrt_filtering_error,
    square_reconstruction,
)
from .filtering import DEFAULT_SHIFT_SAMPLES, apply_psf
from .invert import SystemSpectrum, brt_invert_filtered, compute_K, recover_blurred, recover_unfiltered
from .io.config import ConfigError, RunConfig, load_config, parse_angle
from .io.fieldfile import read_field, write_field
from .io.noise import add_noise, metrics
from .io.pgm import export_pgm

FILTER_TOLERANCE = 0.05
SQUARE_CEILING = 0.10


class CliError(Exception):
    def __init__(self, code: str, message: str, status: int = 1):
        super().__init__(message)
        self.code = code
        self.status = status


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", f"{self.prog}: {message}", status=2)


def _emit_error(code: str, message: str) -> None:
    print(json.dumps({"error": code, "message": message}), file=sys.stderr)


def _angle(text: str) -> float:
    try:
        return parse_angle(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _grid_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t-range", nargs=2, type=float, default=(-0.75, 0.75), metavar=("T0", "T1"))
    p.add_argument("--y-range", nargs=2, type=float, default=(-1.0, 1.0), metavar=("Y0", "Y1"))
    p.add_argument("--nt", type=int, default=400)
    p.add_argument("--ny", type=int, default=600)


def _grid(args) -> Grid2D:
    if args.nt < 1 or args.ny < 1:
        raise CliError("invalid-grid", "--nt and --ny must be positive")
    return Grid2D.from_extent(args.t_range, args.y_range, args.nt, args.ny)


def _write(field, args) -> None:
    write_field(args.output, field)
    if getattr(args, "pgm", None):
        export_pgm(field, args.pgm)


def _spec(args, grid: Grid2D) -> FilterSpec:
    default = DEFAULT_SHIFT_SAMPLES * max(grid.dt, grid.dy)
    return FilterSpec(args.xi_i, args.xi_j, args.a_i or default, args.a_j or default)


# -- commands -------------------------------------------------------------------------

def cmd_phantom(args):
    _write(rasterize(load_phantom(args.phantom), _grid(args)), args)


def cmd_forward(args):
    phantom = load_phantom(args.phantom)
    grid = _grid(args)
    if phantom.is_empty:
        field = Field2D(grid, np.zeros(grid.shape), {"kind": args.kind})
    elif args.kind == "cbt":
        field = sample_cbt(phantom, grid, args.xi_i)
    elif args.kind == "brt":
        field = sample_brt(phantom, grid, args.xi_i, args.xi_j)
    else:
        field = sample_sbrt(phantom, grid, args.xi_i, args.xi_j)
    _write(field, args)


def cmd_extend(args):
    G = read_field(args.input)
    plan = ExtensionPlan(args.m_t, args.m_y, args.p)
    E = brt_extend(G, args.xi_j, plan, args.corner_rtol)
    _write(embed(E, extended_grid(G.grid, plan)), args)


def cmd_filter(args):
    F = read_field(args.input)
    out = apply_psf(F, _spec(args, F.grid))
    if args.crop_to:
        out = out.crop_to(read_field(args.crop_to).grid)
    _write(out, args)


def cmd_invert(args):
    _write(brt_invert_filtered(read_field(args.input), args.xi_i, args.xi_j, args.eps), args)


def cmd_recover(args):
    F = read_field(args.input)
    spec = _spec(args, F.grid)
    if args.method == "blurred":
        out = recover_blurred(F, spec, args.eps, mean=args.mean)
    else:
        if not args.phantom:
            raise CliError("missing-option", "--method unfiltered needs --phantom to bound the support")
        par = circumscribed_parallelogram(load_phantom(args.phantom), args.xi_i, args.xi_j)
        out = recover_unfiltered(F, spec, par)
    _write(out, args)


def cmd_noise(args):
    F = read_field(args.input)
    _write(add_noise(F, args.std_factor, args.seed, args.reference_peak), args)


def cmd_metrics(args):
    print(json.dumps(metrics(read_field(args.estimate), read_field(args.reference)), sort_keys=True))


def cmd_spectrum(args):
    grid = Grid2D(0.0, 0.0, args.spacing, args.spacing, args.n, args.n)
    if args.kind == "K":
        values = np.abs(compute_K(grid, args.xi_i, args.xi_j, args.eps))
    else:
        values = np.abs(SystemSpectrum.from_grid(grid, args.xi_i, args.xi_j).H)
    centred = np.fft.fftshift(values)
    field = Field2D(grid, centred, {"kind": f"|{args.kind}|"})
    if args.output:
        write_field(args.output, field)
    if args.pgm:
        export_pgm(field, args.pgm, value_range=args.range)
    print(json.dumps({"kind": args.kind, "max": float(values.max()), "median": float(np.median(values))}))


def cmd_repro(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    out = Path(args.out or cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    summary = REPRO[args.figure](cfg, out)
    summary["figure"] = args.figure
    (out / f"{args.figure}_summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True))
    print(json.dumps(summary, sort_keys=True))
    if not summary.get("passed", True):
        raise CliError("criterion-failed", f"{args.figure}: {summary.get('criterion')}")


def _repro_fig5(cfg: RunConfig, out: Path) -> dict:
    brt_res = filtering_error(cfg)
    xi_j2 = parse_angle(str(cfg.extra.get("xi_j2", "-pi/5")))
    sbrt_res = sbrt_filtering_error(cfg, xi_j2)
    for name, res in (("brt", brt_res), ("sbrt", sbrt_res)):
        err = res.filtered.with_values(np.abs(res.filtered.values - res.reference.values))
        export_pgm(res.reference, out / f"fig5_{name}_reference.pgm")
        export_pgm(err, out / f"fig5_{name}_error.pgm")
    ratios = {"brt": brt_res.peak_error_over_image_peak, "sbrt": sbrt_res.peak_error_over_image_peak}
    return {
        "peak_error_over_image_peak": ratios,
        "criterion": f"peak abs error < {FILTER_TOLERANCE} x peak image value",
        "passed": all(v < FILTER_TOLERANCE for v in ratios.values()),
    }


def _repro_fig6(cfg: RunConfig, out: Path) -> dict:
    res = square_reconstruction()
    scale = (float(res.truth.values.min()), float(res.truth.values.max()))
    export_pgm(res.truth, out / "fig6_reference.pgm", scale)
    export_pgm(res.recovered, out / "fig6_recovered.pgm", scale)
    return {"rel_l2": res.rel_l2, "a_i": res.spec.a_i, "a_j": res.spec.a_j,
            "criterion": f"relative L2 <= {SQUARE_CEILING}", "passed": res.rel_l2 <= SQUARE_CEILING}


def _repro_fig7(cfg: RunConfig, out: Path) -> dict:
    grid, panels = k_panels(cfg.xi_i)
    top = max(float(v.max()) for v in panels.values())
    rows = []
    for (eps, xj), mag in panels.items():
        ks = k_structure(mag, grid, cfg.xi_i, xj)
        name = f"fig7_K_eps{eps:.0e}_xij{xj:.4f}.pgm"
        export_pgm(Field2D(grid, np.fft.fftshift(mag)), out / name, (0.0, top))
        rows.append({"epsilon": eps, "xi_j": xj, "ridge_offset": ks.ridge_offset,
                     "trough_ratios": list(ks.trough_ratios), "peak": ks.peak})
    return {"panels": rows, "display_max": top}


def _repro_fig8(cfg: RunConfig, out: Path) -> dict:
    res = noisy_sweep(cfg)
    vals = [f.values for f in res.images.values()]
    scale = (min(float(v.min()) for v in vals), max(float(v.max()) for v in vals))
    rows, monotone = [], True
    for xj in FIG7_XI_J:
        resid = [res.residuals[(xj, e)] for e in FIG7_EPS]
        monotone &= all(b >= a for a, b in zip(resid, resid[1:]))
        for e in FIG7_EPS:
            export_pgm(res.images[(xj, e)], out / f"fig8_psi_eps{e:.0e}_xij{xj:.4f}.pgm", scale)
        rows.append({"xi_j": xj, "epsilons": list(FIG7_EPS), "residuals": resid})
    return {"sweep": rows, "criterion": "data residual non-decreasing in epsilon", "passed": monotone}


REPRO = {"fig5": _repro_fig5, "fig6": _repro_fig6, "fig7": _repro_fig7, "fig8": _repro_fig8}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="brokenray", description="Broken-ray transform toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def angles(p, need_j=True):
        p.add_argument("--xi-i", type=_angle, default=math.pi, help="radians; 'pi/7' style accepted")
        if need_j:
            p.add_argument("--xi-j", type=_angle, required=True)

    def shifts(p):
        p.add_argument("--a-i", type=float, default=None)
        p.add_argument("--a-j", type=float, default=None)

    def output(p, required=True):
        p.add_argument("-o", "--output", required=required)
        p.add_argument("--pgm", default=None, help="also write a 16-bit PGM panel")

    p = sub.add_parser("phantom", help="rasterize a phantom")
    p.add_argument("--phantom", default="shepp-logan")
    _grid_options(p)
    output(p)
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("forward", help="sample exact cone-beam / broken-ray data")
    p.add_argument("--phantom", default="shepp-logan")
    p.add_argument("--kind", choices=("brt", "sbrt", "cbt"), default="brt")
    p.add_argument("--xi-i", type=_angle, default=math.pi)
    p.add_argument("--xi-j", type=_angle, default=None)
    _grid_options(p)
    output(p)
    p.set_defaults(func=cmd_forward)

    p = sub.add_parser("extend", help="extend truncated data (theta_i = (-1, 0))")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--xi-j", type=_angle, required=True)
    p.add_argument("--m-t", type=int, default=48)
    p.add_argument("--m-y", type=int, default=48)
    p.add_argument("--p", type=int, default=16)
    p.add_argument("--corner-rtol", type=float, default=1e-9)
    output(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("filter", help="apply the four-impulse PSF")
    p.add_argument("-i", "--input", required=True)
    angles(p)
    shifts(p)
    p.add_argument("--crop-to", default=None, help="field file whose grid the output is cropped to")
    output(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("invert", help="regularised inversion of filtered data")
    p.add_argument("-i", "--input", required=True)
    angles(p)
    p.add_argument("--eps", type=float, default=1e-5)
    output(p)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("recover", help="image from the filtered image or filtered data")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--method", choices=("unfiltered", "blurred"), default="unfiltered")
    p.add_argument("--phantom", default=None, help="support used for the copy separation bound")
    angles(p)
    shifts(p)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--mean", type=float, default=None, help="image mean restored by the blurred method")
    output(p)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("noise", help="add Gaussian noise")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--std-factor", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reference-peak", type=float, default=None)
    output(p)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("metrics", help="error metrics as JSON")
    p.add_argument("--estimate", required=True)
    p.add_argument("--reference", required=True)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("spectrum", help="|K| or |H| panel (zero frequency centred)")
    p.add_argument("--kind", choices=("K", "H"), default="K")
    angles(p)
    p.add_argument("--eps", type=float, default=1e-5)
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--spacing", type=float, default=1 / 32)
    p.add_argument("--range", nargs=2, type=float, default=None)
    output(p, required=False)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("repro", help="run a figure pipeline end to end")
    p.add_argument("figure", choices=sorted(REPRO))
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_repro)
    return parser


def _check(args) -> None:
    if getattr(args, "command", None) == "forward" and args.kind != "cbt" and args.xi_j is None:
        raise CliError("missing-option", "--kind brt/sbrt needs --xi-j", status=2)
    for name in ("eps", "std_factor"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            raise CliError("invalid-value", f"--{name.replace('_', '-')} must be non-negative", status=2)
    for name in ("m_t", "m_y", "p", "n"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            raise CliError("invalid-value", f"--{name.replace('_', '-')} must be non-negative", status=2)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _check(args)
        args.func(args)
    except CliError as exc:
        _emit_error(exc.code, str(exc))
        return exc.status
    except (ValueError, OSError, KeyError) as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
