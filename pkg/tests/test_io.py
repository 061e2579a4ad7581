import math

import numpy as np
import pytest

from brokenray import Field2D, Grid2D
from brokenray.io import (
    BadMagicError,
    ConfigError,
    FieldFileError,
    RunConfig,
    TruncatedPayloadError,
    add_noise,
    decode,
    encode,
    export_pgm,
    format_config,
    load_config,
    metrics,
    parse_angle,
    parse_config,
    read_field,
    read_pgm,
    sidecar_path,
    write_field,
)
from brokenray.spectral import Spectrum2D

GRID = Grid2D(-0.75, -1.0, 1.5 / 7, 2.0 / 5, 7, 5)


# -- field files ---------------------------------------------------------------------

def test_real_field_round_trip_is_bit_exact(tmp_path, rng):
    F = Field2D(GRID, rng.standard_normal(GRID.shape))
    back = read_field(write_field(tmp_path / "f.brt", F))
    assert isinstance(back, Field2D) and back.grid == F.grid
    assert back.values.tobytes() == F.values.tobytes()


def test_spectrum_round_trip_is_bit_exact(rng):
    S = Spectrum2D(GRID, rng.standard_normal(GRID.shape) + 1j * rng.standard_normal(GRID.shape))
    back = decode(encode(S))
    assert isinstance(back, Spectrum2D) and back.grid == GRID
    assert back.coeffs.tobytes() == S.coeffs.tobytes()


def test_header_size_and_payload_length():
    buf = encode(Field2D(GRID, np.zeros(GRID.shape)))
    assert buf[:4] == b"BRT1"
    assert len(buf) == 47 + 8 * GRID.nt * GRID.ny


def test_decode_errors():
    buf = encode(Field2D(GRID, np.ones(GRID.shape)))
    with pytest.raises(BadMagicError):
        decode(b"XXXX" + buf[4:])
    with pytest.raises(TruncatedPayloadError):
        decode(buf[:-8])
    with pytest.raises(TruncatedPayloadError):
        decode(buf[:20])
    with pytest.raises(FieldFileError, match="trailing"):
        decode(buf + b"\0")
    with pytest.raises(ValueError):
        encode(Field2D(GRID, np.ones(GRID.shape) * 1j))


# -- configuration -------------------------------------------------------------------

@pytest.mark.parametrize("text, value", [
    ("pi/7", math.pi / 7), ("-pi/5", -math.pi / 5), ("3*pi/4", 0.75 * math.pi), ("0.4488", 0.4488), (1, 1.0),
])
def test_parse_angle_examples(text, value):
    assert parse_angle(text) == pytest.approx(value, rel=1e-15)


@pytest.mark.parametrize("text", ["pi**2", "__import__('os')", "e", "pi/0", "1e999", "pi/"])
def test_parse_angle_rejects(text):
    with pytest.raises(ConfigError):
        parse_angle(text)


def test_parse_config_and_round_trip(tmp_path):
    cfg = parse_config("# fig 8\nxi_j = pi/7\nnt = 40\nt-range = -1, 1\nxi_j_list = pi/20 pi/7\n")
    assert cfg.xi_j == pytest.approx(math.pi / 7)
    assert cfg.nt == 40 and cfg.t_range == (-1.0, 1.0)
    assert cfg.extra["xi_j_list"] == "pi/20 pi/7"
    assert cfg.grid.shape == (600, 40)
    path = tmp_path / "run.cfg"
    path.write_text(format_config(cfg))
    assert load_config(path) == cfg


@pytest.mark.parametrize("text", ["nt 4\n", "nt = four\n", "epsilon = -1\n", "xi_j = pi\n", "t_range = 1\n"])
def test_parse_config_rejects(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_default_config_grid():
    assert RunConfig().grid.shape == (600, 400)


# -- noise and metrics ---------------------------------------------------------------

def test_noise_is_seeded_and_recorded():
    F = Field2D(GRID, np.linspace(-2, 3, GRID.nt * GRID.ny).reshape(GRID.shape))
    a, b = add_noise(F, 0.01, seed=7), add_noise(F, 0.01, seed=7)
    np.testing.assert_array_equal(a.values, b.values)
    assert not np.array_equal(a.values, add_noise(F, 0.01, seed=8).values)
    assert a.meta["noise_sigma"] == pytest.approx(0.03)
    assert a.meta["noise_seed"] == 7
    assert add_noise(F, 0.01, reference_peak=1.0).meta["noise_sigma"] == pytest.approx(0.01)


def test_zero_noise_is_identity():
    F = Field2D(GRID, np.arange(35.0).reshape(GRID.shape))
    out = add_noise(F, 0.0)
    np.testing.assert_array_equal(out.values, F.values)
    assert out.values is not F.values
    with pytest.raises(ValueError):
        add_noise(F, -0.1)


def test_metrics_examples(rng):
    ref = Field2D(GRID, np.zeros(GRID.shape))
    ref.values[2, 3] = 2.0
    est = ref.with_values(ref.values.copy())
    est.values[0, 0] = 0.5
    m = metrics(est, ref)
    assert m == {"peak_abs_err": 0.5, "rel_l2": 0.25, "peak_abs_err_over_ref_peak": 0.25}
    assert metrics(ref, ref)["peak_abs_err"] == 0.0
    a, b = rng.standard_normal(GRID.shape), rng.standard_normal(GRID.shape)
    m = metrics(Field2D(GRID, a), Field2D(GRID, b))
    assert m["rel_l2"] == pytest.approx(math.sqrt(((a - b) ** 2).sum() / (b**2).sum()))
    with pytest.raises(ValueError):
        metrics(Field2D(GRID, a), Field2D(GRID.enlarge(1, 0, 0, 0), np.zeros((5, 8))))


# -- PGM -----------------------------------------------------------------------------

def test_pgm_round_trip_within_one_level(tmp_path, rng):
    F = Field2D(GRID, rng.uniform(-1, 4, GRID.shape))
    path = export_pgm(F, tmp_path / "p.pgm")
    assert path.read_bytes().startswith(b"P5\n7 5\n65535\n")
    values, scale = read_pgm(path)
    assert scale == pytest.approx((F.values.min(), F.values.max()))
    np.testing.assert_allclose(values, F.values, atol=5 / 65535 / 2 + 1e-12)


def test_pgm_constant_and_clamped(tmp_path):
    const = export_pgm(Field2D(GRID, np.full(GRID.shape, 3.0)), tmp_path / "c.pgm")
    levels, _ = read_pgm(const)
    assert np.all(levels == 3.0)
    ramp = Field2D(GRID, np.linspace(-1, 2, 35).reshape(GRID.shape))
    path = export_pgm(ramp, tmp_path / "r.pgm", value_range=(0.0, 1.0))
    values, _ = read_pgm(path)
    assert values.min() == 0.0 and values.max() == 1.0
    sidecar_path(path).unlink()
    raw, scale = read_pgm(path)
    assert scale is None and raw.max() == 65535
    with pytest.raises(ValueError):
        export_pgm(ramp, tmp_path / "bad.pgm", value_range=(1.0, 0.0))
