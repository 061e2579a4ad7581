"""16-bit grayscale PGM panels with a text sidecar holding the display scale."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..core.geometry import Field2D

MAXVAL = 65535


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".scale")


def export_pgm(field: Field2D, path, value_range=None) -> Path:
    """Write a binary 16-bit PGM (``P5``), row 0 at the top of the picture.

    Values map linearly from ``value_range = (lo, hi)`` (default min/max) to
    ``0..65535`` with clamping.  Grids have ``y`` increasing with row index,
    so rows are flipped to put ``+y`` up.  The scale goes to ``<path>.scale``.
    """
    values = np.asarray(field.values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("cannot export non-finite samples")
    lo, hi = (float(values.min()), float(values.max())) if value_range is None else map(float, value_range)
    if not hi >= lo:
        raise ValueError("value range must satisfy hi >= lo")
    span = hi - lo
    scaled = np.zeros_like(values) if span == 0 else (np.clip(values, lo, hi) - lo) / span
    pix = np.rint(scaled * MAXVAL).astype(">u2")[::-1]
    path = Path(path)
    ny, nt = pix.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{nt} {ny}\n{MAXVAL}\n".encode("ascii"))
        fh.write(pix.tobytes())
    sidecar_path(path).write_text(f"min {lo!r}\nmax {hi!r}\n")
    return path


def read_pgm(path) -> tuple[np.ndarray, tuple[float, float] | None]:
    """Pixel values mapped back to physical units, in grid row order.

    Returns raw 0..65535 levels and ``None`` when there is no sidecar.
    """
    path = Path(path)
    data = path.read_bytes()
    parts = []
    pos = 0
    while len(parts) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while not data[pos:pos + 1].isspace():
            pos += 1
        parts.append(data[start:pos])
    pos += 1
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    nt, ny, maxval = (int(p) for p in parts[1:])
    dtype = ">u2" if maxval > 255 else "u1"
    pix = np.frombuffer(data[pos:], dtype=dtype, count=nt * ny).reshape(ny, nt)[::-1].astype(float)
    side = sidecar_path(path)
    if not side.exists():
        return pix, None
    scale = dict(line.split() for line in side.read_text().splitlines() if line.strip())
    lo, hi = float(scale["min"]), float(scale["max"])
    return lo + pix / maxval * (hi - lo), (lo, hi)
