"""Binary persistence of sampled fields and spectra.

Layout (little-endian): a 47-byte header ``magic "BRT1", version u16,
kind u8, nt u32, ny u32, t0 f64, y0 f64, dt f64, dy f64`` followed by the
row-major payload, ``ny*nt`` f64 values for a real field or ``ny*nt``
interleaved ``(re, im)`` pairs for a complex spectrum.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Union

import numpy as np

from ..core.geometry import Field2D, Grid2D
from ..spectral import Spectrum2D

MAGIC = b"BRT1"
VERSION = 1
KIND_REAL = 0
KIND_COMPLEX = 1
HEADER = struct.Struct("<4sHBII4d")


class FieldFileError(ValueError):
    """Base class for unreadable field files."""


class BadMagicError(FieldFileError):
    pass


class TruncatedPayloadError(FieldFileError):
    pass


def encode(obj: Union[Field2D, Spectrum2D]) -> bytes:
    grid = obj.grid
    if isinstance(obj, Spectrum2D):
        kind, data = KIND_COMPLEX, np.asarray(obj.coeffs, dtype="<c16")
    else:
        if np.iscomplexobj(obj.values):
            raise ValueError("complex fields must be stored as Spectrum2D")
        kind, data = KIND_REAL, np.asarray(obj.values, dtype="<f8")
    header = HEADER.pack(MAGIC, VERSION, kind, grid.nt, grid.ny, grid.t0, grid.y0, grid.dt, grid.dy)
    return header + np.ascontiguousarray(data).tobytes()


def decode(buf: bytes) -> Union[Field2D, Spectrum2D]:
    if len(buf) < HEADER.size:
        raise TruncatedPayloadError(f"file holds {len(buf)} bytes, shorter than the {HEADER.size}-byte header")
    magic, version, kind, nt, ny, t0, y0, dt, dy = HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise FieldFileError(f"unsupported version {version}")
    if kind not in (KIND_REAL, KIND_COMPLEX):
        raise FieldFileError(f"unknown payload kind {kind}")
    grid = Grid2D(t0, y0, dt, dy, nt, ny)
    dtype = np.dtype("<c16") if kind == KIND_COMPLEX else np.dtype("<f8")
    expected = nt * ny * dtype.itemsize
    payload = buf[HEADER.size:]
    if len(payload) < expected:
        raise TruncatedPayloadError(f"payload holds {len(payload)} bytes, expected {expected}")
    if len(payload) > expected:
        raise FieldFileError(f"{len(payload) - expected} trailing bytes after payload")
    data = np.frombuffer(payload, dtype=dtype).reshape(ny, nt).astype(dtype.newbyteorder("="))
    if kind == KIND_COMPLEX:
        return Spectrum2D(grid, data)
    return Field2D(grid, data)


def write_field(path, obj) -> Path:
    path = Path(path)
    path.write_bytes(encode(obj))
    return path


def read_field(path):
    return decode(Path(path).read_bytes())
