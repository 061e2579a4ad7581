"""File formats, run configuration, noise and metrics."""

from .config import ConfigError, RunConfig, format_config, load_config, parse_angle, parse_config
from .fieldfile import (
    BadMagicError,
    FieldFileError,
    TruncatedPayloadError,
    decode,
    encode,
    read_field,
    write_field,
)
from .noise import add_noise, metrics
from .pgm import export_pgm, read_pgm, sidecar_path

__all__ = [
    "BadMagicError",
    "ConfigError",
    "FieldFileError",
    "RunConfig",
    "TruncatedPayloadError",
    "add_noise",
    "decode",
    "encode",
    "export_pgm",
    "format_config",
    "load_config",
    "metrics",
    "parse_angle",
    "parse_config",
    "read_field",
    "read_pgm",
    "sidecar_path",
    "write_field",
]
