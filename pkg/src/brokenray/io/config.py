"""``key = value`` run configuration for the command line pipelines."""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from ..core.geometry import Grid2D

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}


class ConfigError(ValueError):
    pass


def parse_angle(text) -> float:
    """Radians from a number or an arithmetic expression in ``pi``.

    ``"pi/7"``, ``"-pi/5"``, ``"3*pi/4"`` and ``"0.4488"`` are accepted;
    anything else (names, calls, powers) is rejected.
    """
    if isinstance(text, (int, float)):
        return float(text)
    try:
        tree = ast.parse(str(text).strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse angle {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise ConfigError(f"unsupported angle expression {text!r}")

    try:
        value = ev(tree)
    except ZeroDivisionError as exc:
        raise ConfigError(f"division by zero in angle {text!r}") from exc
    if not math.isfinite(value):
        raise ConfigError(f"angle {text!r} is not finite")
    return value


def _pair(text) -> tuple[float, float]:
    if isinstance(text, (tuple, list)):
        a, b = text
    else:
        parts = str(text).replace(",", " ").split()
        if len(parts) != 2:
            raise ConfigError(f"expected two numbers, got {text!r}")
        a, b = parts
    return (float(a), float(b))


@dataclass(frozen=True)
class RunConfig:
    """Parameters shared by the figure pipelines.

    The default grid has 600 samples over ``y in [-1, 1]`` and 400 over
    ``t in [-0.75, 0.75]``.
    """

    phantom: str = "shepp-logan"
    t_range: tuple = (-0.75, 0.75)
    y_range: tuple = (-1.0, 1.0)
    nt: int = 400
    ny: int = 600
    xi_i: float = math.pi
    xi_j: float = math.pi / 11
    a_i: float | None = None
    a_j: float | None = None
    epsilon: float = 1e-5
    noise: float = 0.0
    seed: int = 0
    m_t: int = 48
    m_y: int = 48
    p: int = 16
    output: str = "out"
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.nt < 1 or self.ny < 1:
            raise ConfigError("nt and ny must be positive")
        if not self.t_range[1] > self.t_range[0] or not self.y_range[1] > self.y_range[0]:
            raise ConfigError("ranges must be increasing")
        for name in ("a_i", "a_j"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ConfigError(f"{name} must be positive")
        if self.epsilon < 0:
            raise ConfigError("epsilon must be non-negative")
        if self.noise < 0:
            raise ConfigError("noise must be non-negative")
        for name in ("m_t", "m_y", "p"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if abs(math.cos(self.xi_i - self.xi_j)) >= 1 - 1e-12:
            raise ConfigError("xi_i and xi_j must not be parallel or antiparallel")

    @property
    def grid(self) -> Grid2D:
        return Grid2D.from_extent(self.t_range, self.y_range, self.nt, self.ny)

    def updated(self, **changes) -> "RunConfig":
        return replace(self, **changes)


_CONVERTERS = {
    "phantom": str,
    "t_range": _pair,
    "y_range": _pair,
    "nt": int,
    "ny": int,
    "xi_i": parse_angle,
    "xi_j": parse_angle,
    "a_i": float,
    "a_j": float,
    "epsilon": float,
    "noise": float,
    "seed": int,
    "m_t": int,
    "m_y": int,
    "p": int,
    "output": str,
}


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    """Read ``key = value`` lines (``#`` comments) on top of ``base``.

    Unknown keys are kept in ``extra`` so figure pipelines can read their own
    options (for example ``xi_j_list``).
    """
    values, extra = {}, {}
    known = {f.name for f in fields(RunConfig)} - {"extra"}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key in known:
            try:
                values[key] = _CONVERTERS[key](value)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from exc
        else:
            extra[key] = value
    base = base or RunConfig()
    return replace(base, extra={**base.extra, **extra}, **values)


def load_config(path) -> RunConfig:
    return parse_config(Path(path).read_text())


def format_config(cfg: RunConfig) -> str:
    lines = []
    for f in fields(RunConfig):
        if f.name == "extra":
            continue
        v = getattr(cfg, f.name)
        if v is None:
            continue
        if isinstance(v, tuple):
            v = f"{v[0]!r} {v[1]!r}"
        elif isinstance(v, float):
            v = repr(v)
        lines.append(f"{f.name} = {v}")
    lines.extend(f"{k} = {v}" for k, v in cfg.extra.items())
    return "\n".join(lines) + "\n"
