"""Directions, sampling lattices and sampled fields."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Direction:
    """Unit vector ``(cos xi, sin xi)`` with its counter-clockwise normal."""

    xi: float
    vec: np.ndarray = field(init=False, repr=False, compare=False)
    perp: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        xi = float(self.xi)
        if not math.isfinite(xi):
            raise ValueError(f"direction angle must be finite, got {self.xi!r}")
        c, s = math.cos(xi), math.sin(xi)
        vec = np.array([c, s])
        perp = np.array([-s, c])
        vec.flags.writeable = False
        perp.flags.writeable = False
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "vec", vec)
        object.__setattr__(self, "perp", perp)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.vec, dtype=dtype)

    def dot(self, other: "Direction") -> float:
        return float(self.vec @ other.vec)


def direction_from_angle(xi: float) -> Direction:
    return Direction(xi)


def as_direction(theta) -> Direction:
    """Accept a `Direction` or an angle in radians."""
    if isinstance(theta, Direction):
        return theta
    return Direction(float(theta))


def det2(a: Direction, b: Direction) -> float:
    """``det([a b])`` for two directions, equal to ``sin(xi_b - xi_a)``."""
    return float(a.vec[0] * b.vec[1] - a.vec[1] * b.vec[0])


def check_pair(theta_i: Direction, theta_j: Direction, tol: float = 1e-12) -> None:
    """Reject parallel or antiparallel direction pairs."""
    if abs(theta_i.dot(theta_j)) >= 1.0 - tol:
        raise ValueError(
            "directions must satisfy |theta_i . theta_j| < 1 "
            f"(xi_i={theta_i.xi:.6g}, xi_j={theta_j.xi:.6g})"
        )


@dataclass(frozen=True)
class Grid2D:
    """Uniform lattice; sample ``(n, m)`` sits at ``(t0 + m*dt, y0 + n*dy)``.

    Rows index ``y`` and columns index ``t``, so a field on this grid is an
    ``ny x nt`` array.
    """

    t0: float
    y0: float
    dt: float
    dy: float
    nt: int
    ny: int

    def __post_init__(self):
        for name in ("t0", "y0", "dt", "dy"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if self.dt <= 0 or self.dy <= 0:
            raise ValueError("sample spacings dt, dy must be positive")
        for name in ("nt", "ny"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @classmethod
    def from_extent(cls, t_range, y_range, nt: int, ny: int) -> "Grid2D":
        """Pixel-centre lattice covering ``t_range x y_range``.

        ``nt`` cells of width ``(t1 - t0) / nt`` are laid over the interval and
        samples sit at their centres.
        """
        (ta, tb), (ya, yb) = t_range, y_range
        dt = (tb - ta) / nt
        dy = (yb - ya) / ny
        return cls(ta + dt / 2, ya + dy / 2, dt, dy, nt, ny)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nt)

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.nt)

    @property
    def y(self) -> np.ndarray:
        return self.y0 + self.dy * np.arange(self.ny)

    def points(self) -> np.ndarray:
        """Sample coordinates as an ``(ny, nt, 2)`` array."""
        tt, yy = np.meshgrid(self.t, self.y)
        return np.stack([tt, yy], axis=-1)

    def enlarge(self, left: int = 0, right: int = 0, below: int = 0, above: int = 0) -> "Grid2D":
        """Grid with extra columns/rows on each side, same spacing."""
        return Grid2D(
            self.t0 - left * self.dt,
            self.y0 - below * self.dy,
            self.dt,
            self.dy,
            self.nt + left + right,
            self.ny + below + above,
        )

    def flipped_y(self) -> "Grid2D":
        """Grid of the vertically flipped field, in the mirrored ``-y`` frame."""
        return Grid2D(self.t0, -(self.y0 + (self.ny - 1) * self.dy), self.dt, self.dy, self.nt, self.ny)

    def index_of(self, t: float, y: float) -> tuple[float, float]:
        """Fractional ``(row, col)`` of a physical point."""
        return ((y - self.y0) / self.dy, (t - self.t0) / self.dt)


@dataclass(frozen=True)
class Field2D:
    """Samples on a `Grid2D`; ``values`` has shape ``(ny, nt)``."""

    grid: Grid2D
    values: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 2 or values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {values.shape} does not match grid shape {self.grid.shape}"
            )
        object.__setattr__(self, "values", values)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    def with_values(self, values, **meta) -> "Field2D":
        return Field2D(self.grid, values, {**self.meta, **meta})

    def __add__(self, other: "Field2D") -> "Field2D":
        _check_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "Field2D") -> "Field2D":
        _check_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __neg__(self) -> "Field2D":
        return self.with_values(-self.values)

    def __mul__(self, scalar) -> "Field2D":
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__

    def crop_to(self, grid: Grid2D) -> "Field2D":
        """Extract the sub-field living on ``grid`` (same spacing, aligned)."""
        if not (np.isclose(grid.dt, self.grid.dt) and np.isclose(grid.dy, self.grid.dy)):
            raise ValueError("crop grid must share the sample spacing")
        r, c = self.grid.index_of(grid.t0, grid.y0)
        r0, c0 = int(round(r)), int(round(c))
        if abs(r - r0) > 1e-6 or abs(c - c0) > 1e-6:
            raise ValueError("crop grid is not aligned with the field lattice")
        if r0 < 0 or c0 < 0 or r0 + grid.ny > self.grid.ny or c0 + grid.nt > self.grid.nt:
            raise ValueError("crop grid falls outside the field")
        return Field2D(grid, self.values[r0:r0 + grid.ny, c0:c0 + grid.nt].copy(), dict(self.meta))


def _check_same_grid(a: Field2D, b: Field2D) -> None:
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")


@dataclass(frozen=True)
class Parallelogram:
    """Origin-centred parallelogram with edges along ``theta_i`` and ``theta_j``.

    ``alpha_i``/``alpha_j`` are the edge lengths parallel to ``theta_i``/``theta_j``
    and ``b_i``/``b_j`` the heights measured along ``theta_i^perp``/``theta_j^perp``.
    """

    theta_i: Direction
    theta_j: Direction
    alpha_i: float
    alpha_j: float

    def __post_init__(self):
        check_pair(self.theta_i, self.theta_j)
        if not (self.alpha_i > 0 and self.alpha_j > 0):
            raise ValueError("parallelogram edge lengths must be positive")

    @property
    def abs_det(self) -> float:
        return abs(det2(self.theta_i, self.theta_j))

    @property
    def b_i(self) -> float:
        return self.alpha_j * self.abs_det

    @property
    def b_j(self) -> float:
        return self.alpha_i * self.abs_det

    @property
    def area(self) -> float:
        return self.alpha_i * self.alpha_j * self.abs_det

    def coords(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Oblique coordinates ``(s_i, s_j)`` with ``x = s_i theta_i + s_j theta_j``."""
        x = np.asarray(x, dtype=float)
        basis = np.column_stack([self.theta_i.vec, self.theta_j.vec])
        s = np.linalg.solve(basis, x.reshape(-1, 2).T)
        shape = x.shape[:-1]
        return s[0].reshape(shape), s[1].reshape(shape)

    def contains(self, x, margin: float = 0.0) -> np.ndarray:
        s_i, s_j = self.coords(x)
        return (np.abs(s_i) <= self.alpha_i / 2 + margin) & (np.abs(s_j) <= self.alpha_j / 2 + margin)

    def rasterize(self, grid: "Grid2D", supersample: int = 8) -> np.ndarray:
        """Area fraction of each grid cell covered, from ``supersample**2`` points per cell."""
        if int(supersample) != supersample or supersample < 1:
            raise ValueError("supersample must be a positive integer")
        pts = grid.points()
        offs = (np.arange(supersample) + 0.5) / supersample - 0.5
        acc = np.zeros(grid.shape)
        for ot in offs:
            for oy in offs:
                acc += self.contains(pts + np.array([ot * grid.dt, oy * grid.dy]))
        return acc / supersample**2

    def vertices(self) -> np.ndarray:
        hi = self.alpha_i / 2 * self.theta_i.vec
        hj = self.alpha_j / 2 * self.theta_j.vec
        return np.array([hi + hj, -hi + hj, -hi - hj, hi - hj])


@dataclass(frozen=True)
class FilterSpec:
    """Four-impulse PSF with shift lengths ``a_i`` along ``theta_i`` and ``a_j`` along ``theta_j``."""

    theta_i: Direction
    theta_j: Direction
    a_i: float
    a_j: float

    def __post_init__(self):
        object.__setattr__(self, "theta_i", as_direction(self.theta_i))
        object.__setattr__(self, "theta_j", as_direction(self.theta_j))
        check_pair(self.theta_i, self.theta_j)
        for name in ("a_i", "a_j"):
            v = float(getattr(self, name))
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
            object.__setattr__(self, name, v)

    def taps(self) -> list[tuple[float, np.ndarray]]:
        """``(sign, offset)`` pairs so that filtered ``g(x) = sum sign * g(x + offset)``.

        Order and signs follow the PSF definition: ``(+, -, -, +)``.
        """
        hi = self.a_i / 2 * self.theta_i.vec
        hj = self.a_j / 2 * self.theta_j.vec
        return [(1.0, hi + hj), (-1.0, -hi + hj), (-1.0, hi - hj), (1.0, -hi - hj)]

    def swapped(self) -> "FilterSpec":
        return FilterSpec(self.theta_j, self.theta_i, self.a_j, self.a_i)

    def window(self) -> Parallelogram:
        """Parallelogram with edge lengths ``(a_i, a_j)``, the support of the blur window."""
        return Parallelogram(self.theta_i, self.theta_j, self.a_i, self.a_j)
