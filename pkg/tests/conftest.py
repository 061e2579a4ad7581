import math

import numpy as np
import pytest

from brokenray import Ellipse, Grid2D, Phantom


def random_ellipse_phantom(rng: np.random.Generator, n: int = 3) -> Phantom:
    """A few ellipses inside the unit disk with random tilt and amplitude."""
    shapes = []
    for _ in range(n):
        center = rng.uniform(-0.35, 0.35, size=2)
        axes = rng.uniform(0.08, 0.3, size=2)
        shapes.append(Ellipse(tuple(center), tuple(axes), rng.uniform(0, math.pi), rng.uniform(0.2, 1.5)))
    return Phantom(shapes)


def random_direction_pairs(rng: np.random.Generator, n: int):
    """Angle pairs kept at least 0.3 rad from (anti)parallel."""
    out = []
    while len(out) < n:
        a, b = rng.uniform(-math.pi, math.pi, size=2)
        gap = abs((a - b + math.pi) % (2 * math.pi) - math.pi)
        if 0.3 < gap < math.pi - 0.3:
            out.append((float(a), float(b)))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def small_grid():
    return Grid2D.from_extent((-1.0, 1.0), (-1.0, 1.0), 48, 40)


# -- acceptance report ---------------------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


class AcceptanceRecorder:
    """Collects one PASS/FAIL line per criterion; FAIL unless `passed` is called."""

    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.detail = ""
        self.ok = False

    def passed(self, detail: str = "") -> None:
        self.ok = True
        self.detail = detail

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        suffix = f" ({self.detail})" if self.detail else ""
        return f"[{status}] criterion {self.number}: {self.title}{suffix}"


@pytest.fixture
def acceptance(request):
    marker = request.node.get_closest_marker("criterion")
    rec = AcceptanceRecorder(*marker.args)
    yield rec
    ACCEPTANCE_LINES[rec.number] = rec.line()
    print(rec.line())


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
