import json
import math
from fractions import Fraction
from importlib import resources

import pytest

from stablegon.dynkin import DynkinQuiver, DynkinType
from stablegon.geometry import RatPoint
from stablegon.polygon import StablePolygon


def fixture_polygons(n):
    """(quiver, polygon) for every shipped E_n fixture."""
    root = resources.files("stablegon") / "fixtures" / f"E{n}"
    out = []
    for f in sorted(root.iterdir(), key=lambda f: f.name):
        if not f.name.endswith(".json"):
            continue
        q = DynkinQuiver.from_signs(DynkinType("E", n), f.name[:-5])
        out.append((q, StablePolygon.from_json(json.loads(f.read_text()))))
    return out


def ccw(points):
    """Sort rational points counter-clockwise around their centroid."""
    pts = [RatPoint(Fraction(x), Fraction(y)) for x, y in points]
    cx = sum(p.x for p in pts) / len(pts)
    cy = sum(p.y for p in pts) / len(pts)
    return sorted(pts, key=lambda p: math.atan2(float(p.y - cy), float(p.x - cx)))


# an A_5 reference hexagon with hand-checked simples and arrows
A5_HEXAGON = [(-1, 0), (1, 0), (3, 3), (-4, 5), (Fraction(7, 2), 7), (-1, 10)]


@pytest.fixture
def a5_hexagon():
    return StablePolygon("A5", ccw(A5_HEXAGON))


@pytest.fixture
def a2():
    return DynkinQuiver.from_signs("A2", "+")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS, key=str):
        terminalreporter.write_line(mod.RESULTS[key])
