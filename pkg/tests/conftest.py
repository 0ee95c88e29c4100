import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tridisk.geometry import PolygonalQuadrilateral

DATA = Path(__file__).parent / "data"

# corpus used by the sandwich / corollary / radius-chain acceptance checks
CORPUS_NAMES = [
    "square", "rect_2x1", "rect_5x1", "trapezoid", "l_hex",
    "convex5", "convex6", "convex7", "convex8", "ortho1", "ortho2", "u_shape",
]

# corpus for the medial-axis oracle check
MA_CORPUS_NAMES = ["square", "rect_2x1", "l_hex", "convex5", "convex6", "convex7", "convex8"]


def load(name: str) -> PolygonalQuadrilateral:
    return PolygonalQuadrilateral.from_file(DATA / f"{name}.json")


@pytest.fixture
def square():
    return load("square")


@pytest.fixture
def rect_2x1():
    return load("rect_2x1")


@pytest.fixture
def l_hex():
    return load("l_hex")


@pytest.fixture
def u_shape():
    return load("u_shape")


@pytest.fixture
def trapezoid():
    return load("trapezoid")
