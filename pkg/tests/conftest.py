from __future__ import annotations

import pytest

from wardsurf.flows import CylinderDecomposition, Direction
from wardsurf.surface import build_ward, square_torus

_surfaces = {}
_decomps = {}


def ward(n: int):
    if n not in _surfaces:
        _surfaces[n] = build_ward(n)
    return _surfaces[n]


def horizontal(n: int) -> CylinderDecomposition:
    key = (n, "h")
    if key not in _decomps:
        s = ward(n)
        _decomps[key] = CylinderDecomposition(s, Direction.horizontal(s.ctx))
    return _decomps[key]


def rotated(n: int, k: int) -> CylinderDecomposition:
    key = (n, k)
    if key not in _decomps:
        s = ward(n)
        _decomps[key] = CylinderDecomposition(s, Direction.rotation(s.ctx, k))
    return _decomps[key]


@pytest.fixture(scope="session")
def torus():
    return square_torus()


@pytest.fixture(scope="session")
def ward4():
    return ward(4)


@pytest.fixture(scope="session")
def ward5():
    return ward(5)


@pytest.fixture(scope="session")
def ward6():
    return ward(6)


@pytest.fixture(scope="session")
def ward8():
    return ward(8)
