"""Shared fixtures: known-good curves with 2-power torsion, frozen so the
test suite does not repeat the random curve search.

The constants below were produced by find_torsion_curve and are re-validated
cheaply on construction (build_tower checks the exact order of t and that the
auxiliary point avoids <t>).
"""

import random

import pytest

from ellbfly.curves import Curve
from ellbfly.fields import PrimeField
from ellbfly.tower import build_tower

# (p, delta, a4, a6, t, R) -- frozen outputs of find_torsion_curve(p, delta, seed)
CURVES = {
    "p10007d6": (10007, 6, 2834, 6014, (4300, 7551), (1416, 2230)),
    "p12289d6": (12289, 6, 6197, 8895, (1537, 8666), (11659, 4388)),
    "p10007d4": (10007, 4, 2640, 6551, (9198, 3852), (4572, 8563)),
    "p67d2": (67, 2, 8, 1, (6, 8), (29, 10)),
    "p167772161d12": (167772161, 12, 26285888, 133724197,
                      (148341560, 120971919), (51874815, 36241020)),
}


def make_curve(name):
    p, delta, a4, a6, t, R = CURVES[name]
    E = Curve(PrimeField(p), 0, 0, 0, a4, a6)
    assert E.is_on(t) and E.is_on(R)
    return E, t, R, delta


@pytest.fixture(scope="session")
def tower10007():
    E, t, R, delta = make_curve("p10007d6")
    return build_tower(E, t, R, delta)


@pytest.fixture(scope="session")
def tower12289():
    E, t, R, delta = make_curve("p12289d6")
    return build_tower(E, t, R, delta)


@pytest.fixture(scope="session")
def tower_big():
    """Height-12 tower (d = 4096) over the NTT-friendly prime 167772161."""
    E, t, R, delta = make_curve("p167772161d12")
    return build_tower(E, t, R, delta)


@pytest.fixture
def rng():
    return random.Random(20260824)
