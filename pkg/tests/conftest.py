import random
from fractions import Fraction

import pytest

from linecat import LineConfig


@pytest.fixture
def cfg3() -> LineConfig:
    """Three lines meeting in a unit-area clockwise triangle."""
    return LineConfig.build([("a", 0, 0), ("b", 1, 0), ("c", 2, -2)])


@pytest.fixture
def cfg4() -> LineConfig:
    """Four lines with a clockwise convex quadrilateral of intersections."""
    return LineConfig.build([("a", 0, 0), ("b", 3, -3),
                             ("c", -1, Fraction(3, 2)),
                             ("d", 2, Fraction(-5, 2))])


def make_random_config(seed: int, n: int) -> LineConfig:
    rng = random.Random(seed)
    while True:
        try:
            return LineConfig.build([
                (chr(97 + i),
                 Fraction(rng.randint(-8, 8), rng.randint(1, 4)),
                 Fraction(rng.randint(-8, 8), rng.randint(1, 4)))
                for i in range(n)])
        except Exception:
            continue


@pytest.fixture
def cfg52() -> LineConfig:
    """Quadrilateral with both degree-zero vertices interior to the x-range
    of the argument points (the two-tree telescoping shape)."""
    return LineConfig.build([("a", 1, 0), ("b", -2, -4), ("c", 0, -1),
                             ("d", 3, Fraction(5, 2))])


def nonagon() -> LineConfig:
    """Nine lines whose intersection cycle is a clockwise polygon with one
    reflex vertex; the two convex pieces meet along chords through the
    b/f and e/h intersections."""
    V = {"ab": (Fraction(1, 2), Fraction(-3, 2)), "bc": (0, 0), "cd": (2, 2),
         "de": (4, 2), "ef": (5, 0), "fg": (7, Fraction(1, 2)),
         "gh": (8, -1), "hi": (5, -3), "ia": (2, Fraction(-14, 5))}
    order = ["ab", "bc", "cd", "de", "ef", "fg", "gh", "hi", "ia"]
    lines = {}
    for k, key in enumerate(order):
        nxt = order[(k + 1) % 9]
        (x1, y1), (x2, y2) = V[key], V[nxt]
        t = Fraction(y2 - y1, x2 - x1)
        s = Fraction(y1) - t * Fraction(x1)
        lines[key[1]] = (t, s)
    return LineConfig.build([(nm, *lines[nm]) for nm in sorted(lines)])


@pytest.fixture
def cfg9() -> LineConfig:
    return nonagon()
