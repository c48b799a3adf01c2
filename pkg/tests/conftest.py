from fractions import Fraction as F

import pytest

from prevpoly._rat import rat
from prevpoly.gambles import GambleSet, PossibilitySpace
from prevpoly.polytope import HRep


@pytest.fixture
def abc():
    return PossibilitySpace(("a", "b", "c"))


@pytest.fixture
def toy_gambles(abc):
    """Two gambles on three outcomes: f=(1,1/2,0), g=(0,2/3,1)."""
    return GambleSet.of(abc, [("f", (1, "1/2", 0)), ("g", (0, "2/3", 1))])


@pytest.fixture
def toy_hrep():
    """The minimal two-coordinate system: x,y >= 0, x+(3/4)y <= 1, (2/3)x+y <= 1."""
    return HRep.of(
        [
            ((-1, 0), 0),
            ((0, -1), 0),
            ((1, rat("3/4")), 1),
            ((rat("2/3"), 1), 1),
        ],
        names=("f", "g"),
    )


TOY_VERTICES = ((0, 0), (0, 1), (F(1, 2), F(2, 3)), (1, 0))


@pytest.fixture
def three_on_three(abc):
    return GambleSet.of(
        abc,
        [("f", (1, 0, "1/2")), ("g", (0, "1/2", 1)), ("h", ("1/2", 1, 0))],
    )
