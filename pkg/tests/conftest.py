import random

import pytest

from melonclass.melonic import MelonicConstruction, Stage


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260819)


def construction(*stages) -> MelonicConstruction:
    """Build a construction from (banana tuple, parent stage, parent banana)
    triples."""
    return MelonicConstruction(tuple(Stage(tuple(b), p, k)
                                     for b, p, k in stages))
