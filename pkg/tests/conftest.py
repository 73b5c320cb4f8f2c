from pathlib import Path

import pytest

from stratkit.exactla import Field
from stratkit.presentation import compute_basis, presentation_from_parts

DATA = Path(__file__).parent / "data"

F2 = Field.prime(2)


def a2(field=F2):
    return compute_basis(presentation_from_parts(field, ["1", "2"], [("a", "1", "2")], name="A2"))


def two_cycle(field=F2):
    pres = presentation_from_parts(
        field, ["1", "2"], [("a", "1", "2"), ("b", "2", "1")],
        [[(1, ["a", "b"])], [(1, ["b", "a"])]], nilpotency_bound=1, name="cycle")
    return compute_basis(pres)


def point(field=F2):
    return compute_basis(presentation_from_parts(field, ["1"], [], nilpotency_bound=1, name="k"))


@pytest.fixture
def A2():
    return a2()


@pytest.fixture
def cycle():
    return two_cycle()


@pytest.fixture
def k():
    return point()
