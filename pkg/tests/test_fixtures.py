from fractions import Fraction

import pytest

from app.exceptions import DegenerateGrid, UnknownFixture
from app.fixtures import FIXTURE_NAMES, generate_fixture
from app.models.disjunction import PairClass, classify_pair, verify_prop_5_2
from app.models.intensions import (
    compatibility_distribution,
    is_exhaustive,
    is_fuzzy_setup,
    subsethood,
)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_every_fixture_validates(name):
    fixture = generate_fixture(name)
    assert fixture.subject.weights
    assert all(f.universe == fixture.universe for _, f in fixture.concepts)


def test_age45_pair_classes():
    fixture = generate_fixture("example-5.1")
    fX, concepts = fixture.subject, dict(fixture.concepts)
    classes = [
        classify_pair(fX, concepts["YOUTH"], concepts["MID"]),
        classify_pair(fX, concepts["AGED"], concepts["MID"]),
        classify_pair(fX, concepts["YOUTH"], concepts["AGED"]),
    ]
    assert classes == [
        PairClass.PROJECTION_NESTED,
        PairClass.PROJECTION_NESTED,
        PairClass.PROJECTION_EXCLUSIVE,
    ]


def test_age40_compatibility():
    fixture = generate_fixture("age-groups")
    dist = compatibility_distribution(fixture.subject, fixture.concepts)
    assert dist.vector() == [Fraction(1, 2), 1, 0]
    assert is_exhaustive(fixture.subject, fixture.concepts)
    report = verify_prop_5_2(fixture.subject, fixture.concepts)
    assert report.argmax == "MID"
    assert report.pi_space == 1


def test_innocent_fixture():
    fixture = generate_fixture("fig-4d")
    assert all(subsethood(fixture.subject, f) == 1 for _, f in fixture.concepts)
    report = verify_prop_5_2(fixture.subject, fixture.concepts)
    assert report.argmax == "x_i"


def test_projection_figures():
    nonexclusive = generate_fixture("fig-3a")
    exclusive = generate_fixture("fig-3b")
    assert is_fuzzy_setup(nonexclusive.subject, nonexclusive.concepts).fuzzy
    assert not is_fuzzy_setup(exclusive.subject, exclusive.concepts).fuzzy


def test_unknown_fixture():
    with pytest.raises(UnknownFixture):
        generate_fixture("fig-9z")


def test_fixtures_need_square_grids():
    with pytest.raises(DegenerateGrid):
        generate_fixture("fig-4d", 64, 32)
