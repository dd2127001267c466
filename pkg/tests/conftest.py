import json
from fractions import Fraction

import pytest

from app.models.inference import ConditionalRelation, JointDistribution, MeasureKind
from app.models.measures import PossibilityDistribution, ProbabilityDistribution
from app.models.spaces import SampleSpace, SpaceKind

F = Fraction


@pytest.fixture(autouse=True)
def no_log_file(monkeypatch):
    monkeypatch.setattr("app.main.LOG_FILE", "")


@pytest.fixture
def write_json(tmp_path):
    """
    Записывает документ во временный файл и возвращает путь.
    """

    def write(name: str, document) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def random_space():
    return SampleSpace(SpaceKind.RANDOM, ("x1", "x2", "x3"))


@pytest.fixture
def fuzzy_space():
    return SampleSpace(SpaceKind.FUZZY, ("x1", "x2", "x3"))


@pytest.fixture
def uniform_probability(random_space):
    return ProbabilityDistribution(random_space, {label: F(1, 3) for label in random_space.labels})


@pytest.fixture
def possibility(fuzzy_space):
    return PossibilityDistribution(
        fuzzy_space, {"x1": F(1, 2), "x2": F(1), "x3": F(1, 5)}, normalized=True
    )


@pytest.fixture
def probability_joint():
    return JointDistribution(
        MeasureKind.PROBABILITY,
        SampleSpace(SpaceKind.RANDOM, ("x1", "x2")),
        SampleSpace(SpaceKind.RANDOM, ("y1", "y2")),
        [[F(1, 10), F(2, 10)], [F(3, 10), F(4, 10)]],
    )


@pytest.fixture
def possibility_joint():
    return JointDistribution(
        MeasureKind.POSSIBILITY,
        SampleSpace(SpaceKind.FUZZY, ("x1", "x2")),
        SampleSpace(SpaceKind.FUZZY, ("y1", "y2")),
        [[F(1), F(2, 5)], [F(7, 10), F(1, 5)]],
    )


@pytest.fixture
def likelihood():
    # p(y | x), столбцы x1 и x2
    return ConditionalRelation(
        MeasureKind.PROBABILITY,
        SampleSpace(SpaceKind.RANDOM, ("x1", "x2")),
        SampleSpace(SpaceKind.RANDOM, ("y1", "y2")),
        [[F(9, 10), F(3, 10)], [F(1, 10), F(7, 10)]],
    )
