from dataclasses import dataclass, field
from fractions import Fraction

from loguru import logger

from app.exceptions import DegenerateGrid, FixtureValidationError, UnknownFixture
from app.models.disjunction import PairClass, classify_pair
from app.models.intensions import (
    EllipseSpec,
    Grid,
    IntensionSet,
    LabeledConcept,
    compatibility_distribution,
    is_exhaustive,
    is_fuzzy_setup,
    rasterize_ellipse,
)

# Геометрия задаётся в мировом квадрате 64x64; сетка определяет только разрешение
WORLD_SIZE = 64.0

NESTED = PairClass.PROJECTION_NESTED
EXCLUSIVE = PairClass.PROJECTION_EXCLUSIVE
GENERAL = PairClass.GENERAL


@dataclass(frozen=True)
class FixtureSpec:
    name: str
    subject: EllipseSpec
    concepts: tuple[EllipseSpec, ...]
    pair_classes: dict[tuple[str, str], PairClass] = field(default_factory=dict)
    compatibility: dict[str, Fraction] = field(default_factory=dict)
    fuzzy: bool | None = None
    exhaustive: bool | None = None


@dataclass(frozen=True)
class Fixture:
    name: str
    grid: Grid
    subject_label: str
    subject: IntensionSet
    concepts: tuple[LabeledConcept, ...]

    @property
    def universe(self) -> str:
        return self.subject.universe


def _circle(label: str, x: float, y: float, radius: float) -> EllipseSpec:
    return EllipseSpec(center=(x, y), semi_axes=(radius, radius), label=label)


# Возраст 40: ровно половина f_age40 лежит в YOUTH, вся в MID, ничего в AGED.
# Правая граница YOUTH почти вертикальна у x = 32, центр f_age40 стоит на углу клеток.
AGE_GROUPS = FixtureSpec(
    name="age-groups",
    subject=_circle("age40", 32.0, 32.0, 4.0),
    concepts=(
        EllipseSpec(center=(22.0, 32.0), semi_axes=(10.0, 40.0), label="YOUTH"),
        _circle("MID", 32.0, 32.0, 10.0),
        _circle("AGED", 52.0, 32.0, 10.0),
    ),
    compatibility={"YOUTH": Fraction(1, 2), "MID": Fraction(1), "AGED": Fraction(0)},
    exhaustive=True,
)

EXAMPLE_AGE45 = FixtureSpec(
    name="example-5.1",
    subject=_circle("age45", 36.0, 32.0, 6.0),
    concepts=(
        _circle("YOUTH", 12.0, 32.0, 20.0),
        _circle("MID", 32.0, 32.0, 16.0),
        _circle("AGED", 58.0, 32.0, 20.0),
    ),
    pair_classes={
        ("YOUTH", "MID"): NESTED,
        ("AGED", "MID"): NESTED,
        ("YOUTH", "AGED"): EXCLUSIVE,
    },
    exhaustive=True,
)

# Интенсионал классифицируемого человека совпадает с интенсионалом RE
EXAMPLE_RESEARCHER = FixtureSpec(
    name="example-5.2",
    subject=_circle("person", 32.0, 32.0, 8.0),
    concepts=(
        _circle("EX", 26.0, 36.0, 8.0),
        _circle("SC", 38.0, 36.0, 8.0),
        _circle("RE", 32.0, 32.0, 8.0),
    ),
    pair_classes={
        ("EX", "SC"): GENERAL,
        ("EX", "RE"): NESTED,
        ("SC", "RE"): NESTED,
    },
    fuzzy=True,
    exhaustive=True,
)

PROJECTION_NONEXCLUSIVE = FixtureSpec(
    name="fig-3a",
    subject=_circle("X", 32.0, 34.0, 6.0),
    concepts=(_circle("x_i", 26.0, 34.0, 8.0), _circle("x_j", 38.0, 34.0, 8.0)),
    pair_classes={("x_i", "x_j"): GENERAL},
    fuzzy=True,
)

# Концепции пересекаются только выше вытянутого fX
PROJECTION_EXCLUSIVE = FixtureSpec(
    name="fig-3b",
    subject=EllipseSpec(center=(32.0, 30.0), semi_axes=(14.0, 2.5), label="X"),
    concepts=(_circle("x_i", 24.0, 40.0, 10.0), _circle("x_j", 40.0, 40.0, 10.0)),
    pair_classes={("x_i", "x_j"): EXCLUSIVE},
    fuzzy=False,
)

INNOCENT = FixtureSpec(
    name="fig-4d",
    subject=_circle("X", 32.0, 32.0, 4.0),
    concepts=(_circle("x_i", 30.0, 32.0, 12.0), _circle("x_j", 34.0, 32.0, 12.0)),
    pair_classes={("x_i", "x_j"): NESTED},
    compatibility={"x_i": Fraction(1), "x_j": Fraction(1)},
    fuzzy=True,
    exhaustive=True,
)

CATALOG: dict[str, FixtureSpec] = {
    spec.name: spec
    for spec in (
        EXAMPLE_AGE45,
        EXAMPLE_RESEARCHER,
        AGE_GROUPS,
        PROJECTION_NONEXCLUSIVE,
        PROJECTION_EXCLUSIVE,
        INNOCENT,
    )
}


def fixture_grid(cols: int, rows: int) -> Grid:
    if cols <= 0 or rows <= 0:
        raise DegenerateGrid(f"Grid {cols}x{rows} is degenerate")
    if cols != rows:
        raise DegenerateGrid("Fixtures need a square grid")
    return Grid(cols, rows, WORLD_SIZE / cols)


def _expect(ok: bool, name: str, detail: str) -> None:
    if not ok:
        raise FixtureValidationError(f"Fixture {name!r} does not hold: {detail}")


def validate_fixture(spec: FixtureSpec, fixture: Fixture) -> None:
    """
    Геометрия проверяется после растеризации: при выбранном разрешении
    заявленные отношения включения и пересечения обязаны выполняться.
    """
    fX = fixture.subject
    concepts = dict(fixture.concepts)
    _expect(bool(fX.weights), spec.name, "subject intension is empty at this resolution")

    for (label_i, label_j), expected in spec.pair_classes.items():
        actual = classify_pair(fX, concepts[label_i], concepts[label_j])
        _expect(
            actual is expected,
            spec.name,
            f"{label_i}/{label_j} classified as {actual.value}, expected {expected.value}",
        )

    if spec.compatibility:
        compatibility = compatibility_distribution(fX, fixture.concepts)
        for label, expected in spec.compatibility.items():
            _expect(
                compatibility[label] == expected,
                spec.name,
                f"π({label}) = {compatibility[label]}, expected {expected}",
            )
    if spec.fuzzy is not None:
        _expect(
            is_fuzzy_setup(fX, fixture.concepts).fuzzy is spec.fuzzy,
            spec.name,
            f"fuzzy setup should be {spec.fuzzy}",
        )
    if spec.exhaustive is not None:
        _expect(
            is_exhaustive(fX, fixture.concepts) is spec.exhaustive,
            spec.name,
            f"exhaustiveness should be {spec.exhaustive}",
        )


def generate_fixture(name: str, cols: int = 64, rows: int = 64) -> Fixture:
    """
    Растеризует именованную конфигурацию и проверяет её заявленные свойства.
    """
    spec = CATALOG.get(name)
    if spec is None:
        raise UnknownFixture(f"Unknown fixture {name!r}; known: {sorted(CATALOG)}")
    grid = fixture_grid(cols, rows)
    fixture = Fixture(
        name=spec.name,
        grid=grid,
        subject_label=spec.subject.label,
        subject=rasterize_ellipse(spec.subject, grid),
        concepts=tuple(
            (concept.label, rasterize_ellipse(concept, grid)) for concept in spec.concepts
        ),
    )
    validate_fixture(spec, fixture)
    logger.debug(f"Fixture {name} validated on a {cols}x{rows} grid")
    return fixture


FIXTURE_NAMES: tuple[str, ...] = tuple(CATALOG)
