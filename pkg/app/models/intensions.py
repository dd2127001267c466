from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from app.exceptions import (
    BothEmpty,
    DegenerateGrid,
    DimensionMismatch,
    EmptyReference,
    InvalidInput,
    UniverseMismatch,
    ZeroVector,
)
from app.models.measures import PossibilityDistribution
from app.models.spaces import OutcomeLabel, SampleSpace, SpaceKind

Atom = int


@dataclass(frozen=True)
class IntensionSet:
    """
    Интенсионал концепции: конечный набор атомов с положительными целыми весами.
    Атомы с нулевым весом не хранятся.
    """

    universe: str
    weights: Mapping[Atom, int] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for atom, weight in sorted(self.weights.items()):
            if not isinstance(atom, int) or atom < 0:
                raise InvalidInput(f"Atom id must be a non-negative integer, got {atom!r}")
            if not isinstance(weight, int) or weight < 0:
                raise InvalidInput(f"Atom {atom} has invalid weight {weight!r}")
            if weight:
                cleaned[atom] = weight
        object.__setattr__(self, "weights", cleaned)

    def __hash__(self):
        return hash((self.universe, tuple(self.weights.items())))

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def support(self) -> frozenset[Atom]:
        return frozenset(self.weights)

    def dominated_by(self, other: "IntensionSet") -> bool:
        """
        Поатомное доминирование весов: self ⊆ other.
        """
        return all(other.weights.get(atom, 0) >= w for atom, w in self.weights.items())


LabeledConcept = tuple[OutcomeLabel, IntensionSet]


class SetAlgebra(NamedTuple):
    intersection: IntensionSet
    union: IntensionSet
    difference: IntensionSet


class FuzzySetup(NamedTuple):
    fuzzy: bool
    witness: tuple[OutcomeLabel, OutcomeLabel] | None


class SpaceKindReport(NamedTuple):
    kind: SpaceKind
    consistent: bool
    witness: tuple[OutcomeLabel, OutcomeLabel] | None


@dataclass(frozen=True)
class EllipseSpec:
    center: tuple[float, float]
    semi_axes: tuple[float, float]
    rotation: float = 0.0
    label: OutcomeLabel = "X"

    def __post_init__(self):
        if min(self.semi_axes) <= 0:
            raise InvalidInput(f"Ellipse {self.label!r} needs positive semi-axes")


@dataclass(frozen=True)
class Grid:
    cols: int
    rows: int
    cell_size: float = 1.0
    origin: tuple[float, float] = (0.0, 0.0)

    @property
    def universe(self) -> str:
        return f"grid:{self.cols}x{self.rows}@{self.cell_size:g}+{self.origin[0]:g},{self.origin[1]:g}"

    @property
    def cell_area(self) -> float:
        return self.cell_size * self.cell_size


def measure(f: IntensionSet) -> int:
    return sum(f.weights.values())


def _same_universe(f: IntensionSet, g: IntensionSet) -> None:
    if f.universe != g.universe:
        raise UniverseMismatch(
            f"Intensions belong to different universes: {f.universe!r} and {g.universe!r}"
        )


def intersection(f: IntensionSet, g: IntensionSet) -> IntensionSet:
    _same_universe(f, g)
    return IntensionSet(
        f.universe,
        {atom: min(w, g.weights[atom]) for atom, w in f.weights.items() if atom in g.weights},
    )


def union(f: IntensionSet, g: IntensionSet) -> IntensionSet:
    _same_universe(f, g)
    merged = dict(f.weights)
    for atom, w in g.weights.items():
        merged[atom] = max(merged.get(atom, 0), w)
    return IntensionSet(f.universe, merged)


def difference(f: IntensionSet, g: IntensionSet) -> IntensionSet:
    _same_universe(f, g)
    return IntensionSet(
        f.universe,
        {atom: max(w - g.weights.get(atom, 0), 0) for atom, w in f.weights.items()},
    )


def set_algebra(f: IntensionSet, g: IntensionSet) -> SetAlgebra:
    """
    Пересечение берёт поатомный минимум, объединение максимум, разность усекает вычитание.
    При таком соглашении |f∪g| + |f∩g| = |f| + |g| выполняется точно.
    """
    return SetAlgebra(intersection(f, g), union(f, g), difference(f, g))


def subsethood(fX: IntensionSet, fC: IntensionSet) -> Fraction:
    """
    Степень включения |fX ∩ fC| / |fX|: уверенность классификации X как C.
    """
    reference = measure(fX)
    if reference == 0:
        raise EmptyReference("Subsethood is undefined for an empty reference intension")
    return Fraction(measure(intersection(fX, fC)), reference)


def similarity(f: IntensionSet, g: IntensionSet) -> Fraction:
    joined = measure(union(f, g))
    if joined == 0:
        raise BothEmpty("Similarity is undefined for two empty intensions")
    return Fraction(measure(intersection(f, g)), joined)


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"Vectors have shapes {a.shape} and {b.shape}")
    norms = np.linalg.norm(a) * np.linalg.norm(b)
    if norms == 0:
        raise ZeroVector("Cosine is undefined for a zero vector")
    return float(min(abs(np.dot(a, b)) / norms, 1.0))


def compatibility_distribution(
    fX: IntensionSet, concepts: Sequence[LabeledConcept]
) -> PossibilityDistribution:
    """
    Интуитивная возможность π(x_i) = subsethood(fX, f_{x_i}) по каждой концепции.
    Распределение нормировано, если хотя бы одно значение равно единице.
    """
    if measure(fX) == 0:
        raise EmptyReference("Compatibility needs a non-empty subject intension")
    space = SampleSpace(SpaceKind.FUZZY, tuple(label for label, _ in concepts))
    values = {label: subsethood(fX, fC) for label, fC in concepts}
    return PossibilityDistribution(
        space, values, normalized=any(value == 1 for value in values.values())
    )


def _triple_overlap(fX: IntensionSet, fi: IntensionSet, fj: IntensionSet) -> bool:
    return bool(fX.support & fi.support & fj.support)


def is_fuzzy_setup(fX: IntensionSet, concepts: Sequence[LabeledConcept]) -> FuzzySetup:
    for _, fC in concepts:
        _same_universe(fX, fC)
    for i, (label_i, fi) in enumerate(concepts):
        for label_j, fj in concepts[i + 1 :]:
            if _triple_overlap(fX, fi, fj):
                return FuzzySetup(True, (label_i, label_j))
    return FuzzySetup(False, None)


def is_exhaustive(fX: IntensionSet, concepts: Sequence[LabeledConcept]) -> bool:
    if measure(fX) == 0:
        raise EmptyReference("Exhaustiveness needs a non-empty subject intension")
    return any(subsethood(fX, fC) == 1 for _, fC in concepts)


def check_space_kind(
    kind: SpaceKind, fX: IntensionSet, concepts: Sequence[LabeledConcept]
) -> SpaceKindReport:
    """
    Случайное пространство требует взаимоисключающих исходов,
    нечёткое требует хотя бы одной пары с исходом «и то, и другое».
    """
    kind = SpaceKind(kind)
    setup = is_fuzzy_setup(fX, concepts)
    if kind is SpaceKind.RANDOM:
        return SpaceKindReport(kind, not setup.fuzzy, setup.witness)
    return SpaceKindReport(kind, setup.fuzzy, setup.witness)


def rasterize_ellipse(spec: EllipseSpec, grid: Grid) -> IntensionSet:
    """
    Атомы соответствуют клеткам сетки, центры которых лежат внутри эллипса; вес клетки 1.
    Номер атома: row * cols + col.
    """
    if grid.cols <= 0 or grid.rows <= 0 or grid.cell_size <= 0:
        raise DegenerateGrid(
            f"Grid {grid.cols}x{grid.rows} with cell size {grid.cell_size} is degenerate"
        )
    rows, cols = np.indices((grid.rows, grid.cols))
    x = grid.origin[0] + (cols + 0.5) * grid.cell_size - spec.center[0]
    y = grid.origin[1] + (rows + 0.5) * grid.cell_size - spec.center[1]

    cos_t, sin_t = np.cos(spec.rotation), np.sin(spec.rotation)
    u = x * cos_t + y * sin_t
    v = -x * sin_t + y * cos_t
    inside = (u / spec.semi_axes[0]) ** 2 + (v / spec.semi_axes[1]) ** 2 <= 1.0

    atoms = np.flatnonzero(inside.ravel())
    return IntensionSet(grid.universe, {int(atom): 1 for atom in atoms})
