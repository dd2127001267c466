from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from enum import Enum

from app.config import DEFAULT_TOLERANCE
from app.exceptions import (
    AllZeroGiven,
    InvalidInput,
    KindMismatch,
    SpaceMismatch,
    UndefinedColumn,
    ZeroEvidence,
)
from app.models.measures import (
    AxiomCheck,
    PossibilityDistribution,
    ProbabilityDistribution,
)
from app.models.spaces import OutcomeLabel, SampleSpace, SpaceKind
from app.models.values import ONE, ZERO, Value, at_most, close, maximum, total

Matrix = tuple[tuple[Value | None, ...], ...]


class MeasureKind(str, Enum):
    PROBABILITY = "probability"
    POSSIBILITY = "possibility"

    @property
    def space_kind(self) -> SpaceKind:
        return SpaceKind.RANDOM if self is MeasureKind.PROBABILITY else SpaceKind.FUZZY

    @property
    def combine(self) -> Callable[[Iterable[Value]], Value]:
        # sigma-система складывает, max-система берёт максимум
        return total if self is MeasureKind.PROBABILITY else maximum


class Axis(str, Enum):
    ROW = "row"
    COL = "col"


class Direction(str, Enum):
    OUT_GIVEN_ROW = "out_given_row"
    OUT_GIVEN_COL = "out_given_col"


def _freeze(values: Sequence[Sequence[Value | None]]) -> Matrix:
    return tuple(tuple(row) for row in values)


def _check_shape(values: Matrix, rows: int, cols: int, what: str) -> None:
    if len(values) != rows or any(len(row) != cols for row in values):
        raise InvalidInput(f"{what} matrix must be {rows}x{cols}")


def _check_space(kind: MeasureKind, *spaces: SampleSpace) -> None:
    for space in spaces:
        if space.kind is not kind.space_kind:
            raise KindMismatch(
                f"A {kind.value} matrix needs {kind.space_kind.value} sample spaces"
            )


@dataclass(frozen=True)
class JointDistribution:
    """
    Совместное распределение двух переменных: строки X, столбцы Y.
    """

    kind: MeasureKind
    row_space: SampleSpace
    col_space: SampleSpace
    values: Matrix
    normalized: bool = True

    def __post_init__(self):
        object.__setattr__(self, "kind", MeasureKind(self.kind))
        object.__setattr__(self, "values", _freeze(self.values))
        _check_shape(self.values, self.row_space.size, self.col_space.size, "Joint")
        _check_space(self.kind, self.row_space, self.col_space)
        if any(value is None for row in self.values for value in row):
            raise InvalidInput("Joint distributions cannot contain undefined entries")

    def entry(self, x: OutcomeLabel, y: OutcomeLabel) -> Value:
        return self.values[self.row_space.index(x)][self.col_space.index(y)]

    def columns(self) -> list[list[Value]]:
        return [list(column) for column in zip(*self.values)]


@dataclass(frozen=True)
class ConditionalRelation:
    """
    Условное отношение: строки out, столбцы given; элемент равен (out | given).
    Столбец с нулевым маргиналом условия не определён (None), а не заполнен нулями.
    """

    kind: MeasureKind
    given_space: SampleSpace
    out_space: SampleSpace
    values: Matrix
    normalized: bool = True

    def __post_init__(self):
        object.__setattr__(self, "kind", MeasureKind(self.kind))
        object.__setattr__(self, "values", _freeze(self.values))
        _check_shape(self.values, self.out_space.size, self.given_space.size, "Relation")
        _check_space(self.kind, self.given_space, self.out_space)
        for j in range(self.given_space.size):
            column = [row[j] for row in self.values]
            if any(value is None for value in column) and not all(
                value is None for value in column
            ):
                raise InvalidInput(
                    f"Column {self.given_space.labels[j]!r} is partially undefined"
                )

    def column(self, given: OutcomeLabel) -> list[Value | None]:
        j = self.given_space.index(given)
        return [row[j] for row in self.values]

    def defined(self, given: OutcomeLabel) -> bool:
        return self.column(given)[0] is not None

    @property
    def defined_columns(self) -> tuple[bool, ...]:
        return tuple(self.values[0][j] is not None for j in range(self.given_space.size))

    def entry(self, out: OutcomeLabel, given: OutcomeLabel) -> Value | None:
        return self.values[self.out_space.index(out)][self.given_space.index(given)]


@dataclass(frozen=True)
class MatrixReport:
    kind: MeasureKind
    checks: tuple[AxiomCheck, ...]
    total: Value
    row_totals: tuple[Value | None, ...]
    col_totals: tuple[Value | None, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def _distribution(
    kind: MeasureKind, space: SampleSpace, values: dict[OutcomeLabel, Value]
) -> ProbabilityDistribution | PossibilityDistribution:
    if kind is MeasureKind.PROBABILITY:
        return ProbabilityDistribution(space, values)
    return PossibilityDistribution(
        space, values, normalized=any(value == 1 for value in values.values())
    )


def marginal(
    joint: JointDistribution, axis: Axis
) -> ProbabilityDistribution | PossibilityDistribution:
    """
    Извлечение переменной: сумма по другой оси для вероятности, максимум для возможности.
    """
    combine = joint.kind.combine
    if Axis(axis) is Axis.ROW:
        values = {
            label: combine(row) for label, row in zip(joint.row_space.labels, joint.values)
        }
        return _distribution(joint.kind, joint.row_space, values)
    values = {
        label: combine(column)
        for label, column in zip(joint.col_space.labels, joint.columns())
    }
    return _distribution(joint.kind, joint.col_space, values)


def condition(joint: JointDistribution, direction: Direction) -> ConditionalRelation:
    """
    Условное отношение в произведённой форме для обоих исчислений:
    joint = conditional · marginal(given).
    """
    if Direction(direction) is Direction.OUT_GIVEN_COL:
        given_space, out_space = joint.col_space, joint.row_space
        given_marginal = marginal(joint, Axis.COL)
        lines = joint.columns()
    else:
        given_space, out_space = joint.row_space, joint.col_space
        given_marginal = marginal(joint, Axis.ROW)
        lines = [list(row) for row in joint.values]

    given_values = given_marginal.vector()
    if all(value == 0 for value in given_values):
        raise AllZeroGiven("Every conditioning marginal is zero")

    columns = [
        [entry / m for entry in line] if m != 0 else [None] * out_space.size
        for line, m in zip(lines, given_values)
    ]
    values = [[column[i] for column in columns] for i in range(out_space.size)]
    return ConditionalRelation(joint.kind, given_space, out_space, values)


def joint_from_prior(
    prior: ProbabilityDistribution | PossibilityDistribution,
    conditional: ConditionalRelation,
) -> JointDistribution:
    """
    Строит совместное распределение prior(x) · cond(y | x): строки x, столбцы y.
    """
    kind = (
        MeasureKind.PROBABILITY
        if isinstance(prior, ProbabilityDistribution)
        else MeasureKind.POSSIBILITY
    )
    if conditional.kind is not kind:
        raise KindMismatch("Prior and conditional belong to different calculi")
    if conditional.given_space.labels != prior.space.labels:
        raise SpaceMismatch("Conditional must be given the prior's variable")

    rows = []
    for x in prior.space.labels:
        column = conditional.column(x)
        if column[0] is None:
            if prior[x] != 0:
                raise UndefinedColumn(f"Conditional column {x!r} is undefined")
            rows.append([prior[x] * ZERO for _ in conditional.out_space.labels])
            continue
        rows.append([prior[x] * value for value in column])

    normalized = True
    if kind is MeasureKind.POSSIBILITY:
        normalized = maximum(value for row in rows for value in row) == 1
    return JointDistribution(
        kind, prior.space, conditional.out_space, rows, normalized=normalized
    )


def identity_relation(kind: MeasureKind, space: SampleSpace) -> ConditionalRelation:
    kind = MeasureKind(kind)
    values = [
        [ONE if i == j else ZERO for j in range(space.size)] for i in range(space.size)
    ]
    return ConditionalRelation(kind, space, space, values)


def compose(first: ConditionalRelation, second: ConditionalRelation) -> ConditionalRelation:
    """
    Композиция отношений first: (z | y) и second: (x | z) в отношение (x | y).
    Для вероятности берётся сумма произведений, для возможности максимум.
    Предполагается условная независимость x и y при заданном z.
    """
    if first.kind is not second.kind:
        raise KindMismatch("Cannot compose relations of different calculi")
    if first.out_space.labels != second.given_space.labels:
        raise SpaceMismatch(
            "First relation's output space must be the second relation's given space"
        )
    combine = first.kind.combine
    second_defined = second.defined_columns

    columns: list[list[Value | None]] = []
    for y in range(first.given_space.size):
        weights = [row[y] for row in first.values]
        if weights[0] is None or any(
            w != 0 and not second_defined[z] for z, w in enumerate(weights)
        ):
            columns.append([None] * second.out_space.size)
            continue
        columns.append(
            [
                combine(
                    second.values[x][z] * w
                    for z, w in enumerate(weights)
                    if second_defined[z]
                )
                for x in range(second.out_space.size)
            ]
        )

    values = [[column[x] for column in columns] for x in range(second.out_space.size)]
    normalized = True
    if first.kind is MeasureKind.POSSIBILITY:
        normalized = all(
            maximum(column) == 1 for column in columns if column[0] is not None
        )
    return ConditionalRelation(
        first.kind, first.given_space, second.out_space, values, normalized=normalized
    )


def _evidence(
    prior: ProbabilityDistribution | PossibilityDistribution,
    likelihood: ConditionalRelation,
    observed: OutcomeLabel,
    kind: MeasureKind,
) -> list[Value]:
    if likelihood.kind is not kind:
        raise KindMismatch(f"Update needs a {kind.value} likelihood")
    if likelihood.given_space.labels != prior.space.labels:
        raise SpaceMismatch("Likelihood must be given the prior's variable")
    row = likelihood.values[likelihood.out_space.index(observed)]

    numerators = []
    for x, value in zip(prior.space.labels, row):
        if value is None:
            if prior[x] != 0:
                raise UndefinedColumn(f"Likelihood column {x!r} is undefined")
            numerators.append(prior[x] * ZERO)
            continue
        numerators.append(prior[x] * value)
    return numerators


def bayes_update(
    prior: ProbabilityDistribution,
    likelihood: ConditionalRelation,
    observed: OutcomeLabel,
) -> ProbabilityDistribution:
    """
    Апостериорная вероятность p(x | y) = p(x) p(y | x) / Σ_k p(x_k) p(y | x_k).
    """
    numerators = _evidence(prior, likelihood, observed, MeasureKind.PROBABILITY)
    evidence = total(numerators)
    if evidence == 0:
        raise ZeroEvidence(f"Observation {observed!r} is impossible under the prior")
    return ProbabilityDistribution(
        prior.space,
        {x: value / evidence for x, value in zip(prior.space.labels, numerators)},
    )


def poss_update(
    prior: PossibilityDistribution,
    likelihood: ConditionalRelation,
    observed: OutcomeLabel,
) -> PossibilityDistribution:
    """
    Апостериорная возможность π(x | y) = π(x) π(y | x) / max_k π(x_k) π(y | x_k).
    Результат нормирован по построению; субнормированный prior допустим.
    """
    numerators = _evidence(prior, likelihood, observed, MeasureKind.POSSIBILITY)
    evidence = maximum(numerators)
    if evidence == 0:
        raise ZeroEvidence(f"Observation {observed!r} is impossible under the prior")
    return PossibilityDistribution(
        prior.space,
        {x: value / evidence for x, value in zip(prior.space.labels, numerators)},
        normalized=True,
    )


def update_sequence(
    prior: ProbabilityDistribution | PossibilityDistribution,
    likelihood: ConditionalRelation,
    observations: Sequence[OutcomeLabel],
) -> ProbabilityDistribution | PossibilityDistribution:
    posterior = prior
    for observed in observations:
        if isinstance(posterior, ProbabilityDistribution):
            posterior = bayes_update(posterior, likelihood, observed)
        else:
            posterior = poss_update(posterior, likelihood, observed)
    return posterior


def _range_check(kind: MeasureKind, entries: list[Value]) -> AxiomCheck:
    if kind is MeasureKind.PROBABILITY:
        bad = [value for value in entries if value < 0]
        return AxiomCheck(
            "nonnegativity", not bad, f"negative entry {bad[0]}" if bad else None
        )
    bad = [value for value in entries if value < 0 or value > 1]
    return AxiomCheck("range", not bad, f"entry {bad[0]} outside [0, 1]" if bad else None)


def validate_joint(
    joint: JointDistribution, tolerance: float = DEFAULT_TOLERANCE
) -> MatrixReport:
    """
    Проверка совместного распределения: сумма 1 для вероятности,
    максимум 1 для нормированной возможности.
    """
    entries = [value for row in joint.values for value in row]
    combine = joint.kind.combine
    grand = combine(entries)

    if joint.kind is MeasureKind.PROBABILITY:
        ok = close(grand, ONE, tolerance)
        normality = AxiomCheck("normality", ok, None if ok else f"entries sum to {grand}")
    elif joint.normalized:
        ok = close(grand, ONE, tolerance)
        normality = AxiomCheck(
            "normality", ok, None if ok else f"flagged normalized but max is {grand}"
        )
    else:
        ok = at_most(grand, ONE, tolerance) and not close(grand, ONE, tolerance)
        normality = AxiomCheck(
            "normality", ok, None if ok else f"flagged sub-normalized but max is {grand}"
        )

    return MatrixReport(
        kind=joint.kind,
        checks=(_range_check(joint.kind, entries), normality),
        total=grand,
        row_totals=tuple(combine(row) for row in joint.values),
        col_totals=tuple(combine(column) for column in joint.columns()),
    )


def _defined_total(
    combine: Callable[[Iterable[Value]], Value], line: Sequence[Value | None]
) -> Value | None:
    defined = [value for value in line if value is not None]
    return combine(defined) if defined else None


def validate_relation(
    relation: ConditionalRelation, tolerance: float = DEFAULT_TOLERANCE
) -> MatrixReport:
    entries = [value for row in relation.values for value in row if value is not None]
    combine = relation.kind.combine
    columns = [
        [row[j] for row in relation.values] for j in range(relation.given_space.size)
    ]
    col_totals = tuple(
        combine(column) if column[0] is not None else None for column in columns
    )

    witness = None
    for label, value in zip(relation.given_space.labels, col_totals):
        if value is None:
            continue
        if relation.kind is MeasureKind.POSSIBILITY and not relation.normalized:
            if not at_most(value, ONE, tolerance):
                witness = f"column {label!r} has max {value}"
                break
        elif not close(value, ONE, tolerance):
            witness = f"column {label!r} totals {value}"
            break
    columns_check = AxiomCheck("columns", witness is None, witness)

    return MatrixReport(
        kind=relation.kind,
        checks=(_range_check(relation.kind, entries), columns_check),
        total=combine(entries) if entries else ZERO,
        row_totals=tuple(_defined_total(combine, row) for row in relation.values),
        col_totals=col_totals,
    )
