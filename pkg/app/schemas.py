from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    FilePath,
    ValidationError,
    field_validator,
)

from app.config import DEFAULT_GRID, DEFAULT_SEED, DEFAULT_TOLERANCE
from app.models.inference import ConditionalRelation, JointDistribution, MeasureKind
from app.models.intensions import Grid, IntensionSet
from app.models.measures import (
    FrequencyCounts,
    PossibilityDistribution,
    ProbabilityDistribution,
)
from app.models.spaces import SampleSpace, SpaceKind
from app.models.values import Value, to_value


class RationalIn(BaseModel):
    """
    Точное рациональное число во входном документе.
    """

    num: int = Field(..., description="Числитель")
    den: int = Field(..., gt=0, description="Знаменатель (больше 0)")


def parse_number(raw: Any) -> Value:
    """
    Число во входном документе: целое, вещественное, строка "1/3" или {num, den}.
    Ошибка разбора становится ошибкой валидации поля.
    """
    if isinstance(raw, dict):
        try:
            rational = RationalIn.model_validate(raw)
        except ValidationError as ex:
            raise ValueError(f"not a rational: {ex.errors()[0]['msg']}")
        return Fraction(rational.num, rational.den)
    try:
        return to_value(raw)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ValueError(f"not a number: {raw!r}")


NumberIn = Annotated[Any, BeforeValidator(parse_number)]


class SampleSpaceSchema(BaseModel):
    """
    Модель выборочного пространства: случайного или нечёткого.
    """

    kind: Literal["random", "fuzzy"] = Field(..., description="Тип пространства")
    labels: list[str] = Field(
        ..., min_length=1, description="Метки исходов в объявленном порядке"
    )

    def to_domain(self) -> SampleSpace:
        return SampleSpace(SpaceKind(self.kind), tuple(self.labels))

    @classmethod
    def from_domain(cls, space: SampleSpace) -> "SampleSpaceSchema":
        return cls(kind=space.kind.value, labels=list(space.labels))


class IntensionSetSchema(BaseModel):
    """
    Интенсионал концепции: атомы с положительными весами.
    """

    universe: str = Field(..., min_length=1, description="Идентификатор вселенной атомов")
    atoms: list[
        tuple[Annotated[int, Field(ge=0)], Annotated[int, Field(ge=1)]]
    ] = Field(default_factory=list, description="Пары [id атома, вес]")

    @field_validator("atoms")
    @classmethod
    def distinct_atoms(cls, atoms):
        ids = [atom for atom, _ in atoms]
        if len(set(ids)) != len(ids):
            raise ValueError("atom ids must be distinct")
        return atoms

    def to_domain(self) -> IntensionSet:
        return IntensionSet(self.universe, dict(self.atoms))

    @classmethod
    def from_domain(cls, f: IntensionSet) -> "IntensionSetSchema":
        return cls(universe=f.universe, atoms=[(a, w) for a, w in f.weights.items()])


class LabeledIntension(BaseModel):
    label: str = Field(..., min_length=1, description="Метка концепции или объекта")
    intension: IntensionSetSchema


class GridSchema(BaseModel):
    cols: int = Field(..., gt=0, description="Число столбцов")
    rows: int = Field(..., gt=0, description="Число строк")
    cell_size: float = Field(1.0, gt=0, description="Размер клетки")
    origin: tuple[float, float] = Field((0.0, 0.0), description="Левый нижний угол сетки")

    def to_domain(self) -> Grid:
        return Grid(self.cols, self.rows, self.cell_size, self.origin)


class FixtureSchema(BaseModel):
    """
    Документ фикстуры: интенсионал классифицируемого объекта и концепции.
    Используется командами measure, classify и compare-union.
    """

    name: str = Field("custom", description="Имя конфигурации")
    grid: GridSchema | None = Field(None, description="Сетка, если интенсионалы растеризованы")
    subject: LabeledIntension = Field(..., description="Интенсионал f_X")
    concepts: list[LabeledIntension] = Field(
        ..., min_length=1, description="Интенсионалы концепций f_{x_i}"
    )
    space_kind: Literal["random", "fuzzy"] | None = Field(
        None, description="Заявленный тип пространства для проверки"
    )

    @field_validator("concepts")
    @classmethod
    def distinct_labels(cls, concepts):
        labels = [concept.label for concept in concepts]
        if len(set(labels)) != len(labels):
            raise ValueError("concept labels must be distinct")
        return concepts

    def subject_intension(self) -> IntensionSet:
        return self.subject.intension.to_domain()

    def labeled_concepts(self) -> list[tuple[str, IntensionSet]]:
        return [(c.label, c.intension.to_domain()) for c in self.concepts]


class DistributionSchema(BaseModel):
    """
    Распределение вероятностей или возможностей.
    """

    space: SampleSpaceSchema
    kind: Literal["probability", "possibility"] = Field(..., description="Исчисление")
    normalized: bool | None = Field(
        None, description="Флаг нормировки (только для возможности)"
    )
    values: dict[str, NumberIn] = Field(..., description="Значения по меткам")

    def to_domain(self) -> ProbabilityDistribution | PossibilityDistribution:
        space = self.space.to_domain()
        values = dict(self.values)
        if self.kind == "probability":
            return ProbabilityDistribution(space, values)
        return PossibilityDistribution(
            space, values, True if self.normalized is None else self.normalized
        )


class CountsSchema(BaseModel):
    counts: dict[str, Annotated[int, Field(ge=0)]] = Field(
        ..., min_length=1, description="Число голосов по исходам"
    )

    def to_domain(self) -> FrequencyCounts:
        space = SampleSpace(SpaceKind.RANDOM, tuple(self.counts))
        return FrequencyCounts(space, dict(self.counts))


class RelationSchema(BaseModel):
    """
    Условное отношение: строки матрицы соответствуют out-меткам, столбцы given-меткам.
    """

    kind: Literal["probability", "possibility"]
    given: list[str] = Field(..., min_length=1)
    out: list[str] = Field(..., min_length=1)
    matrix: list[list[NumberIn | None]]
    normalized: bool = True

    def to_domain(self) -> ConditionalRelation:
        kind = MeasureKind(self.kind)
        return ConditionalRelation(
            kind,
            SampleSpace(kind.space_kind, tuple(self.given)),
            SampleSpace(kind.space_kind, tuple(self.out)),
            [list(row) for row in self.matrix],
            normalized=self.normalized,
        )


class JointSchema(BaseModel):
    kind: Literal["probability", "possibility"]
    rows: list[str] = Field(..., min_length=1)
    cols: list[str] = Field(..., min_length=1)
    matrix: list[list[NumberIn]]
    normalized: bool = True

    def to_domain(self) -> JointDistribution:
        kind = MeasureKind(self.kind)
        return JointDistribution(
            kind,
            SampleSpace(kind.space_kind, tuple(self.rows)),
            SampleSpace(kind.space_kind, tuple(self.cols)),
            [list(row) for row in self.matrix],
            normalized=self.normalized,
        )


# --------------- Выходные модели -------------------------


class RationalOut(BaseModel):
    """
    Рациональное число в отчёте: дробь и её десятичная запись.
    """

    num: int = Field(..., description="Числитель")
    den: int = Field(..., description="Знаменатель")
    decimal: float = Field(..., description="Десятичное приближение")


def _rational(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        value = Fraction(value)
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator, "decimal": float(value)}
    return value


ValueOut = Annotated[RationalOut | float, BeforeValidator(_rational)]


def render_values(values) -> dict:
    return {label: _rational(value) for label, value in values.items()}


def _enum_value(value):
    return getattr(value, "value", value)


EnumOut = Annotated[str, BeforeValidator(_enum_value)]


class AxiomCheckOut(BaseModel):
    name: str = Field(..., description="Название аксиомы")
    passed: bool = Field(..., description="Аксиома выполнена")
    witness: str | None = Field(None, description="Свидетель нарушения")
    skipped: bool = Field(False, description="Проверка пропущена из-за размера пространства")

    model_config = ConfigDict(from_attributes=True)


class AxiomReportOut(BaseModel):
    """
    Модель для ответа с результатами проверки аксиом.
    """

    kind: str = Field(..., description="Исчисление: probability или possibility")
    passed: bool = Field(..., description="Все аксиомы выполнены")
    checks: list[AxiomCheckOut] = Field(..., description="Проверки по отдельности")

    model_config = ConfigDict(from_attributes=True)


class SigmaTrivialityOut(BaseModel):
    sigma: ValueOut = Field(..., description="Сумма значений возможности")
    positive: int = Field(..., description="Число положительных значений")
    normalized: bool = Field(..., description="Распределение нормировано")
    exceeds_one: bool = Field(..., description="Сумма больше единицы")
    applies: bool = Field(..., description="Условия утверждения выполнены")
    passed: bool = Field(..., description="Вывод совпал с ожидаемым")

    model_config = ConfigDict(from_attributes=True)


class DistributionOut(BaseModel):
    """
    Модель для ответа с распределением; формат совпадает со входным документом.
    """

    kind: Literal["probability", "possibility"] = Field(..., description="Исчисление")
    space: SampleSpaceSchema = Field(..., description="Выборочное пространство")
    normalized: bool | None = Field(None, description="Флаг нормировки (только для возможности)")
    values: dict[str, ValueOut] = Field(..., description="Значения по меткам")

    @classmethod
    def from_domain(
        cls, dist: ProbabilityDistribution | PossibilityDistribution
    ) -> "DistributionOut":
        if isinstance(dist, ProbabilityDistribution):
            return cls(
                kind="probability",
                space=SampleSpaceSchema.from_domain(dist.space),
                values=render_values(dist.values),
            )
        return cls(
            kind="possibility",
            space=SampleSpaceSchema.from_domain(dist.space),
            normalized=dist.normalized,
            values=render_values(dist.values),
        )


class CheckResponse(BaseModel):
    """
    Ответ команды check.
    """

    axioms: AxiomReportOut = Field(..., description="Проверка аксиом")
    sigma_triviality: SigmaTrivialityOut | None = Field(
        None, description="Сумма возможностей, только для возможности"
    )


class ConceptMeasureOut(BaseModel):
    label: str = Field(..., description="Метка концепции")
    measure: int = Field(..., description="Мера интенсионала концепции")
    subsethood: ValueOut = Field(..., description="subsethood(fX, f_{x_i})")
    similarity: ValueOut = Field(..., description="similarity(fX, f_{x_i})")


class IntensionMeasuresResponse(BaseModel):
    """
    Ответ команды measure для документа фикстуры.
    """

    subject: str = Field(..., description="Метка классифицируемого объекта")
    subject_measure: int = Field(..., description="Мера интенсионала f_X")
    concepts: list[ConceptMeasureOut] = Field(..., description="Меры по концепциям")
    compatibility: DistributionOut = Field(..., description="Распределение совместимости")
    exhaustive: bool = Field(..., description="Постановка исчерпывающая")
    fuzzy_setup: bool = Field(..., description="Постановка нечёткая")
    fuzzy_witness: tuple[str, str] | None = Field(
        None, description="Пара концепций с общим атомом внутри f_X"
    )
    space_kind_consistent: bool | None = Field(
        None, description="Заявленный тип пространства согласован с фикстурой"
    )


class EventMeasureResponse(BaseModel):
    kind: str = Field(..., description="Исчисление")
    event: list[str] = Field(..., description="Метки события в объявленном порядке")
    value: ValueOut = Field(..., description="Мера события")


class PairClassReportOut(BaseModel):
    """
    Модель для ответа с возможностью объединения пары концепций.
    """

    label_i: str = Field(..., description="Метка первой концепции")
    label_j: str = Field(..., description="Метка второй концепции")
    pair_class: EnumOut = Field(..., description="Класс пары")
    pi_i: ValueOut = Field(..., description="π(x_i)")
    pi_j: ValueOut = Field(..., description="π(x_j)")
    pi_intersection: ValueOut = Field(..., description="Возможность пересечения")
    pi_union_exact: ValueOut = Field(..., description="Точная возможность объединения")
    pi_union_max: ValueOut = Field(..., description="max(π_i, π_j)")
    pi_union_sum: ValueOut = Field(..., description="Сумма за вычетом пересечения")
    pi_union_sigma: ValueOut = Field(..., description="π_i + π_j без ограничения единицей")
    max_error: ValueOut = Field(..., description="Точное значение минус max")

    model_config = ConfigDict(from_attributes=True)


class PairClassOut(BaseModel):
    label_i: str = Field(..., description="Метка первой концепции")
    label_j: str = Field(..., description="Метка второй концепции")
    pair_class: str = Field(..., description="Класс пары")


class ClassifyResponse(BaseModel):
    fixture: str = Field(..., description="Имя фикстуры")
    pairs: list[PairClassOut] = Field(..., description="Классы всех пар")
    fuzzy_setup: bool = Field(..., description="Постановка нечёткая")


class FeatureExtractionOut(BaseModel):
    pi_space: ValueOut = Field(..., description="Возможность всего пространства")
    max_value: ValueOut = Field(..., description="Наибольшая возможность концепции")
    argmax: str = Field(..., description="Концепция с наибольшей возможностью")
    passed: bool = Field(..., description="Обе величины равны единице")

    model_config = ConfigDict(from_attributes=True)


class UnionComparisonResponse(BaseModel):
    """
    Ответ команды compare-union для документа фикстуры.
    """

    fixture: str = Field(..., description="Имя фикстуры")
    pairs: list[PairClassReportOut] = Field(..., description="Отчёты по парам")
    exact_maxitivity: bool = Field(..., description="Вложенные пары разрешаются max точно")
    unstrict_max: bool = Field(..., description="max остаётся нижней границей")
    violations: list[str] = Field(..., description="Нарушения нижней границы")
    feature_extraction: FeatureExtractionOut | None = Field(
        None, description="Извлечение признака, если постановка исчерпывающая"
    )


class ProbUnionResponse(BaseModel):
    """
    Ответ команды compare-union для распределения вероятностей и двух событий.
    """

    p_a: ValueOut = Field(..., description="p(A)")
    p_b: ValueOut = Field(..., description="p(B)")
    p_intersection: ValueOut = Field(..., description="p(A∩B)")
    p_union: ValueOut = Field(..., description="p(A∪B)")
    bounds_ok: bool = Field(..., description="max <= p(A∪B) <= min(1, p(A) + p(B))")
    additive_case: bool = Field(..., description="События несовместны")
    nested_case: bool = Field(..., description="Одно событие вложено в другое")
    trivial: bool = Field(..., description="Объединение сводится к max")
    pair_class: EnumOut | None = Field(None, description="Класс пары, если события несовместны")

    model_config = ConfigDict(from_attributes=True)


class MatrixReportOut(BaseModel):
    """
    Модель для ответа с проверкой совместного распределения или условного отношения.
    """

    kind: EnumOut = Field(..., description="Исчисление")
    passed: bool = Field(..., description="Все проверки пройдены")
    checks: list[AxiomCheckOut] = Field(..., description="Проверки по отдельности")
    total: ValueOut = Field(..., description="Сумма или максимум по всей матрице")
    row_totals: list[ValueOut | None] = Field(..., description="Итоги по строкам")
    col_totals: list[ValueOut | None] = Field(..., description="Итоги по столбцам")

    model_config = ConfigDict(from_attributes=True)


class RelationOut(BaseModel):
    kind: str = Field(..., description="Исчисление")
    given: list[str] = Field(..., description="Метки условия (столбцы)")
    out: list[str] = Field(..., description="Метки результата (строки)")
    matrix: list[list[ValueOut | None]] = Field(
        ..., description="Матрица; неопределённый столбец записан как null"
    )
    normalized: bool = Field(..., description="Флаг нормировки столбцов")

    @classmethod
    def from_domain(cls, relation: ConditionalRelation) -> "RelationOut":
        return cls(
            kind=relation.kind.value,
            given=list(relation.given_space.labels),
            out=list(relation.out_space.labels),
            matrix=[[_rational(v) for v in row] for row in relation.values],
            normalized=relation.normalized,
        )


class InferResponse(BaseModel):
    """
    Ответ команды infer.
    """

    report: MatrixReportOut = Field(..., description="Проверка совместного распределения")
    row_marginal: DistributionOut | None = Field(None, description="Маргинал по строкам")
    col_marginal: DistributionOut | None = Field(None, description="Маргинал по столбцам")
    out_given_row: RelationOut | None = Field(None, description="Отношение при условии строки")
    out_given_col: RelationOut | None = Field(None, description="Отношение при условии столбца")


class VerdictOut(BaseModel):
    claim_id: str = Field(..., description="Проверяемое утверждение")
    passed: bool = Field(..., description="Утверждение подтверждено")
    witness: str | None = Field(None, description="Свидетель расхождения")

    model_config = ConfigDict(from_attributes=True)


class ComposeResponse(BaseModel):
    relation: RelationOut = Field(..., description="Композиция отношений")
    columns: MatrixReportOut = Field(..., description="Проверка столбцов композиции")
    oracle: VerdictOut | None = Field(None, description="Вердикт оракула, если он запускался")


class UpdateResponse(BaseModel):
    observed: list[str] = Field(..., description="Наблюдения в порядке применения")
    prior_sub_normalized: bool = Field(..., description="Априорная возможность ненормирована")
    posterior: DistributionOut = Field(..., description="Апостериорное распределение")


class FrequencyRowOut(BaseModel):
    label: str = Field(..., description="Метка исхода")
    count: int = Field(..., description="Число выпадений")
    estimate: ValueOut = Field(..., description="Частотная оценка")
    expected: ValueOut = Field(..., description="Истинная вероятность")
    deviation: float = Field(..., description="Оценка минус истинное значение")


class SimulateResponse(BaseModel):
    """
    Ответ команды simulate.
    """

    n: int = Field(..., description="Размер выборки")
    seed: int = Field(..., description="Зерно генератора")
    rows: list[FrequencyRowOut] = Field(..., description="Частоты по исходам")
    max_deviation: float = Field(..., description="Наибольшее отклонение по модулю")
    total_variation: float = Field(..., description="Расстояние полной вариации")


class SweepOut(BaseModel):
    claim_id: str = Field(..., description="Проверяемое утверждение")
    trials: int = Field(..., description="Число испытаний")
    failures: int = Field(..., description="Число расхождений")
    passed: bool = Field(..., description="Расхождений нет")
    witness: str | None = Field(None, description="Первое расхождение")
    tally: dict[str, int] = Field(default_factory=dict, description="Счётчики по классам")

    model_config = ConfigDict(from_attributes=True)


# --------------- Конфигурация запуска -------------------------


class RunConfig(BaseModel):
    """
    Параметры одного запуска командной строки.
    """

    command: Literal[
        "check",
        "classify",
        "measure",
        "compare-union",
        "infer",
        "compose",
        "update",
        "simulate",
        "fixtures",
        "verify",
    ]
    inputs: list[FilePath] = Field(default_factory=list, description="Входные файлы")
    seed: int = Field(DEFAULT_SEED, description="Зерно генератора (64 бита)")
    grid: str = Field(
        DEFAULT_GRID, pattern=r"^[1-9]\d*x[1-9]\d*$", description="Сетка COLSxROWS, стороны больше 0"
    )
    tolerance: float = Field(DEFAULT_TOLERANCE, gt=0, description="Допуск для вещественных")
    output_format: Literal["text", "json"] = Field("text", description="Формат отчёта")
    out: Path | None = Field(None, description="Файл для отчёта вместо stdout")
    name: str | None = Field(None, description="Имя фикстуры")
    die: str | None = Field(None, pattern=r"^fair\d+$", description="Кость вида fairN")
    n: int = Field(1000, ge=1, description="Размер выборки")
    events: list[str] = Field(default_factory=list, description="События: метки через запятую")
    observed: list[str] = Field(default_factory=list, description="Наблюдаемые метки")
    count: int = Field(1000, ge=1, description="Число фикстур в проверочных прогонах")

    @property
    def grid_size(self) -> tuple[int, int]:
        cols, rows = self.grid.split("x")
        return int(cols), int(rows)
