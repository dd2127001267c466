from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import reduce

from app.config import DEFAULT_TOLERANCE
from app.exceptions import EmptyReference, InternalDisagreement, InvalidInput, NotExhaustive
from app.models.intensions import (
    IntensionSet,
    LabeledConcept,
    compatibility_distribution,
    intersection,
    is_exhaustive,
    measure,
    subsethood,
    union,
)
from app.models.measures import (
    PossibilityDistribution,
    ProbabilityDistribution,
    prob_event,
)
from app.models.spaces import Event, OutcomeLabel
from app.models.values import ONE, Value, at_most, close, total, zero_like


class PairClass(str, Enum):
    MUTUALLY_EXCLUSIVE = "mutually-exclusive"
    PROJECTION_EXCLUSIVE = "projection-exclusive"
    PROJECTION_NESTED = "projection-nested"
    GENERAL = "general"


@dataclass(frozen=True)
class PairClassReport:
    pair_class: PairClass
    pi_i: Fraction
    pi_j: Fraction
    pi_intersection: Fraction
    pi_union_exact: Fraction
    pi_union_max: Fraction
    pi_union_sum: Fraction
    pi_union_sigma: Fraction
    max_error: Fraction
    label_i: OutcomeLabel = "x_i"
    label_j: OutcomeLabel = "x_j"


@dataclass(frozen=True)
class ProbUnionReport:
    p_a: Value
    p_b: Value
    p_intersection: Value
    p_union: Value
    bounds_ok: bool
    additive_case: bool
    nested_case: bool
    pair_class: PairClass | None = None

    @property
    def trivial(self) -> bool:
        # вложенный случай для вероятности не имеет практической ценности
        return self.nested_case


@dataclass(frozen=True)
class MaxitivityReport:
    pairs: tuple[PairClassReport, ...]

    @property
    def passed(self) -> bool:
        return all(
            report.max_error == 0
            for report in self.pairs
            if report.pair_class is PairClass.PROJECTION_NESTED
        )


@dataclass(frozen=True)
class UnstrictMaxReport:
    pairs: tuple[PairClassReport, ...]
    violations: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class FeatureExtractionReport:
    pi_space: Fraction
    max_value: Fraction
    argmax: OutcomeLabel

    @property
    def passed(self) -> bool:
        return self.pi_space == 1 == self.max_value


@dataclass(frozen=True)
class SigmaTrivialityReport:
    sigma: Value
    positive: int
    normalized: bool
    exceeds_one: bool

    @property
    def applies(self) -> bool:
        return self.normalized and self.positive >= 2

    @property
    def passed(self) -> bool:
        return not self.applies or self.exceeds_one


def classify_pair(fX: IntensionSet, fi: IntensionSet, fj: IntensionSet) -> PairClass:
    """
    Классифицирует пару концепций по их проекциям на интенсионал fX.
    Если одна проекция пуста, пара считается вложенной: max тогда точен.
    """
    if measure(fX) == 0:
        raise EmptyReference("Pair classification needs a non-empty subject intension")
    projection_i = intersection(fX, fi)
    projection_j = intersection(fX, fj)
    if projection_i.dominated_by(projection_j) or projection_j.dominated_by(projection_i):
        return PairClass.PROJECTION_NESTED
    if measure(intersection(projection_i, projection_j)) == 0:
        return PairClass.PROJECTION_EXCLUSIVE
    return PairClass.GENERAL


def exact_union_possibility(
    fX: IntensionSet,
    fi: IntensionSet,
    fj: IntensionSet,
    label_i: OutcomeLabel = "x_i",
    label_j: OutcomeLabel = "x_j",
) -> PairClassReport:
    """
    Точная возможность объединения двумя независимыми путями:
    напрямую через fi ∪ fj и через включения–исключения.
    """
    pair_class = classify_pair(fX, fi, fj)
    pi_i = subsethood(fX, fi)
    pi_j = subsethood(fX, fj)
    pi_intersection = subsethood(fX, intersection(fi, fj))

    direct = subsethood(fX, union(fi, fj))
    inclusion_exclusion = pi_i + pi_j - pi_intersection
    if direct != inclusion_exclusion:
        raise InternalDisagreement(
            f"Union possibility of {label_i}/{label_j}: direct {direct} "
            f"!= inclusion-exclusion {inclusion_exclusion}"
        )

    pi_max = max(pi_i, pi_j)
    return PairClassReport(
        pair_class=pair_class,
        pi_i=pi_i,
        pi_j=pi_j,
        pi_intersection=pi_intersection,
        pi_union_exact=direct,
        pi_union_max=pi_max,
        pi_union_sum=inclusion_exclusion,
        pi_union_sigma=pi_i + pi_j,
        max_error=direct - pi_max,
        label_i=label_i,
        label_j=label_j,
    )


def prob_union_report(
    dist: ProbabilityDistribution,
    a: Event,
    b: Event,
    tolerance: float = DEFAULT_TOLERANCE,
) -> ProbUnionReport:
    p_a = prob_event(dist, a)
    p_b = prob_event(dist, b)
    p_intersection = prob_event(dist, Event(a.members & b.members))
    p_union = total([p_a, p_b]) - p_intersection
    return ProbUnionReport(
        p_a=p_a,
        p_b=p_b,
        p_intersection=p_intersection,
        p_union=p_union,
        bounds_ok=at_most(max(p_a, p_b), p_union, tolerance)
        and at_most(p_union, total([p_a, p_b]), tolerance)
        and at_most(p_union, ONE, tolerance),
        additive_case=close(p_intersection, zero_like([p_a, p_b]), tolerance),
        nested_case=a.issubset(b) or b.issubset(a),
        pair_class=None if a.members & b.members else PairClass.MUTUALLY_EXCLUSIVE,
    )


def _pairs(
    fX: IntensionSet, concepts: Sequence[LabeledConcept]
) -> tuple[PairClassReport, ...]:
    if len(concepts) < 2:
        raise InvalidInput("At least two concepts are needed to form pairs")
    if measure(fX) == 0:
        raise EmptyReference("Pair reports need a non-empty subject intension")
    return tuple(
        exact_union_possibility(fX, fi, fj, label_i, label_j)
        for i, (label_i, fi) in enumerate(concepts)
        for label_j, fj in concepts[i + 1 :]
    )


def verify_exact_maxitivity(
    fX: IntensionSet, concepts: Sequence[LabeledConcept]
) -> MaxitivityReport:
    """
    Точная максимальность: для каждой проекционно-вложенной пары
    возможность объединения равна максимуму без погрешности.
    """
    return MaxitivityReport(_pairs(fX, concepts))


def verify_prop_5_1(
    fX: IntensionSet, concepts: Sequence[LabeledConcept]
) -> UnstrictMaxReport:
    """
    max является нижней границей объединения, а там, где π = 1, никакой оператор
    выше max невозможен: значение объединения не превышает единицу.
    """
    pairs = _pairs(fX, concepts)
    violations = []
    for report in pairs:
        name = f"{report.label_i}|{report.label_j}"
        if report.pi_union_exact < report.pi_union_max:
            violations.append(f"{name}: union below max")
        if report.pi_union_exact > 1:
            violations.append(f"{name}: union above one")
        if report.pi_union_max == 1 and report.pi_union_exact != 1:
            violations.append(f"{name}: union differs from max = 1")
    return UnstrictMaxReport(pairs, tuple(violations))


def verify_prop_5_2(
    fX: IntensionSet, concepts: Sequence[LabeledConcept]
) -> FeatureExtractionReport:
    """
    Извлечение признака: π(Ψ) = max π(x_i) = 1 для исчерпывающей постановки.
    """
    if len(concepts) < 1:
        raise InvalidInput("At least one concept is needed")
    if not is_exhaustive(fX, concepts):
        raise NotExhaustive(
            "No concept contains the subject intension, the setup is not exhaustive"
        )
    whole = reduce(union, (fC for _, fC in concepts))
    pi_space = subsethood(fX, whole)
    compatibility = compatibility_distribution(fX, concepts)
    best_label = compatibility.argmax()
    best_value = compatibility[best_label]
    report = FeatureExtractionReport(pi_space, best_value, best_label)
    if not report.passed:
        raise InternalDisagreement(
            f"π(Ψ) = {pi_space} and max π = {best_value} for an exhaustive setup"
        )
    return report


def sigma_triviality(dist: PossibilityDistribution) -> SigmaTrivialityReport:
    """
    Сумма Σπ(x_i): при нормировке и двух положительных значениях она больше единицы,
    то есть аддитивное правило на Ψ несовместно.
    """
    values = dist.vector()
    sigma = total(values)
    return SigmaTrivialityReport(
        sigma=sigma,
        positive=sum(1 for value in values if value > 0),
        normalized=dist.normalized,
        exceeds_one=sigma > 1,
    )
