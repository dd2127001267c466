from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np
from loguru import logger

from app.config import DEFAULT_TOLERANCE, MAX_AXIOM_CHECK_SIZE
from app.exceptions import (
    AllZeroPossibility,
    ForeignLabel,
    InvalidInput,
    KindMismatch,
    SpaceTooLarge,
    ZeroTotal,
)
from app.models.spaces import Event, OutcomeLabel, SampleSpace, SpaceKind
from app.models.values import (
    ONE,
    ZERO,
    Value,
    at_most,
    close,
    maximum,
    total,
    zero_like,
)

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def _check_labels(space: SampleSpace, values: Mapping[OutcomeLabel, Value]) -> None:
    foreign = sorted(set(values) - set(space.labels))
    if foreign:
        raise ForeignLabel(f"Values given for labels outside the space: {foreign}")
    missing = [label for label in space.labels if label not in values]
    if missing:
        raise InvalidInput(f"No value given for labels {missing}")


@dataclass(frozen=True)
class ProbabilityDistribution:
    """
    Распределение вероятностей на случайном пространстве Ω.
    Конструктор проверяет только структуру; аксиомы проверяет check_prob_axioms.
    """

    space: SampleSpace
    values: Mapping[OutcomeLabel, Value]

    def __post_init__(self):
        if self.space.kind is not SpaceKind.RANDOM:
            raise KindMismatch("Probability needs a random sample space")
        _check_labels(self.space, self.values)
        object.__setattr__(
            self, "values", {label: self.values[label] for label in self.space.labels}
        )

    def __hash__(self):
        return hash((self.space, tuple(self.values.items())))

    def __getitem__(self, label: OutcomeLabel) -> Value:
        if label not in self.values:
            raise ForeignLabel(f"Label {label!r} is not in the sample space")
        return self.values[label]

    def vector(self) -> list[Value]:
        return [self.values[label] for label in self.space.labels]


@dataclass(frozen=True)
class PossibilityDistribution:
    """
    Распределение возможностей на нечётком пространстве Ψ.
    Флаг normalized задаётся явно и никогда не выводится молча.
    """

    space: SampleSpace
    values: Mapping[OutcomeLabel, Value]
    normalized: bool = True

    def __post_init__(self):
        if self.space.kind is not SpaceKind.FUZZY:
            raise KindMismatch("Possibility needs a fuzzy sample space")
        _check_labels(self.space, self.values)
        object.__setattr__(
            self, "values", {label: self.values[label] for label in self.space.labels}
        )

    def __hash__(self):
        return hash((self.space, tuple(self.values.items()), self.normalized))

    def __getitem__(self, label: OutcomeLabel) -> Value:
        if label not in self.values:
            raise ForeignLabel(f"Label {label!r} is not in the sample space")
        return self.values[label]

    def vector(self) -> list[Value]:
        return [self.values[label] for label in self.space.labels]

    def argmax(self) -> OutcomeLabel:
        # при равенстве побеждает первая метка в объявленном порядке
        best = self.space.labels[0]
        for label in self.space.labels:
            if self.values[label] > self.values[best]:
                best = label
        return best


Distribution = ProbabilityDistribution | PossibilityDistribution


@dataclass(frozen=True)
class FrequencyCounts:
    space: SampleSpace
    counts: Mapping[OutcomeLabel, int]
    total: int = field(default=-1)

    def __post_init__(self):
        _check_labels(self.space, self.counts)
        if any(not isinstance(n, int) or n < 0 for n in self.counts.values()):
            raise InvalidInput("Counts must be non-negative integers")
        object.__setattr__(
            self, "counts", {label: self.counts[label] for label in self.space.labels}
        )
        observed = sum(self.counts.values())
        if self.total == -1:
            object.__setattr__(self, "total", observed)
        elif self.total != observed:
            raise InvalidInput(
                f"Counts sum to {observed} but total is declared as {self.total}"
            )

    def __hash__(self):
        return hash((self.space, tuple(self.counts.items())))


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool
    witness: str | None = None
    skipped: bool = False


@dataclass(frozen=True)
class AxiomReport:
    kind: str
    checks: tuple[AxiomCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def __getitem__(self, name: str) -> AxiomCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)


def from_frequencies(counts: FrequencyCounts) -> ProbabilityDistribution:
    """
    Частотная вероятность p(x_i) = n_i / n_t в виде точных дробей.
    """
    if counts.total < 1:
        raise ZeroTotal("Cannot estimate probabilities from zero observations")
    space = counts.space.with_kind(SpaceKind.RANDOM)
    return ProbabilityDistribution(
        space,
        {label: Fraction(n, counts.total) for label, n in counts.counts.items()},
    )


def prob_event(dist: ProbabilityDistribution, event: Event) -> Value:
    dist.space.check(event)
    members = dist.space.ordered(event)
    if not members:
        return zero_like(dist.values.values())
    return total(dist.values[label] for label in members)


def poss_event(dist: PossibilityDistribution, event: Event) -> Value:
    dist.space.check(event)
    members = dist.space.ordered(event)
    if not members:
        return zero_like(dist.values.values())
    return maximum(dist.values[label] for label in members)


def event_measure(dist: Distribution, event: Event) -> Value:
    if isinstance(dist, ProbabilityDistribution):
        return prob_event(dist, event)
    return poss_event(dist, event)


def event_table(dist: Distribution) -> dict[int, Value]:
    """
    Мера каждого события степенного множества, индексированная битовой маской.
    """
    if dist.space.size > MAX_AXIOM_CHECK_SIZE:
        raise SpaceTooLarge(
            f"Event table needs N <= {MAX_AXIOM_CHECK_SIZE}, got {dist.space.size}"
        )
    return {
        mask: event_measure(dist, dist.space.from_mask(mask))
        for mask in range(1 << dist.space.size)
    }


def _describe(space: SampleSpace, mask: int) -> str:
    return "{" + ",".join(space.ordered(space.from_mask(mask))) + "}"


def check_prob_axioms(
    dist: ProbabilityDistribution, tolerance: float = DEFAULT_TOLERANCE
) -> AxiomReport:
    """
    Проверяет три аксиомы вероятности. Аддитивность проверяется полным
    перебором пар непересекающихся событий при N <= 10.
    """
    negative = [label for label, value in dist.values.items() if value < 0]
    nonnegativity = AxiomCheck(
        "nonnegativity",
        not negative,
        f"p({negative[0]}) = {dist.values[negative[0]]}" if negative else None,
    )

    whole = prob_event(dist, dist.space.full())
    normality = AxiomCheck(
        "normality",
        close(whole, ONE, tolerance),
        None if close(whole, ONE, tolerance) else f"sum of values is {whole}",
    )

    if dist.space.size > MAX_AXIOM_CHECK_SIZE:
        additivity = AxiomCheck("additivity", True, None, skipped=True)
    else:
        table = event_table(dist)
        witness = None
        for a, b in combinations(table, 2):
            if a & b:
                continue
            if not close(table[a | b], total([table[a], table[b]]), tolerance):
                witness = (
                    f"p({_describe(dist.space, a | b)}) != "
                    f"p({_describe(dist.space, a)}) + p({_describe(dist.space, b)})"
                )
                break
        additivity = AxiomCheck("additivity", witness is None, witness)

    return AxiomReport("probability", (nonnegativity, normality, additivity))


def check_poss_axioms(
    dist: PossibilityDistribution, tolerance: float = DEFAULT_TOLERANCE
) -> AxiomReport:
    """
    Проверяет аксиомы возможности. Сумма Σπ(x_i) != 1 ошибкой не считается.
    """
    outside = [
        label for label, value in dist.values.items() if value < 0 or value > 1
    ]
    empty_value = poss_event(dist, Event())
    empty_set = AxiomCheck(
        "empty_set",
        empty_value == 0 and not outside,
        f"π({outside[0]}) = {dist.values[outside[0]]} is outside [0, 1]"
        if outside
        else None,
    )

    top = maximum(dist.values.values())
    if dist.normalized:
        ok = close(top, ONE, tolerance)
        witness = None if ok else f"flagged normalized but max is {top}"
    else:
        ok = at_most(top, ONE, tolerance) and not close(top, ONE, tolerance)
        witness = None if ok else f"flagged sub-normalized but max is {top}"
    normality = AxiomCheck("normality", ok, witness)

    if dist.space.size > MAX_AXIOM_CHECK_SIZE:
        maxitivity = AxiomCheck("maxitivity", True, None, skipped=True)
    else:
        table = event_table(dist)
        witness = None
        for a, b in combinations(table, 2):
            if not close(table[a | b], max(table[a], table[b]), tolerance):
                witness = (
                    f"π({_describe(dist.space, a | b)}) != max("
                    f"π({_describe(dist.space, a)}), π({_describe(dist.space, b)}))"
                )
                break
        maxitivity = AxiomCheck("maxitivity", witness is None, witness)

    return AxiomReport("possibility", (empty_set, normality, maxitivity))


def innocent_prior(space: SampleSpace) -> PossibilityDistribution:
    """
    Представление невиновности: все значения равны единице.
    """
    if space.kind is not SpaceKind.FUZZY:
        raise KindMismatch("Innocent prior is defined on fuzzy sample spaces only")
    return PossibilityDistribution(space, {label: ONE for label in space.labels}, True)


def is_innocent(dist: PossibilityDistribution) -> bool:
    return all(value == 1 for value in dist.values.values())


def normalize(dist: PossibilityDistribution) -> PossibilityDistribution:
    top = maximum(dist.values.values())
    if top == 0:
        raise AllZeroPossibility("Cannot normalize a possibility distribution with max 0")
    return PossibilityDistribution(
        dist.space,
        {label: value / top for label, value in dist.values.items()},
        normalized=True,
    )


def fair_die(faces: int = 6) -> ProbabilityDistribution:
    if faces < 1:
        raise InvalidInput("A die needs at least one face")
    space = SampleSpace(SpaceKind.RANDOM, tuple(str(face) for face in range(1, faces + 1)))
    return ProbabilityDistribution(
        space, {label: Fraction(1, faces) for label in space.labels}
    )


def splitmix64(seed: int, n: int) -> np.ndarray:
    """
    Первые n выходов генератора splitmix64; состояние растёт на golden gamma.
    """
    steps = np.arange(1, n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + steps * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return z


def sample(dist: ProbabilityDistribution, n: int, seed: int) -> FrequencyCounts:
    """
    Детерминированная выборка: splitmix64 + обратная функция распределения
    в объявленном порядке меток.
    """
    if n < 1:
        raise InvalidInput("Sample size must be at least 1")
    weights = np.array([float(value) for value in dist.vector()], dtype=np.float64)
    if (weights < 0).any() or weights.sum() <= 0:
        raise InvalidInput("Cannot sample from a distribution without positive mass")
    cdf = np.cumsum(weights) / weights.sum()
    last = int(np.flatnonzero(weights > 0)[-1])
    cdf[last:] = 1.0

    uniforms = (splitmix64(seed, n) >> np.uint64(11)).astype(np.float64) * 2.0**-53
    indices = np.searchsorted(cdf, uniforms, side="right")
    counts = np.bincount(indices, minlength=dist.space.size)
    logger.debug(f"Sampled {n} outcomes with seed {seed}")
    return FrequencyCounts(
        dist.space,
        {label: int(counts[i]) for i, label in enumerate(dist.space.labels)},
        n,
    )


def total_variation(p: ProbabilityDistribution, q: ProbabilityDistribution) -> float:
    if p.space.labels != q.space.labels:
        raise InvalidInput("Total variation needs distributions over the same labels")
    return 0.5 * sum(abs(float(p[label]) - float(q[label])) for label in p.space.labels)
