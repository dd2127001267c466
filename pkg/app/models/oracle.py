"""
Независимые оракулы полного перебора.

Оракулы не используют функции проверяемых модулей для вычисления мер,
объединений и композиций: всё пересчитывается прямо по атомам и меткам.
Случайность участвует только в генерации фикстур.
"""

import math
import random
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from loguru import logger

from app.config import (
    DEFAULT_TOLERANCE,
    MAX_AXIOM_CHECK_SIZE,
    MAX_COMPOSITION_ORACLE_SIZE,
    ROUND_TRIP_TOLERANCE,
)
from app.exceptions import EngineError, KindMismatch, SpaceMismatch, SpaceTooLarge
from app.models.disjunction import (
    PairClass,
    exact_union_possibility,
    sigma_triviality,
)
from app.models.inference import (
    Axis,
    ConditionalRelation,
    Direction,
    JointDistribution,
    MeasureKind,
    bayes_update,
    compose,
    condition,
    joint_from_prior,
    marginal,
    poss_update,
)
from app.models.intensions import EllipseSpec, Grid, IntensionSet, rasterize_ellipse
from app.models.measures import (
    Distribution,
    PossibilityDistribution,
    ProbabilityDistribution,
    event_table,
    innocent_prior,
)
from app.models.spaces import SampleSpace, SpaceKind
from app.models.values import ONE, Value, at_most, close


@dataclass(frozen=True)
class OracleVerdict:
    claim_id: str
    passed: bool
    witness: str | None = None

    def __post_init__(self):
        if self.passed == (self.witness is not None):
            raise ValueError("Witness must be present exactly when the claim fails")


@dataclass
class SweepSummary:
    claim_id: str
    trials: int = 0
    failures: int = 0
    witness: str | None = None
    tally: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, verdict: OracleVerdict) -> None:
        self.trials += 1
        if not verdict.passed:
            self.failures += 1
            if self.witness is None:
                self.witness = f"{verdict.claim_id}: {verdict.witness}"

    def to_verdict(self) -> OracleVerdict:
        return OracleVerdict(self.claim_id, self.passed, self.witness)


def _fail(claim_id: str, witness: str) -> OracleVerdict:
    return OracleVerdict(claim_id, False, witness)


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _name(labels: tuple[str, ...], mask: int) -> str:
    return "{" + ",".join(labels[i] for i in _bits(mask)) + "}"


def _enumerate_measure(values: list[Value], mask: int, additive: bool) -> Value:
    picked = [values[i] for i in _bits(mask)]
    exact = all(isinstance(value, Fraction) for value in values)
    if not picked:
        return Fraction(0) if exact else 0.0
    if additive:
        acc = Fraction(0) if exact else 0.0
        for value in picked:
            acc += value
        return acc
    best = picked[0]
    for value in picked[1:]:
        if value > best:
            best = value
    return best


def oracle_event_measures(
    dist: Distribution,
    table: Mapping[int, Value] | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> OracleVerdict:
    """
    Пересчитывает меру каждого события перебором элементарных значений и
    сверяет её с таблицей модуля мер; затем проверяет аддитивность
    (для непересекающихся пар) или максимальность (для всех пар).
    """
    labels = dist.space.labels
    if len(labels) > MAX_AXIOM_CHECK_SIZE:
        raise SpaceTooLarge(f"Event oracle needs N <= {MAX_AXIOM_CHECK_SIZE}")
    additive = isinstance(dist, ProbabilityDistribution)
    claim_id = "additivity" if additive else "maxitivity"
    values = [dist.values[label] for label in labels]
    table = event_table(dist) if table is None else table

    events = range(1 << len(labels))
    for mask in events:
        expected = _enumerate_measure(values, mask, additive)
        if not close(table[mask], expected, tolerance):
            return _fail(
                claim_id,
                f"measure of {_name(labels, mask)} is {table[mask]}, enumeration gives {expected}",
            )

    for a in events:
        for b in events:
            if b <= a:
                continue
            if additive:
                if a & b:
                    continue
                expected = table[a] + table[b]
            else:
                expected = max(table[a], table[b])
            if not close(table[a | b], expected, tolerance):
                return _fail(
                    claim_id,
                    f"pair {_name(labels, a)}, {_name(labels, b)}: "
                    f"union {table[a | b]} != {expected}",
                )
    return OracleVerdict(claim_id, True)


def oracle_inclusion_exclusion(
    dist: ProbabilityDistribution, tolerance: float = DEFAULT_TOLERANCE
) -> OracleVerdict:
    """
    p(A∪B) + p(A∩B) = p(A) + p(B) и max{p(A), p(B)} <= p(A∪B) <= min(1, p(A) + p(B))
    для всех пар событий.
    """
    labels = dist.space.labels
    if len(labels) > MAX_AXIOM_CHECK_SIZE:
        raise SpaceTooLarge(f"Event oracle needs N <= {MAX_AXIOM_CHECK_SIZE}")
    values = [dist.values[label] for label in labels]
    measures = [
        _enumerate_measure(values, mask, True) for mask in range(1 << len(labels))
    ]
    for a, p_a in enumerate(measures):
        for b in range(a + 1, len(measures)):
            p_b = measures[b]
            p_union, p_both = measures[a | b], measures[a & b]
            if not close(p_union + p_both, p_a + p_b, tolerance):
                return _fail(
                    "inclusion-exclusion",
                    f"pair {_name(labels, a)}, {_name(labels, b)} breaks the identity",
                )
            if not (
                at_most(max(p_a, p_b), p_union, tolerance)
                and at_most(p_union, p_a + p_b, tolerance)
                and at_most(p_union, ONE, tolerance)
            ):
                return _fail(
                    "inclusion-exclusion",
                    f"pair {_name(labels, a)}, {_name(labels, b)} leaves the bounds",
                )
    return OracleVerdict("inclusion-exclusion", True)


def oracle_union_possibility(
    fX: IntensionSet, fi: IntensionSet, fj: IntensionSet
) -> OracleVerdict:
    """
    |fX ∩ (fi ∪ fj)| прямым перебором атомов, без включений–исключений,
    и сверка с exact_union_possibility вместе с границами и частными равенствами.
    """
    claim_id = "union-possibility"
    if not fX.universe == fi.universe == fj.universe:
        return _fail(claim_id, "intensions belong to different universes")
    size = sum(fX.weights.values())
    if size == 0:
        return _fail(claim_id, "subject intension is empty")

    covered = own_i = own_j = 0
    for atom, w in fX.weights.items():
        w_i = fi.weights.get(atom, 0)
        w_j = fj.weights.get(atom, 0)
        covered += min(w, max(w_i, w_j))
        own_i += min(w, w_i)
        own_j += min(w, w_j)
    exact = Fraction(covered, size)
    pi_i, pi_j = Fraction(own_i, size), Fraction(own_j, size)

    try:
        report = exact_union_possibility(fX, fi, fj)
    except EngineError as ex:
        return _fail(claim_id, ex.detail)

    if report.pi_union_exact != exact:
        return _fail(claim_id, f"union {report.pi_union_exact} != enumerated {exact}")
    if (report.pi_i, report.pi_j) != (pi_i, pi_j):
        return _fail(claim_id, "elementary possibilities differ from enumeration")
    if not max(pi_i, pi_j) <= exact <= pi_i + pi_j:
        return _fail(claim_id, f"union {exact} leaves [max, sum] = [{max(pi_i, pi_j)}, {pi_i + pi_j}]")
    if report.pair_class is PairClass.PROJECTION_NESTED and exact != max(pi_i, pi_j):
        return _fail(claim_id, f"nested pair with union {exact} != max {max(pi_i, pi_j)}")
    if report.pair_class is PairClass.PROJECTION_EXCLUSIVE and exact != pi_i + pi_j:
        return _fail(claim_id, f"exclusive pair with union {exact} != sum {pi_i + pi_j}")
    return OracleVerdict(claim_id, True)


def oracle_composition(
    first: ConditionalRelation,
    second: ConditionalRelation,
    tolerance: float = ROUND_TRIP_TOLERANCE,
) -> OracleVerdict:
    """
    Каждый элемент композиции пересчитывается перебором промежуточной переменной.
    """
    claim_id = "composition"
    if first.kind is not second.kind:
        raise KindMismatch("Cannot compose relations of different calculi")
    if first.out_space.labels != second.given_space.labels:
        raise SpaceMismatch("Relations are not composable")
    sizes = (first.given_space.size, first.out_space.size, second.out_space.size)
    if max(sizes) > MAX_COMPOSITION_ORACLE_SIZE:
        raise SpaceTooLarge(
            f"Composition oracle needs spaces of at most {MAX_COMPOSITION_ORACLE_SIZE} labels"
        )
    additive = first.kind is MeasureKind.PROBABILITY
    result = compose(first, second)

    for y in range(sizes[0]):
        for x in range(sizes[2]):
            expected: Value | None = None
            undefined = first.values[0][y] is None
            for z in range(sizes[1]):
                if undefined:
                    break
                w = first.values[z][y]
                v = second.values[x][z]
                if v is None:
                    if w != 0:
                        undefined = True
                    continue
                term = v * w
                if expected is None:
                    expected = term
                elif additive:
                    expected = expected + term
                elif term > expected:
                    expected = term
            actual = result.values[x][y]
            if undefined:
                if actual is not None:
                    return _fail(claim_id, f"entry ({x}|{y}) should be undefined")
                continue
            if actual is None or not close(actual, expected or 0, tolerance):
                return _fail(
                    claim_id, f"entry ({x}|{y}) is {actual}, enumeration gives {expected}"
                )
    return OracleVerdict(claim_id, True)


def _labels(prefix: str, size: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(1, size + 1))


def random_probability(rng: random.Random, size: int, prefix: str = "x") -> ProbabilityDistribution:
    weights = [rng.randint(0, 9) for _ in range(size)]
    if not any(weights):
        weights[rng.randrange(size)] = 1
    grand = sum(weights)
    space = SampleSpace(SpaceKind.RANDOM, _labels(prefix, size))
    return ProbabilityDistribution(
        space, {label: Fraction(w, grand) for label, w in zip(space.labels, weights)}
    )


def random_possibility(rng: random.Random, size: int, prefix: str = "x") -> PossibilityDistribution:
    grades = [Fraction(rng.randint(0, 10), 10) for _ in range(size)]
    grades[rng.randrange(size)] = Fraction(1)
    space = SampleSpace(SpaceKind.FUZZY, _labels(prefix, size))
    return PossibilityDistribution(space, dict(zip(space.labels, grades)), normalized=True)


def random_column(rng: random.Random, kind: MeasureKind, size: int) -> list[Fraction]:
    if kind is MeasureKind.PROBABILITY:
        weights = [rng.randint(0, 9) for _ in range(size)]
        if not any(weights):
            weights[rng.randrange(size)] = 1
        grand = sum(weights)
        return [Fraction(w, grand) for w in weights]
    grades = [Fraction(rng.randint(0, 10), 10) for _ in range(size)]
    grades[rng.randrange(size)] = Fraction(1)
    return grades


def random_relation(
    rng: random.Random, kind: MeasureKind, given: SampleSpace, out: SampleSpace
) -> ConditionalRelation:
    columns = [random_column(rng, kind, out.size) for _ in given.labels]
    values = [[column[i] for column in columns] for i in range(out.size)]
    return ConditionalRelation(kind, given, out, values)


def random_joint(
    rng: random.Random, kind: MeasureKind, rows: int, cols: int
) -> JointDistribution:
    space_kind = kind.space_kind
    flat = random_column(rng, kind, rows * cols)
    return JointDistribution(
        kind,
        SampleSpace(space_kind, _labels("x", rows)),
        SampleSpace(space_kind, _labels("y", cols)),
        [flat[r * cols : (r + 1) * cols] for r in range(rows)],
    )


def random_ellipse(
    rng: random.Random, around: tuple[float, float], spread: float, label: str
) -> EllipseSpec:
    return EllipseSpec(
        center=(
            around[0] + rng.uniform(-spread, spread),
            around[1] + rng.uniform(-spread, spread),
        ),
        semi_axes=(rng.uniform(2.0, 16.0), rng.uniform(2.0, 16.0)),
        rotation=rng.uniform(0.0, math.pi),
        label=label,
    )


def random_ellipse_triple(
    rng: random.Random, grid: Grid
) -> tuple[IntensionSet, IntensionSet, IntensionSet]:
    """
    Тройка (fX, fi, fj) растеризованных эллипсов; fX всегда непуст.
    Концепции размещаются рядом с fX, чтобы встречались все классы пар.
    """
    width = grid.cols * grid.cell_size
    height = grid.rows * grid.cell_size
    middle = (grid.origin[0] + width / 2, grid.origin[1] + height / 2)
    while True:
        subject = random_ellipse(rng, middle, min(width, height) / 4, "X")
        fX = rasterize_ellipse(subject, grid)
        if fX.weights:
            break
    fi = rasterize_ellipse(random_ellipse(rng, subject.center, 14.0, "x_i"), grid)
    fj = rasterize_ellipse(random_ellipse(rng, subject.center, 14.0, "x_j"), grid)
    return fX, fi, fj


def sweep_event_measures(count: int, seed: int, max_size: int = 6) -> SweepSummary:
    rng = random.Random(seed)
    summary = SweepSummary("event-measures")
    for _ in range(count):
        probability = random_probability(rng, rng.randint(1, max_size))
        summary.record(oracle_event_measures(probability))
        summary.record(oracle_inclusion_exclusion(probability))
        summary.record(oracle_event_measures(random_possibility(rng, rng.randint(1, max_size))))
    logger.debug(f"Event measure sweep: {summary.trials} verdicts, {summary.failures} failures")
    return summary


def sweep_union_possibility(count: int, seed: int, grid: Grid | None = None) -> SweepSummary:
    grid = grid or Grid(64, 64)
    rng = random.Random(seed)
    summary = SweepSummary("union-possibility")
    for _ in range(count):
        fX, fi, fj = random_ellipse_triple(rng, grid)
        verdict = oracle_union_possibility(fX, fi, fj)
        summary.record(verdict)
        if verdict.passed:
            pair_class = exact_union_possibility(fX, fi, fj).pair_class.value
            summary.tally[pair_class] = summary.tally.get(pair_class, 0) + 1
    logger.debug(f"Union sweep tally: {summary.tally}")
    return summary


def sweep_composition(count: int, seed: int, max_size: int = 4) -> SweepSummary:
    rng = random.Random(seed)
    summary = SweepSummary("composition")
    for trial in range(count):
        kind = MeasureKind.PROBABILITY if trial % 2 == 0 else MeasureKind.POSSIBILITY
        spaces = [
            SampleSpace(kind.space_kind, _labels(prefix, rng.randint(1, max_size)))
            for prefix in ("w", "x", "y", "z")
        ]
        a = random_relation(rng, kind, spaces[0], spaces[1])
        b = random_relation(rng, kind, spaces[1], spaces[2])
        c = random_relation(rng, kind, spaces[2], spaces[3])
        summary.record(oracle_composition(a, b))
        left = compose(compose(a, b), c)
        right = compose(a, compose(b, c))
        if left.values == right.values:
            summary.record(OracleVerdict("associativity", True))
        else:
            summary.record(_fail("associativity", f"{kind.value} chain of trial {trial}"))
    return summary


def _round_trip(joint: JointDistribution, tolerance: float) -> OracleVerdict:
    prior = marginal(joint, Axis.ROW)
    rebuilt = joint_from_prior(prior, condition(joint, Direction.OUT_GIVEN_ROW))
    for row, again in zip(joint.values, rebuilt.values):
        for value, other in zip(row, again):
            if not close(value, other, tolerance):
                return _fail("round-trip", f"{joint.kind.value} entry {value} rebuilt as {other}")
    return OracleVerdict("round-trip", True)


def sweep_inference(count: int, seed: int, max_size: int = 4) -> SweepSummary:
    """
    Круговой путь условие → перекомбинация, а также нормировка результатов обновления.
    """
    rng = random.Random(seed)
    summary = SweepSummary("inference")
    for trial in range(count):
        kind = MeasureKind.PROBABILITY if trial % 2 == 0 else MeasureKind.POSSIBILITY
        joint = random_joint(rng, kind, rng.randint(1, max_size), rng.randint(1, max_size))
        summary.record(_round_trip(joint, ROUND_TRIP_TOLERANCE))

        size = rng.randint(1, max_size)
        observed_space = SampleSpace(kind.space_kind, _labels("y", rng.randint(1, max_size)))
        if kind is MeasureKind.PROBABILITY:
            prior = random_probability(rng, size)
        else:
            prior = random_possibility(rng, size)
        likelihood = random_relation(rng, kind, prior.space, observed_space)
        observed = rng.choice(observed_space.labels)
        try:
            if kind is MeasureKind.PROBABILITY:
                posterior = bayes_update(prior, likelihood, observed)
                ok = sum(posterior.values.values()) == 1
            else:
                posterior = poss_update(prior, likelihood, observed)
                ok = max(posterior.values.values()) == 1
        except EngineError:
            # невозможное наблюдение допустимо и нарушением не считается
            continue
        summary.record(
            OracleVerdict("update", True)
            if ok
            else _fail("update", f"{kind.value} posterior is not normalized")
        )

        if kind is MeasureKind.POSSIBILITY:
            innocent = poss_update(innocent_prior(prior.space), likelihood, observed)
            ones = ConditionalRelation(
                kind, prior.space, observed_space,
                [[Fraction(1)] * prior.space.size for _ in observed_space.labels],
            )
            again = poss_update(innocent, ones, observed)
            summary.record(
                OracleVerdict("innocent-idempotence", True)
                if again.values == innocent.values
                else _fail("innocent-idempotence", "uninformative update changed the posterior")
            )
    return summary


def sweep_sigma_triviality(count: int, seed: int, max_size: int = 6) -> SweepSummary:
    rng = random.Random(seed)
    summary = SweepSummary("sigma-triviality")
    for _ in range(count):
        dist = random_possibility(rng, rng.randint(1, max_size))
        report = sigma_triviality(dist)
        summary.record(
            OracleVerdict("sigma-triviality", True)
            if report.passed
            else _fail("sigma-triviality", f"Σπ = {report.sigma} with {report.positive} positive values")
        )
    return summary
