from pathlib import Path

from loguru import logger

from app.documents import load_document, peek_keys, read_document
from app.exceptions import InvalidInput
from app.models.disjunction import sigma_triviality
from app.models.intensions import (
    check_space_kind,
    compatibility_distribution,
    is_exhaustive,
    is_fuzzy_setup,
    measure,
    similarity,
    subsethood,
)
from app.models.measures import (
    Distribution,
    PossibilityDistribution,
    ProbabilityDistribution,
    check_poss_axioms,
    check_prob_axioms,
    event_measure,
    fair_die,
    from_frequencies,
    sample,
    total_variation,
)
from app.models.spaces import SpaceKind
from app.routers import (
    EVENT_OPTION,
    CommandResult,
    CommandRouter,
    fmt,
    option,
    require_inputs,
)
from app.schemas import (
    AxiomReportOut,
    CheckResponse,
    ConceptMeasureOut,
    CountsSchema,
    DistributionOut,
    DistributionSchema,
    EventMeasureResponse,
    FixtureSchema,
    FrequencyRowOut,
    IntensionMeasuresResponse,
    RunConfig,
    SigmaTrivialityOut,
    SimulateResponse,
)

router = CommandRouter(tags=["measures"])


def load_distribution(path: Path) -> Distribution:
    """
    Документ распределения или частот; частоты сразу переводятся в оценки.
    """
    if "counts" in peek_keys(path):
        return from_frequencies(load_document(path, CountsSchema))
    return load_document(path, DistributionSchema)


def _parse_event(dist: Distribution, raw: str):
    labels = [label.strip() for label in raw.split(",") if label.strip()]
    return dist.space.event(labels)


@router.command("check", help="Проверить аксиомы распределения")
def check(config: RunConfig) -> CommandResult:
    require_inputs(config, 1)
    dist = load_distribution(config.inputs[0])
    if isinstance(dist, ProbabilityDistribution):
        report = check_prob_axioms(dist, config.tolerance)
        triviality = None
    else:
        report = check_poss_axioms(dist, config.tolerance)
        triviality = sigma_triviality(dist)

    lines = [f"{report.kind} axioms: {'PASS' if report.passed else 'FAIL'}"]
    for item in report.checks:
        status = "skipped" if item.skipped else ("ok" if item.passed else "violated")
        lines.append(f"  {item.name:<14} {status}" + (f"  ({item.witness})" if item.witness else ""))
    if triviality is not None:
        lines.append(
            f"  Σπ = {fmt(triviality.sigma)} over {triviality.positive} positive value(s)"
            + ("; additive rule would be inconsistent" if triviality.applies else "")
        )

    payload = CheckResponse(
        axioms=AxiomReportOut.model_validate(report),
        sigma_triviality=None
        if triviality is None
        else SigmaTrivialityOut.model_validate(triviality),
    )
    logger.info(f"Axiom check of {config.inputs[0]}: passed={report.passed}")
    return CommandResult(payload, "\n".join(lines), report.passed)


def _intension_measures(document: FixtureSchema) -> CommandResult:
    fX = document.subject_intension()
    concepts = document.labeled_concepts()
    compatibility = compatibility_distribution(fX, concepts)
    setup = is_fuzzy_setup(fX, concepts)
    consistent = None
    if document.space_kind is not None:
        consistent = check_space_kind(SpaceKind(document.space_kind), fX, concepts).consistent

    rows = [
        ConceptMeasureOut(
            label=label,
            measure=measure(fC),
            subsethood=subsethood(fX, fC),
            similarity=similarity(fX, fC),
        )
        for label, fC in concepts
    ]
    payload = IntensionMeasuresResponse(
        subject=document.subject.label,
        subject_measure=measure(fX),
        concepts=rows,
        compatibility=DistributionOut.from_domain(compatibility),
        exhaustive=is_exhaustive(fX, concepts),
        fuzzy_setup=setup.fuzzy,
        fuzzy_witness=setup.witness,
        space_kind_consistent=consistent,
    )

    lines = [f"subject {document.subject.label}: |f| = {measure(fX)}"]
    lines.append(f"  {'concept':<12} {'|f|':>6} {'subsethood':>12} {'similarity':>12}")
    for label, fC in concepts:
        lines.append(
            f"  {label:<12} {measure(fC):>6} {fmt(subsethood(fX, fC)):>12} "
            f"{fmt(similarity(fX, fC)):>12}"
        )
    lines.append(f"  exhaustive: {payload.exhaustive}")
    lines.append(
        f"  fuzzy setup: {setup.fuzzy}"
        + (f" ({setup.witness[0]} and {setup.witness[1]})" if setup.witness else "")
    )
    if consistent is not None:
        lines.append(f"  declared {document.space_kind} space consistent: {consistent}")
    return CommandResult(payload, "\n".join(lines), consistent is not False)


@router.command(
    "measure",
    help="Меры интенсионалов фикстуры или мера событий распределения",
    options=(EVENT_OPTION,),
)
def measure_command(config: RunConfig) -> CommandResult:
    require_inputs(config, 1)
    path = config.inputs[0]
    if "subject" in peek_keys(path):
        return _intension_measures(read_document(path, FixtureSchema))

    dist = load_distribution(path)
    if not config.events:
        raise InvalidInput("measure on a distribution needs at least one --event")
    kind = "probability" if isinstance(dist, ProbabilityDistribution) else "possibility"
    symbol = "p" if kind == "probability" else "π"
    payload, lines = [], []
    for raw in config.events:
        event = _parse_event(dist, raw)
        value = event_measure(dist, event)
        labels = dist.space.ordered(event)
        payload.append(EventMeasureResponse(kind=kind, event=labels, value=value))
        lines.append(f"{symbol}({{{','.join(labels)}}}) = {fmt(value)}")
    return CommandResult(payload, "\n".join(lines))


@router.command(
    "simulate",
    help="Частотная оценка вероятностей детерминированной выборкой",
    options=(
        option("--die", help="Правильная кость вида fairN"),
        option("--n", type=int, default=1000, help="Размер выборки"),
    ),
)
def simulate(config: RunConfig) -> CommandResult:
    if config.die is not None:
        if config.inputs:
            raise InvalidInput("Use either --die or --in, not both")
        dist = fair_die(int(config.die.removeprefix("fair")))
    else:
        require_inputs(config, 1)
        dist = load_distribution(config.inputs[0])
    if isinstance(dist, PossibilityDistribution):
        raise InvalidInput("Only probability distributions can be sampled")

    counts = sample(dist, config.n, config.seed)
    estimate = from_frequencies(counts)
    rows = [
        FrequencyRowOut(
            label=label,
            count=counts.counts[label],
            estimate=estimate[label],
            expected=dist[label],
            deviation=abs(float(estimate[label]) - float(dist[label])),
        )
        for label in dist.space.labels
    ]
    payload = SimulateResponse(
        n=config.n,
        seed=config.seed,
        rows=rows,
        max_deviation=max(row.deviation for row in rows),
        total_variation=total_variation(estimate, dist),
    )

    lines = [f"n = {config.n}, seed = {config.seed}"]
    lines.append(f"  {'label':<8} {'count':>10} {'estimate':>12} {'expected':>12}")
    for label in dist.space.labels:
        lines.append(
            f"  {label:<8} {counts.counts[label]:>10} {float(estimate[label]):>12.6f} "
            f"{float(dist[label]):>12.6f}"
        )
    lines.append(f"  max deviation {payload.max_deviation:.6f}")
    lines.append(f"  total variation {payload.total_variation:.6f}")
    return CommandResult(payload, "\n".join(lines))
