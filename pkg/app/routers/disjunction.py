from loguru import logger

from app.documents import peek_keys, read_document
from app.exceptions import InvalidInput
from app.models.disjunction import (
    PairClass,
    classify_pair,
    prob_union_report,
    verify_exact_maxitivity,
    verify_prop_5_1,
    verify_prop_5_2,
)
from app.models.intensions import is_exhaustive, is_fuzzy_setup
from app.models.measures import ProbabilityDistribution
from app.routers import EVENT_OPTION, CommandResult, CommandRouter, fmt, require_inputs
from app.routers.measures import load_distribution
from app.schemas import (
    ClassifyResponse,
    FeatureExtractionOut,
    FixtureSchema,
    PairClassOut,
    PairClassReportOut,
    ProbUnionResponse,
    RunConfig,
    UnionComparisonResponse,
)

router = CommandRouter(tags=["disjunction"])


@router.command("classify", help="Классифицировать пары концепций фикстуры")
def classify(config: RunConfig) -> CommandResult:
    require_inputs(config, 1)
    document = read_document(config.inputs[0], FixtureSchema)
    fX = document.subject_intension()
    concepts = document.labeled_concepts()

    pairs = [
        PairClassOut(label_i=label_i, label_j=label_j, pair_class=classify_pair(fX, fi, fj).value)
        for i, (label_i, fi) in enumerate(concepts)
        for label_j, fj in concepts[i + 1 :]
    ]
    setup = is_fuzzy_setup(fX, concepts)
    payload = ClassifyResponse(fixture=document.name, pairs=pairs, fuzzy_setup=setup.fuzzy)

    lines = [f"fixture {document.name}"]
    lines.extend(f"  {p.label_i} / {p.label_j}: {p.pair_class}" for p in pairs)
    lines.append(f"  fuzzy setup: {setup.fuzzy}")
    return CommandResult(payload, "\n".join(lines))


def _compare_events(config: RunConfig) -> CommandResult:
    dist = load_distribution(config.inputs[0])
    if not isinstance(dist, ProbabilityDistribution):
        raise InvalidInput("Event union comparison needs a probability distribution")
    if len(config.events) != 2:
        raise InvalidInput("compare-union on a distribution needs exactly two --event")
    a, b = (
        dist.space.event(label.strip() for label in raw.split(",") if label.strip())
        for raw in config.events
    )
    report = prob_union_report(dist, a, b, config.tolerance)
    payload = ProbUnionResponse.model_validate(report)

    lines = [
        f"p(A) = {fmt(report.p_a)}, p(B) = {fmt(report.p_b)}",
        f"p(A∩B) = {fmt(report.p_intersection)}, p(A∪B) = {fmt(report.p_union)}",
        f"  max <= p(A∪B) <= sum: {report.bounds_ok}",
        f"  additive case: {report.additive_case}",
        f"  nested case: {report.nested_case}" + (" (trivial)" if report.trivial else ""),
    ]
    return CommandResult(payload, "\n".join(lines), report.bounds_ok)


@router.command(
    "compare-union",
    help="Сравнить точную возможность объединения с max и суммой",
    options=(EVENT_OPTION,),
)
def compare_union(config: RunConfig) -> CommandResult:
    require_inputs(config, 1)
    if "subject" not in peek_keys(config.inputs[0]):
        return _compare_events(config)

    document = read_document(config.inputs[0], FixtureSchema)
    fX = document.subject_intension()
    concepts = document.labeled_concepts()
    maxitivity = verify_exact_maxitivity(fX, concepts)
    unstrict = verify_prop_5_1(fX, concepts)
    feature = verify_prop_5_2(fX, concepts) if is_exhaustive(fX, concepts) else None

    payload = UnionComparisonResponse(
        fixture=document.name,
        pairs=[PairClassReportOut.model_validate(report) for report in maxitivity.pairs],
        exact_maxitivity=maxitivity.passed,
        unstrict_max=unstrict.passed,
        violations=list(unstrict.violations),
        feature_extraction=None
        if feature is None
        else FeatureExtractionOut.model_validate(feature),
    )

    lines = [f"fixture {document.name}"]
    header = f"  {'pair':<16} {'class':<22} {'exact':>8} {'max':>8} {'sum':>8} {'error':>8}"
    lines.append(header)
    for r in maxitivity.pairs:
        marker = " *" if r.pair_class is PairClass.PROJECTION_NESTED and r.max_error else ""
        lines.append(
            f"  {r.label_i + '|' + r.label_j:<16} {r.pair_class.value:<22} "
            f"{fmt(r.pi_union_exact):>8} {fmt(r.pi_union_max):>8} "
            f"{fmt(r.pi_union_sum):>8} {fmt(r.max_error):>8}{marker}"
        )
    lines.append(f"  exact maxitivity on nested pairs: {maxitivity.passed}")
    lines.append(f"  max as lower bound: {unstrict.passed}")
    lines.extend(f"    {violation}" for violation in unstrict.violations)
    if feature is not None:
        lines.append(
            f"  π(Ψ) = {fmt(feature.pi_space)}, max π = {fmt(feature.max_value)} at {feature.argmax}"
        )
    passed = maxitivity.passed and unstrict.passed
    logger.info(f"Union comparison for {document.name}: passed={passed}")
    return CommandResult(payload, "\n".join(lines), passed)
