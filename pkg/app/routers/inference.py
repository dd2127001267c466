from loguru import logger

from app.documents import load_document
from app.exceptions import AllZeroGiven, InvalidInput, SpaceTooLarge
from app.models.inference import (
    Axis,
    ConditionalRelation,
    Direction,
    compose,
    condition,
    marginal,
    update_sequence,
    validate_joint,
    validate_relation,
)
from app.models.measures import PossibilityDistribution
from app.models.oracle import oracle_composition
from app.models.values import maximum
from app.routers import CommandResult, CommandRouter, fmt, option, require_inputs
from app.routers.measures import load_distribution
from app.schemas import (
    ComposeResponse,
    DistributionOut,
    InferResponse,
    JointSchema,
    MatrixReportOut,
    RelationOut,
    RelationSchema,
    RunConfig,
    UpdateResponse,
    VerdictOut,
)

router = CommandRouter(tags=["inference"])


def _matrix_lines(title: str, relation: ConditionalRelation) -> list[str]:
    lines = [f"{title} ({relation.kind.value})"]
    lines.append("  " + " " * 10 + "".join(f"{label:>12}" for label in relation.given_space.labels))
    for label, row in zip(relation.out_space.labels, relation.values):
        lines.append(f"  {label:<10}" + "".join(f"{fmt(value):>12}" for value in row))
    return lines


def _report_lines(report) -> list[str]:
    lines = [f"{report.kind.value} matrix: {'PASS' if report.passed else 'FAIL'}"]
    for item in report.checks:
        lines.append(
            f"  {item.name:<14} {'ok' if item.passed else 'violated'}"
            + (f"  ({item.witness})" if item.witness else "")
        )
    return lines


@router.command("infer", help="Маргиналы и условные отношения совместного распределения")
def infer(config: RunConfig) -> CommandResult:
    require_inputs(config, 1)
    joint = load_document(config.inputs[0], JointSchema)
    report = validate_joint(joint, config.tolerance)
    payload = InferResponse(report=MatrixReportOut.model_validate(report))
    lines = _report_lines(report)
    if not report.passed:
        logger.warning(f"Joint in {config.inputs[0]} failed validation")
        return CommandResult(payload, "\n".join(lines), False)

    rows = marginal(joint, Axis.ROW)
    cols = marginal(joint, Axis.COL)
    payload.row_marginal = DistributionOut.from_domain(rows)
    payload.col_marginal = DistributionOut.from_domain(cols)
    lines.append("row marginal: " + ", ".join(f"{k}={fmt(v)}" for k, v in rows.values.items()))
    lines.append("col marginal: " + ", ".join(f"{k}={fmt(v)}" for k, v in cols.values.items()))

    for direction, field in (
        (Direction.OUT_GIVEN_ROW, "out_given_row"),
        (Direction.OUT_GIVEN_COL, "out_given_col"),
    ):
        try:
            relation = condition(joint, direction)
        except AllZeroGiven:
            continue
        setattr(payload, field, RelationOut.from_domain(relation))
        lines.extend(_matrix_lines(direction.value, relation))
    return CommandResult(payload, "\n".join(lines))


@router.command("compose", help="Композиция двух условных отношений: (z|y), затем (x|z)")
def compose_command(config: RunConfig) -> CommandResult:
    require_inputs(config, 2)
    first, second = (load_document(path, RelationSchema) for path in config.inputs)
    result = compose(first, second)
    report = validate_relation(result, config.tolerance)
    try:
        verdict = oracle_composition(first, second)
    except SpaceTooLarge as ex:
        logger.info(f"Composition oracle skipped: {ex.detail}")
        verdict = None

    payload = ComposeResponse(
        relation=RelationOut.from_domain(result),
        columns=MatrixReportOut.model_validate(report),
        oracle=None if verdict is None else VerdictOut.model_validate(verdict),
    )
    lines = _matrix_lines("composed", result) + _report_lines(report)
    if verdict is not None:
        lines.append(
            f"oracle {verdict.claim_id}: {'PASS' if verdict.passed else 'FAIL'}"
            + (f" ({verdict.witness})" if verdict.witness else "")
        )
    passed = report.passed and (verdict is None or verdict.passed)
    return CommandResult(payload, "\n".join(lines), passed)


@router.command(
    "update",
    help="Обновление априорного распределения по наблюдениям",
    options=(
        option("--observed", action="append", help="Наблюдаемая метка; можно повторять"),
    ),
)
def update(config: RunConfig) -> CommandResult:
    require_inputs(config, 2)
    if not config.observed:
        raise InvalidInput("update needs at least one --observed label")
    prior = load_distribution(config.inputs[0])
    likelihood = load_document(config.inputs[1], RelationSchema)
    sub_normalized = (
        isinstance(prior, PossibilityDistribution) and maximum(prior.values.values()) < 1
    )
    posterior = update_sequence(prior, likelihood, config.observed)

    payload = UpdateResponse(
        observed=list(config.observed),
        prior_sub_normalized=sub_normalized,
        posterior=DistributionOut.from_domain(posterior),
    )
    lines = [f"observed: {', '.join(config.observed)}"]
    if sub_normalized:
        lines.append("  prior is sub-normalized")
    lines.extend(f"  {label:<12} {fmt(value)}" for label, value in posterior.values.items())
    return CommandResult(payload, "\n".join(lines))
