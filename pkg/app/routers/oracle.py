from loguru import logger

from app.fixtures import WORLD_SIZE
from app.models.intensions import Grid
from app.models.oracle import (
    sweep_composition,
    sweep_event_measures,
    sweep_inference,
    sweep_sigma_triviality,
    sweep_union_possibility,
)
from app.routers import CommandResult, CommandRouter, option
from app.schemas import RunConfig, SweepOut

router = CommandRouter(tags=["oracle"])


@router.command(
    "verify",
    help="Прогнать оракулы на случайных фикстурах",
    options=(option("--count", type=int, help="Число фикстур на каждый прогон"),),
)
def verify(config: RunConfig) -> CommandResult:
    cols, rows = config.grid_size
    grid = Grid(cols, rows, WORLD_SIZE / cols)
    summaries = [
        sweep_event_measures(config.count, config.seed),
        sweep_union_possibility(config.count, config.seed, grid),
        sweep_composition(config.count, config.seed),
        sweep_inference(config.count, config.seed),
        sweep_sigma_triviality(config.count, config.seed),
    ]
    payload = [SweepOut.model_validate(summary) for summary in summaries]
    lines = [
        f"{s.claim_id:<20} {s.trials:>7} trials {s.failures:>5} failures"
        + (f"  first: {s.witness}" if s.witness else "")
        for s in summaries
    ]
    passed = all(summary.passed for summary in summaries)
    if not passed:
        logger.warning("Oracle sweep found failures")
    return CommandResult(payload, "\n".join(lines), passed)
