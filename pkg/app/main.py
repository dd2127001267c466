import argparse
import sys
from uuid import uuid4

from loguru import logger
from pydantic import ValidationError

from app.config import (
    DEFAULT_GRID,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    LOG_FILE,
    LOG_LEVEL,
)
from app.documents import write_report
from app.exceptions import EngineError
from app.routers import Command, disjunction, fixtures, inference, measures, oracle
from app.schemas import RunConfig

# Подключаем команды всех маршрутизаторов
ROUTERS = (
    measures.router,
    disjunction.router,
    inference.router,
    fixtures.router,
    oracle.router,
)
COMMANDS: dict[str, Command] = {
    command.name: command for router in ROUTERS for command in router.commands
}


def configure_logging() -> None:
    """
    Отчёты идут в stdout, поэтому в stderr пишутся только предупреждения и ошибки.
    """
    logger.remove()
    logger.configure(extra={"log_id": "-"})
    logger.add(sys.stderr, format="{level}: {message}", level="WARNING")
    if LOG_FILE:
        logger.add(
            LOG_FILE,
            format="Log: [{extra[log_id]}:{time} {level} {message}]",
            level=LOG_LEVEL,
            enqueue=True,
        )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="inputs", action="append", help="Входной JSON-файл")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Зерно генератора")
    common.add_argument("--grid", default=DEFAULT_GRID, help="Сетка COLSxROWS")
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    common.add_argument(
        "--format", dest="output_format", choices=("text", "json"), default="text"
    )
    common.add_argument("--out", help="Записать отчёт в файл")

    parser = argparse.ArgumentParser(
        prog="sigma-max", description="Движок вероятностей и возможностей"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for router in ROUTERS:
        for command in router.commands:
            subparser = subparsers.add_parser(
                command.name,
                help=command.help,
                description=f"{command.help} [{', '.join(router.tags)}]",
                parents=[common],
            )
            for item in command.options:
                subparser.add_argument(*item.flags, **item.kwargs)
    return parser


def run(config: RunConfig) -> int:
    """
    Выполняет одну команду и возвращает код завершения: 0 если всё прошло,
    1 если проверка не прошла, 2 при ошибке входных данных.
    """
    with logger.contextualize(log_id=str(uuid4())):
        try:
            result = COMMANDS[config.command].handler(config)
            write_report(result.render(config.output_format), config.out)
        except EngineError as ex:
            if ex.exit_code == 1:
                logger.warning(f"Command {config.command} failed a check: {ex.detail}")
            else:
                logger.error(f"Command {config.command} rejected its input: {ex.detail}")
            return ex.exit_code
        except Exception as ex:
            logger.exception(f"Command {config.command} crashed: {ex}")
            return 2

        if result.passed:
            logger.info(f"Command {config.command} succeeded")
            return 0
        logger.warning(f"Command {config.command} reported failed checks")
        return 1


def main(argv: list[str] | None = None) -> int:
    configure_logging()
    namespace = build_parser().parse_args(argv)
    options = {key: value for key, value in vars(namespace).items() if value is not None}
    try:
        config = RunConfig.model_validate(options)
    except ValidationError as ex:
        error = ex.errors()[0]
        field = ".".join(str(part) for part in error["loc"])
        logger.error(f"Invalid option {field}: {error['msg']} (got {error.get('input')!r})")
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
