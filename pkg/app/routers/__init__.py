from collections.abc import Callable
from dataclasses import dataclass, field

from pydantic import BaseModel

from app.exceptions import InvalidInput
from app.schemas import RunConfig


@dataclass
class CommandResult:
    """
    Результат команды: модель для JSON, текст для человека и вердикт.
    Список моделей выводится в JSON построчно.
    """

    payload: BaseModel | list[BaseModel]
    text: str
    passed: bool = True

    def render(self, output_format: str) -> str:
        if output_format == "text":
            return self.text
        if isinstance(self.payload, list):
            return "\n".join(item.model_dump_json() for item in self.payload)
        return self.payload.model_dump_json(indent=2)


@dataclass(frozen=True)
class Option:
    flags: tuple[str, ...]
    kwargs: dict = field(default_factory=dict)


def option(*flags: str, **kwargs) -> Option:
    return Option(flags, kwargs)


@dataclass(frozen=True)
class Command:
    name: str
    handler: Callable[[RunConfig], CommandResult]
    help: str
    options: tuple[Option, ...] = ()


class CommandRouter:
    """
    Маршрутизатор команд по образцу APIRouter: обработчики регистрируются декоратором.
    """

    def __init__(self, tags: list[str]):
        self.tags = tags
        self.commands: list[Command] = []

    def command(self, name: str, help: str, options: tuple[Option, ...] = ()):
        def decorator(func: Callable[[RunConfig], CommandResult]):
            self.commands.append(Command(name, func, help, options))
            return func

        return decorator


def require_inputs(config: RunConfig, count: int) -> None:
    if len(config.inputs) != count:
        raise InvalidInput(
            f"Command {config.command!r} needs {count} --in file(s), got {len(config.inputs)}"
        )


def fmt(value) -> str:
    """
    Текстовая запись значения: дробь как есть, вещественное с 12 знаками.
    """
    if value is None:
        return "undefined"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


EVENT_OPTION = option(
    "--event", dest="events", action="append", help="Событие: метки через запятую"
)
