import json
from pathlib import Path
from typing import TypeVar

from loguru import logger
from pydantic import BaseModel, ValidationError

from app.exceptions import EngineError, InvalidInput

SchemaT = TypeVar("SchemaT", bound=BaseModel)


def _location(loc: tuple) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


def read_document(path: Path, schema: type[SchemaT]) -> SchemaT:
    """
    Читает JSON-документ и валидирует его схемой.
    Любая ошибка превращается в InvalidInput с именем файла и пути к полю.
    """
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as ex:
        raise InvalidInput(f"{path}: cannot be read ({ex.strerror})")
    try:
        document = schema.model_validate_json(raw)
    except ValidationError as ex:
        error = ex.errors()[0]
        raise InvalidInput(f"{path}: field {_location(error['loc'])}: {error['msg']}")
    logger.debug(f"Loaded {schema.__name__} from {path}")
    return document


def load_document(path: Path, schema: type[BaseModel]):
    """
    Читает документ и сразу строит доменный объект через to_domain().
    Ошибки доменной проверки дополняются именем файла.
    """
    document = read_document(path, schema)
    try:
        return document.to_domain()
    except EngineError as ex:
        ex.detail = f"{path}: {ex.detail}"
        ex.args = (ex.detail,)
        raise


def peek_keys(path: Path) -> set[str]:
    """
    Ключи верхнего уровня документа: по ним выбирается схема.
    """
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as ex:
        raise InvalidInput(f"{path}: not a JSON document ({ex})")
    if not isinstance(raw, dict):
        raise InvalidInput(f"{path}: top-level value must be an object")
    return set(raw)


def write_report(text: str, out: Path | None = None) -> None:
    """
    Отчёт пишется в файл --out или в stdout; перевод строки в конце всегда один.
    """
    text = text.rstrip("\n") + "\n"
    if out is None:
        print(text, end="")
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as ex:
        raise InvalidInput(f"{out}: cannot be written ({ex.strerror})")
    logger.info(f"Report written to {out}")
