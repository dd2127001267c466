class EngineError(Exception):
    """
    Базовая ошибка движка. Как HTTPException в веб-приложении,
    несёт код завершения и текст для пользователя.
    """

    exit_code = 2

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InvalidInput(EngineError):
    pass


class SpaceTooLarge(EngineError):
    pass


class ForeignLabel(EngineError):
    pass


class UniverseMismatch(EngineError):
    pass


class EmptyReference(EngineError):
    pass


class BothEmpty(EngineError):
    pass


class ZeroVector(EngineError):
    pass


class DimensionMismatch(EngineError):
    pass


class DegenerateGrid(EngineError):
    pass


class ZeroTotal(EngineError):
    pass


class KindMismatch(EngineError):
    pass


class SpaceMismatch(EngineError):
    pass


class AllZeroGiven(EngineError):
    pass


class ZeroEvidence(EngineError):
    pass


class UndefinedColumn(EngineError):
    pass


class AllZeroPossibility(EngineError):
    pass


class UnknownFixture(EngineError):
    pass


class NotExhaustive(EngineError):
    """
    Нарушена гипотеза исчерпываемости: ни одна концепция не даёт π = 1.
    """

    exit_code = 1


class InternalDisagreement(EngineError):
    exit_code = 1


class FixtureValidationError(EngineError):
    exit_code = 1
