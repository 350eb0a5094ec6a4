"""Exception hierarchy shared across the engine."""


class TMNError(Exception):
    """Base class for all engine errors."""


class AlreadyComplete(TMNError):
    pass


class EmptyChain(TMNError):
    pass


class NotComplete(TMNError):
    pass


class HistoryParseError(TMNError):
    pass


class ParseError(TMNError):
    """Malformed calculator question."""

    def __init__(self, reason: str, position: int = 0, text: str = ""):
        self.reason = reason
        self.position = position
        self.text = text
        super().__init__(f"{reason} at position {position}" + (f": {text!r}" if text else ""))


class CalcError(TMNError):
    pass


class UnitMismatch(CalcError):
    pass


class IncomparableOperands(CalcError):
    pass


class EmptyQuestion(TMNError):
    """The complex question has no essential words."""


class NoGoldAnswer(TMNError):
    pass


class ServiceUnavailable(TMNError):
    """A model service failed after the retry policy was exhausted."""


class NoChainFound(TMNError):
    pass


class ConfigError(TMNError):
    pass


class DataFormatError(TMNError):
    """A malformed input record; ``line`` is 1-based."""

    def __init__(self, path: str, line: int, reason: str):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {reason}")
