"""Exception types raised by the engine."""


class EngineError(Exception):
    """Base class for all engine errors."""


class NonMonotoneTimeError(EngineError):
    """A frame's timestamp did not strictly increase within its session."""


class NonOrthonormalError(EngineError):
    """A pose matrix failed the rotation validity checks."""


class ParseError(EngineError):
    """A wire-format line could not be parsed into a valid record."""


class ConfigError(EngineError):
    """A configuration document is malformed or out of range.

    Carries the offending key path so callers can report it precisely.
    """

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason
