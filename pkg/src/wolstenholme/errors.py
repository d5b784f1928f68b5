"""Exception types raised across the package."""


class WolstenholmeError(Exception):
    """Base class for all errors raised by this package."""


class NotInvertible(WolstenholmeError, ValueError):
    pass


class NotPIntegral(WolstenholmeError, ValueError):
    pass


class NotUnimodular(WolstenholmeError, ValueError):
    pass


class ResourceLimit(WolstenholmeError, RuntimeError):
    pass


class DegreeAssertion(WolstenholmeError, AssertionError):
    pass


class PoleAtP(WolstenholmeError, ValueError):
    pass


class UnsupportedPrime(WolstenholmeError, ValueError):
    pass


class BadPrime(WolstenholmeError, ValueError):
    pass


class PrimeTooSmall(WolstenholmeError, ValueError):
    pass


class PrimeOutOfRange(WolstenholmeError, ValueError):
    pass


class ClassificationMismatch(WolstenholmeError, AssertionError):
    """Theorem-predicted exceptional class disagrees with the measured valuation."""


class ConfigError(WolstenholmeError, ValueError):
    pass


class ResumeMismatch(WolstenholmeError, ValueError):
    pass


class ParseError(WolstenholmeError, ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.field = field
