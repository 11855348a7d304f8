"""Exception types shared across the package."""


class PrecubicalError(ValueError):
    """Base class for domain errors raised by this package."""


class UnknownCubeError(PrecubicalError):
    """An operation referenced a cube id that is not in the complex."""


class NoCommonCarrierError(PrecubicalError):
    """Two points do not share any carrier cube."""


class SubordinationError(PrecubicalError):
    """A path is not subordinate to the collar of the given cube chain."""


class FormatError(PrecubicalError):
    """A document failed to parse or violated its schema.

    ``line`` and ``column`` are set when the underlying JSON was malformed.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column
