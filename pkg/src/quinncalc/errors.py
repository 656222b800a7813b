"""Exception types shared across the package."""


class QuinnError(Exception):
    """Base class for all errors raised by quinncalc."""


class CategoryError(QuinnError):
    """Unknown objects, inadmissible triples, malformed category data."""


class InadmissibleError(QuinnError):
    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path


class ShapeError(QuinnError):
    """A move was applied at a path that does not have the required local shape."""


class ParseError(QuinnError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class ScriptError(QuinnError):
    def __init__(self, index, move, cause):
        super().__init__(f"move {index} ({move}): {cause}")
        self.index = index
        self.move = move
        self.cause = cause


class NotSpecialError(QuinnError):
    """The trace-unit equation has no solution for some object."""
