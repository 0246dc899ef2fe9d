"""Exception hierarchy shared by the library and the command line."""


class HipmLabError(Exception):
    """Base class for all library errors."""


class ParameterError(HipmLabError, ValueError):
    """Invalid parameter value or malformed input."""


class DomainError(ParameterError):
    """An atom lies outside the declared domain interval."""


class ShapeMismatchError(ParameterError):
    """Two objects that must agree in size or grid do not."""


class NumericalError(HipmLabError, ArithmeticError):
    """A computation produced a non-finite value."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ParseError(ParameterError):
    """A measure or law file could not be parsed."""

    def __init__(self, message, path=None, line=None):
        if path is not None:
            where = f"{path}:{line}:" if line is not None else f"{path}:"
        else:
            where = f"line {line}:" if line is not None else ""
        super().__init__(f"{where} {message}" if where else message)
        self.path = path
        self.line = line
