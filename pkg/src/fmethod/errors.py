"""Exception hierarchy shared by every layer of the engine."""


class FMethodError(Exception):
    """Base class for all engine errors."""


class StructuralError(FMethodError, ValueError):
    """Operands live on incompatible variable lists, spaces or dimensions."""


class DomainError(FMethodError, ValueError):
    """An operation was called outside its mathematical domain."""


class PoleError(FMethodError, ZeroDivisionError):
    """A specialization hit a zero of a denominator."""

    def __init__(self, message, assignment=None):
        super().__init__(message)
        self.assignment = dict(assignment or {})


class DegenerateSpecialization(PoleError):
    """A specialization annihilates an object that is nonzero generically."""


class UnsupportedError(FMethodError, NotImplementedError):
    """A feature that is deliberately not implemented."""


class ParseError(FMethodError, ValueError):
    """Malformed textual input; ``position`` is a 0-based character offset."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.position = position
