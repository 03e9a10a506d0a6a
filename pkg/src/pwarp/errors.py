"""Exception and warning types shared across modules."""

from .expr import DomainError, ExprError, ExprSyntaxError, NonFiniteError, UnknownIdentifierError


class PwarpError(Exception):
    """Base class for geometric errors raised by the engine."""


class SpecError(PwarpError, ValueError):
    """A manifold or warped description is malformed."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class SingularCometricError(PwarpError):
    pass


class SignatureError(PwarpError):
    """The cometric signature differs from the declared index."""


class DegeneratePlaneError(PwarpError):
    pass


class NotNullError(PwarpError):
    pass


class DegenerateDirectionError(PwarpError):
    pass


class CoframeConstructionError(PwarpError):
    pass


class NameCollisionError(SpecError):
    pass


class NonPositiveWarpError(SpecError):
    pass


class IndexRangeError(PwarpError, ValueError):
    pass


class EmptySignatureRangeWarning(UserWarning):
    """The timelike/spacelike double sum is empty (q = 0 or q = k)."""


__all__ = [
    "PwarpError", "SpecError", "SingularCometricError", "SignatureError",
    "DegeneratePlaneError", "NotNullError", "DegenerateDirectionError",
    "CoframeConstructionError", "NameCollisionError", "NonPositiveWarpError",
    "IndexRangeError", "EmptySignatureRangeWarning", "ExprError",
    "ExprSyntaxError", "UnknownIdentifierError", "DomainError", "NonFiniteError",
]
