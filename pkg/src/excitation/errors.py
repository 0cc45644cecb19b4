"""Exception types shared across the package."""


class ExcitationError(Exception):
    """Base class for all package errors."""


class InputError(ExcitationError, ValueError):
    """A caller-supplied value violates a documented precondition."""


class ShapeError(InputError):
    """Operands have incompatible dimensions."""


class FormatError(ExcitationError, ValueError):
    """A file exists but its contents do not match the expected layout."""


class NumericsError(ExcitationError, ArithmeticError):
    """A non-finite value appeared where finite math was required."""
