"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the domain on which the operation is defined."""


class InsufficientTable(ValueError):
    """The supplied prime table does not cover sqrt of the window's upper end."""


class Unsupported(ValueError):
    """The requested value exceeds the supported range of the chosen method."""
