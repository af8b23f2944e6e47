"""Exception types shared across the package."""


class FolabError(Exception):
    """Base class for all folab errors."""


class DomainError(FolabError):
    """An argument is outside the mathematical domain of the operation."""


class CapacityError(FolabError):
    """The request exceeds a configured enumeration / cost cap."""


class FormulaSyntaxError(FolabError):
    """Bad formula text.  Carries the offset of the first bad token."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class GraphFormatError(FolabError):
    """Bad graph or pair file."""
