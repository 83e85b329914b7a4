"""Exception hierarchy shared by all reductlab modules."""


class ReductLabError(Exception):
    """Base error for the package."""


class ParseError(ReductLabError):
    """Formula text could not be parsed; carries the offending position."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class CapExceeded(ReductLabError):
    """A configured resource cap was hit; carries the cap name."""

    def __init__(self, cap: str, detail: str = ""):
        self.cap = cap
        message = f"cap exceeded: {cap}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class UnsupportedBase(ReductLabError):
    """Operation asked for a base catalog it does not support."""


class InvalidStructure(ReductLabError):
    """A finite structure or type violates its invariants."""


class AssemblyError(ReductLabError):
    """Pairwise behavior outputs did not assemble into a consistent type.

    Raised from apply_to_type; reaching it through a behavior that passed
    is_realizable indicates an internal error.
    """
