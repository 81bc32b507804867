"""Exception types shared across the package."""


class EmptySimplexError(Exception):
    """Base class for every error raised by this package."""


class DegenerateSimplexError(EmptySimplexError, ValueError):
    """The vertex list does not span a full-dimensional simplex."""


class ParameterError(EmptySimplexError, ValueError):
    """Family parameters violate a stated constraint.

    ``constraint`` names the violated condition so callers (and the CLI)
    can report it verbatim.
    """

    def __init__(self, constraint: str, message: str):
        super().__init__(f"{constraint}: {message}")
        self.constraint = constraint


class ResourceLimitError(EmptySimplexError, RuntimeError):
    """A computation was refused or aborted by a size/step guard."""


class WitnessError(EmptySimplexError, RuntimeError):
    """A witness whose existence is guaranteed could not be produced or verified."""
