"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DepthCapError(ValueError):
    """A composition depth beyond the supported cap was requested.

    Exponential towers deeper than three factors leave the double-precision
    range for arguments >= 1, so the transformation machinery refuses them
    loudly instead of saturating.
    """


class EvaluationError(RuntimeError):
    """A potential or weight could not be evaluated at a requested point."""
