"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class FitError(RuntimeError):
    """Optimization could not produce a usable estimate."""
