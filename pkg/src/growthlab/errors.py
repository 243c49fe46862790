"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An input lies outside the domain where a formula is defined."""


class SolverError(RuntimeError):
    """A numerical routine failed (singular denominator, no convergence)."""


class ConfigError(ValueError):
    """A scenario configuration could not be parsed or validated."""
