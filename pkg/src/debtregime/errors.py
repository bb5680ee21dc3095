"""Exception hierarchy shared by all engine modules.

Exit-code mapping used by the CLI: ConfigError -> 2, DomainError (and
subclasses) -> 3.  Everything else is a bug.
"""


class EngineError(Exception):
    """Base class for all engine-raised errors."""


class DomainError(EngineError):
    """Numeric or domain violation: non-finite input, out-of-range parameter."""


class ScopeError(DomainError):
    """Operation called outside the regime conditions it is defined for."""


class InactiveRegimeError(ScopeError):
    """Repression channel inactive (epsilon <= 0) where an active one is required."""


class EstimationError(DomainError):
    """Insufficient or degenerate data for a statistical estimate."""


class ConfigError(EngineError):
    """Scenario/configuration problem: unknown key, unit violation, parse failure."""


class ModelInconsistencyWarning(UserWarning):
    """Parameter combination that is formally evaluable but economically suspect."""
