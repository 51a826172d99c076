"""Exception types raised by the decision engine."""


class DecisionError(Exception):
    """Base class for all engine errors."""


class NormalizationError(DecisionError, ValueError):
    """A probability vector or table row does not sum to one."""


class DimensionError(DecisionError, ValueError):
    """Array shapes of priors, tables and outcome values disagree."""


class UtilityDomainError(DecisionError, ValueError):
    """A monetary increment lies at or below the significance threshold."""

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class UndefinedConditionalError(DecisionError, ZeroDivisionError):
    """Conditioning on evidence of probability zero."""


class IndeterminateOddsError(DecisionError, ArithmeticError):
    """Product of zero and infinite odds."""


class NoFairProbabilityError(DecisionError):
    """The fairness objective has no root in the open unit interval."""
