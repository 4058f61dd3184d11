"""Exception types raised by the solvers and oracles."""


class AvalancheError(Exception):
    """Base class for all package errors."""


class DomainError(AvalancheError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class DryStateError(AvalancheError):
    """Operation requires a wet state but received vacuum."""


class InadmissibleShockError(AvalancheError, ValueError):
    """Requested shock family contradicts the Lax inequalities."""


class ConvergenceError(AvalancheError):
    """Root finding failed to bracket or converge."""


class ValidityError(AvalancheError):
    """The similarity solution is evaluated outside its range of validity."""


class CellInversionError(AvalancheError):
    """Lagrangian cell boundaries crossed each other."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class CFLViolationError(AvalancheError):
    """Time step violates the staggered CFL bound."""


class NegativeDepthError(AvalancheError):
    """A cell average became negative."""

    def __init__(self, message, index=None, case=None):
        super().__init__(message)
        self.index = index
        self.case = case


class MarginError(AvalancheError):
    """Front-tracking geometry could not be resolved."""


class ConfigError(AvalancheError, ValueError):
    """Invalid experiment configuration."""
