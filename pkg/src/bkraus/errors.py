"""Exception types raised by the library."""


class BKrausError(ValueError):
    """Base class for all domain errors raised by ``bkraus``."""


class TruncationError(BKrausError):
    """A state or operator does not fit the truncated Fock space."""


class DimensionError(BKrausError):
    """Operands live on incompatible spaces."""


class ConvergenceError(BKrausError):
    """A series or cutoff search exceeded its term budget."""


class DegenerateEncodingError(BKrausError):
    """The requested logical state does not exist (odd cat at alpha = 0)."""


class UndefinedConditionalStateError(BKrausError):
    """A conditional map produced a state with vanishing trace."""


class IntegrationError(BKrausError):
    """The master-equation integrator ran out of steps."""
