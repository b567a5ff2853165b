"""Exception and warning classes used throughout feshpulse."""


class FeshPulseError(Exception):
    """Base class of all feshpulse errors."""


class ConfigurationError(FeshPulseError, ValueError):
    """Invalid or contradictory input (pulse, grid or config file)."""


class DomainError(FeshPulseError, ValueError):
    """Argument outside the domain of an operation."""


class GridRangeError(FeshPulseError, ValueError):
    """Requested point lies outside a sampled grid.

    `band` holds the ``(low, high)`` interval that would have to be covered.

    """

    def __init__(self, message, band=None):
        FeshPulseError.__init__(self, message)
        self.band = band


class ErfiOverflowError(FeshPulseError, OverflowError):
    """erfi(x) exceeds the double range; `scaled` is exp(-x**2)*erfi(x)."""

    def __init__(self, message, scaled):
        FeshPulseError.__init__(self, message)
        self.scaled = scaled


class NumericalError(FeshPulseError, RuntimeError):
    """A numerical procedure did not reach its tolerance.

    `achieved` is the tolerance that was actually reached (if known).

    """

    def __init__(self, message, achieved=None):
        FeshPulseError.__init__(self, message)
        self.achieved = achieved


class CausticError(NumericalError):
    """Stationary-phase formula evaluated where P'(t) vanishes."""


class ResolutionError(NumericalError):
    """A time or energy grid is too coarse for the requested quantity."""


class CoverageError(NumericalError):
    """A spectrum grid misses a significant part of the spectral weight."""

    def __init__(self, message, loss):
        NumericalError.__init__(self, message, achieved=loss)
        self.loss = loss


class FeshPulseWarning(UserWarning):
    """Base class of all feshpulse warnings."""


class UnderflowWarning(FeshPulseWarning):
    """A special function underflowed to zero."""


class ThresholdWarning(FeshPulseWarning):
    """Resonance energy inside the guard band at the continuum threshold."""


class AsymptoticWarning(FeshPulseWarning):
    """An asymptotic formula is used outside its validity range."""


class MultiplicityWarning(FeshPulseWarning):
    """More than one stationary point was found."""


class RegimeWarning(FeshPulseWarning):
    """Result outside the single-dissociation (few percent) regime."""


class NoPeakWarning(FeshPulseWarning):
    """A spectrum has no identifiable main lobe."""


class BudgetWarning(FeshPulseWarning):
    """The optimizer ran out of evaluations without improving."""
