"""Exception types shared across the package."""


class SimulatorError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(SimulatorError):
    """A run configuration is inconsistent or out of supported range."""


class ShapeError(SimulatorError):
    """An array argument has the wrong length or dimensionality."""


class InvalidStateError(SimulatorError):
    """A state vector is unusable, e.g. all-zero input that cannot be normalized."""


class UnsupportedParameterError(SimulatorError):
    """A parameter value falls outside the regime the gate synthesis supports."""


class NumericalError(SimulatorError):
    """An iterative numeric routine failed to converge to its tolerance."""


class IndeterminatePhaseError(SimulatorError):
    """Phase readout is undefined because both quadrature estimates vanish."""
