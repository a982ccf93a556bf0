"""Exception and warning types shared across the simulation modules."""


class OscarSimError(Exception):
    """Base class for all errors raised by this package."""


class PoleError(OscarSimError):
    """A formula was evaluated too close to one of its poles."""


class IntegrationError(OscarSimError):
    """A numerical integrator failed to meet its tolerance or stalled."""


class TruncationError(OscarSimError):
    """The configured Fock cutoff leaves a non-negligible probability tail."""


class LeakageError(OscarSimError):
    """Dynamical population reached the top of a truncated Fock ladder."""


class DimensionError(OscarSimError):
    """A truncated space was configured with an unusable dimension."""


class ConfigError(OscarSimError):
    """A run configuration failed validation."""


class AdiabaticityWarning(UserWarning):
    """Parameters are outside the regime where the dispersive model is valid."""


class ValidityWarning(UserWarning):
    """Parameters strain a modelling assumption (for example low temperature)."""
