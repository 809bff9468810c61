"""Exception types shared across the package."""


class CoevonetError(Exception):
    """Base class for all package errors."""


class InvalidInputError(CoevonetError, ValueError):
    """Malformed or out-of-domain input (non-finite entries, bad shapes, ...)."""


class ChartDomainError(CoevonetError, ValueError):
    """A boundary state was passed where a strictly interior one is required.

    The exploration terms contain log(q/(1-q)) factors, so flows and logit
    charts are undefined on the simplex boundary whenever T > 0.
    """


class NotARestPointError(CoevonetError, ValueError):
    """Stability machinery was invoked on a state that is not at rest."""


class ConfigurationMismatchError(CoevonetError, ValueError):
    """A state does not have the network topology the caller asserted."""


class NumericalError(CoevonetError, RuntimeError):
    """NaN or divergence encountered during a computation."""


class StiffnessError(NumericalError):
    """Adaptive step size underflowed; the trajectory is too stiff to continue."""


class ConfigError(CoevonetError, ValueError):
    """Invalid run configuration (unknown key, missing value, bad type)."""
