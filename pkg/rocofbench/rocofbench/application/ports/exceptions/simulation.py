from rocofbench.application.ports.exceptions.base import ConfigurationError


class SimulationConfigError(ConfigurationError):
    """
    Raised when a grid, relay or measurement configuration is invalid.
    """
    message: str = "Invalid simulation configuration."
