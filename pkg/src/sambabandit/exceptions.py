class ConfigError(ValueError):
    """Raised when an experiment configuration is invalid.

    ``key`` is the dotted path of the offending config entry (e.g.
    ``experiments[0].agents[2].schedule.alpha``) so the CLI can name it.
    """

    def __init__(self, message: str, key: str | None = None):
        self.key = key
        self.message = message
        prefix = f"{key}: " if key else ""
        super().__init__(prefix + message)


class ScheduleError(ConfigError):
    """Raised when a learning-rate schedule is inadmissible (e.g. alpha >= 1)."""


class InstanceError(ValueError):
    """Raised for an invalid bandit instance, arm index or probability vector."""


class PreconditionError(ValueError):
    """Raised when a theory check is evaluated outside its stated domain."""


class QuadratureError(RuntimeError):
    """Raised when adaptive quadrature fails to reach the requested tolerance."""

    def __init__(self, message: str, abserr: float | None = None):
        self.abserr = abserr
        super().__init__(message)
