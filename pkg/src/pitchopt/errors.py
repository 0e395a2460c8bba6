"""Exception hierarchy shared by all modules."""


class PitchOptError(Exception):
    """Base class for every error raised by this package."""


class Unachievable(PitchOptError):
    """Requested thrust or power exceeds what the speed ceiling allows."""


class NonMonotonic(PitchOptError):
    """The load curve is not increasing on the solver bracket."""


class Diverged(PitchOptError):
    """The integrated motor state became non-finite."""


class BetaOutOfRange(PitchOptError):
    """Pitch command outside the actuator range."""


class NoSettle(PitchOptError):
    """Closed loop neither settled nor saturated before the timeout."""


class NowhereAchievable(PitchOptError):
    """Every grid point of a search saturated."""


class ConfigError(PitchOptError, ValueError):
    """Malformed parameter file."""
