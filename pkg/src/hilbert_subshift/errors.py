"""Exception hierarchy shared by all modules."""


class SubshiftError(Exception):
    """Base class for errors raised by this package."""


class ScheduleError(SubshiftError, ValueError):
    """Malformed schedule table or config file."""


class InfeasibleError(SubshiftError):
    """A request that is well posed but cannot be carried out at desk scale.

    The CLI maps this family to exit code 2.
    """


class ScheduleInconsistencyError(InfeasibleError):
    """No repetition count satisfies the density inequalities."""


class RepresentationError(InfeasibleError):
    """The query needs exact data for a level stored only in log-space."""


class WindowError(SubshiftError, ValueError):
    """A finite window does not cover the coordinates a computation needs."""


class MembershipError(SubshiftError, ValueError):
    """A word or block vector is not in the required block set."""
