"""Exception types raised across the package."""


class OdometryError(ValueError):
    """Base class for data errors (bad logs, bad parameters)."""


class NonMonotonicTime(OdometryError):
    pass


class ZeroTimeStep(OdometryError):
    pass


class DegenerateField(OdometryError):
    pass


class EmptyLog(OdometryError):
    pass


class MalformedHeader(OdometryError):
    pass


class NoValidRows(OdometryError):
    pass


class StepOutOfRange(OdometryError):
    pass


class DegenerateX(OdometryError):
    pass


class ZeroPath(OdometryError):
    pass


class InvalidConfig(OdometryError):
    pass


class EmptyTrajectory(OdometryError):
    pass


class UnrepairableBoundary(UserWarning):
    """Interpolation impossible at the ends of a log; hold_last used instead."""
