"""Exception types raised by belgauge."""


class BelgaugeError(ValueError):
    """Base class for all belgauge errors."""


class NotSquareError(BelgaugeError):
    pass


class NotHermitianError(BelgaugeError):
    pass


class ShapeMismatchError(BelgaugeError):
    pass


class NotNormalizedError(BelgaugeError):
    pass


class InvalidStateError(BelgaugeError):
    pass


class IndexOutOfRangeError(BelgaugeError):
    pass


class DimensionCapError(BelgaugeError):
    pass


class DimensionTooSmallError(BelgaugeError):
    pass


class SettingsTooSmallError(BelgaugeError):
    pass


class RankTooSmallError(BelgaugeError):
    pass


class InvalidLowerBoundError(BelgaugeError):
    pass


class NotTwoQubitError(BelgaugeError):
    pass


class CutoffTooSmallError(BelgaugeError):
    pass
