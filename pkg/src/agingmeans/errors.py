"""Exception hierarchy shared by every module of the package."""


class AgingError(Exception):
    """Base class for domain errors raised by ``agingmeans``."""


class OutOfSupport(AgingError, ValueError):
    """A time argument lies outside the support of a hazard model."""


class NonPositiveRate(AgingError, ValueError):
    """A tabulated hazard contains a rate that is zero or negative."""


class QuadratureFailure(AgingError, ArithmeticError):
    """The requested tolerance could not be met within the panel budget."""


class DivergentFunctional(AgingError, ArithmeticError):
    """A harmonic functional is undefined because 1/r is not integrable."""


class MixedSupports(AgingError, ValueError):
    """Models that must share a left support endpoint do not."""


class EmptyList(AgingError, ValueError):
    pass


class NonPositiveEntry(AgingError, ValueError):
    pass


class ParseError(AgingError, ValueError):
    """Malformed input; ``row`` is the 1-based data row when known."""

    def __init__(self, message, row=None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class EmptyData(AgingError, ValueError):
    pass


class AllCensored(AgingError, ValueError):
    pass


class BandwidthTooSmall(AgingError, ValueError):
    pass
