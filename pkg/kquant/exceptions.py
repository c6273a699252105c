class KQuantError(Exception):
    """Base class for errors raised by kquant."""


class DimensionMismatchError(KQuantError, ValueError):
    pass


class ArityMismatchError(KQuantError, ValueError):
    pass


class AxisOutOfRangeError(KQuantError, IndexError):
    pass


class DegreeError(KQuantError, ValueError):
    """A polyvector field or operator has the wrong degree for the operation."""


class TruncationError(KQuantError, ValueError):
    """Raised for a nonzero hbar^0 part where one is forbidden, or mismatched orders."""


class NotPoissonError(KQuantError, ValueError):
    pass


class NotAntisymmetricError(KQuantError, ValueError):
    pass


class InvalidGraphError(KQuantError, ValueError):
    pass


class UnsupportedGraphError(KQuantError, ValueError):
    """Raised for (n, m) combinations or orders outside the supported range."""


class MissingWeightError(KQuantError, KeyError):
    pass


class InvalidPermutationError(KQuantError, ValueError):
    pass


class SchemaError(KQuantError, ValueError):
    pass


class NotConstantError(KQuantError, ValueError):
    """A constant-coefficient structure was required."""


class DegenerateConfigurationError(KQuantError, ValueError):
    """Coincident points or a configuration outside the gauge slice."""


class NotUnitalError(KQuantError, ValueError):
    """A gauge generator does not annihilate constants."""


class SampleCountError(KQuantError, ValueError):
    """Fewer than two Monte-Carlo samples, so no standard error exists."""
