"""Exception types shared across the package."""


class NormActError(Exception):
    """Base class for all failures raised by this package."""


class SingularMatrix(NormActError):
    """Matrix is numerically singular; inverse-based quantities are unavailable."""


class NonConvergence(NormActError):
    """An adaptive refinement exhausted its budget without meeting tolerance."""


class OutOfRange(NormActError):
    """Time argument lies outside the schedule horizon [0, T]."""


class SingularPropagator(NormActError):
    """|det U| underflowed; determinant normalization would overflow."""


class NotDetNormalized(NormActError):
    """Input was required to have unit determinant but does not."""


class BadParam(NormActError):
    """Scenario parameters violate their constraints."""


class OracleMismatch(NormActError):
    """A computed pipeline value disagrees with a scenario closed form."""


class ConfigError(NormActError):
    """Audit configuration is malformed or violates its schema."""
