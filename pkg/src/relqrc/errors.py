"""Exception hierarchy shared by all relqrc modules."""


class RelqrcError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ConfigurationError(RelqrcError):
    """Invalid parameters, schemas or step configurations."""

    exit_code = 2


class EncodingError(RelqrcError):
    """Input point outside the configured encoding range."""

    exit_code = 2


class OutOfRangeError(RelqrcError):
    """Proper time outside the domain of an acceleration profile."""

    exit_code = 2


class DataError(RelqrcError):
    """Malformed dataset / feature files or non-finite values."""

    exit_code = 2


class NumericalValidityError(RelqrcError):
    """A run violated a numerical validity invariant (Fock leakage,
    symplecticity breach, norm drift)."""

    exit_code = 3
