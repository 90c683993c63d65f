"""
Exceptions and warning categories shared across catgate
"""


class CatgateError(Exception):
    """Base class for all catgate errors"""


class DimensionError(CatgateError, ValueError):
    """Operands have inconsistent mode dimensions or mode indices"""


class CapacityError(CatgateError):
    """A dense operand would exceed the configured memory budget"""


class TruncationError(CatgateError):
    """A constructed state leaks too much population into the top Fock levels"""


class DegenerateConditioningError(CatgateError):
    """The heralding event has (numerically) zero probability"""


class InfeasibleError(CatgateError):
    """A requested operating point does not exist"""


class ConfigError(CatgateError):
    """Run configuration failed schema validation"""


class DatasetFormatError(CatgateError):
    """Malformed quadrature dataset or matrix file"""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TruncationWarning(UserWarning):
    """Population in the two highest retained Fock levels exceeds tolerance"""


class QuadratureWarning(UserWarning):
    """Homodyne window integral did not converge at the requested order"""


class RegularizationWarning(UserWarning):
    """MaxLik hit the probability floor on a bin with nonzero counts"""
