"""Store all the exceptions related to weylscope that might
arise while building measures, solving or sweeping.
"""


class WeylscopeError(Exception):
    """Base class for every weylscope error."""


class MeasureDomainError(WeylscopeError):
    """Exception for points or intervals outside the domain of a measure.

    Raised whenever an operation is asked about a point that is not in
    [0, b) or an interval that leaves it.
    """
    def __init__(self, value, domain_end) -> None:
        super().__init__()

        self.value = value
        self.domain_end = domain_end
        self.__message = self.__build_message(value, domain_end)

    def __build_message(self, value, domain_end) -> str:
        """Build the error message."""
        return "`{}` is outside the measure domain [0, {})".format(
            value, domain_end
        )

    def __str__(self) -> str:
        return self.__message


class MeasureFormatError(WeylscopeError):
    """Exception for malformed measure description files.

    The line is 1-based and points at the offending entry so that the
    user can fix the file directly.
    """
    def __init__(self, path, line, error) -> None:
        super().__init__()

        self.path = path
        self.line = line
        self.__message = self.__build_message(path, line, error)

    def __build_message(self, path, line, error) -> str:
        """Build the error message"""
        return "{}:{}: {}".format(path, line, error)

    def __str__(self) -> str:
        return self.__message


class EvaluationError(WeylscopeError):
    """Exception for non-finite integrand values."""
    def __init__(self, where) -> None:
        super().__init__()

        self.__message = self.__build_message(where)

    def __build_message(self, where) -> str:
        """Build the error message"""
        return "Integrand is not finite on {}".format(where)

    def __str__(self) -> str:
        return self.__message


class ArgumentError(WeylscopeError):
    """Exception for numeric arguments that make no sense,
    like a non-positive tolerance.
    """
    def __init__(self, name, value, expected) -> None:
        super().__init__()

        self.__message = self.__build_message(name, value, expected)

    def __build_message(self, name, value, expected) -> str:
        """Build the error message"""
        return "Invalid {} `{}`: expected {}".format(name, value, expected)

    def __str__(self) -> str:
        return self.__message


class IterationLimitError(WeylscopeError):
    """Exception for a Picard iteration that did not converge.

    The last residual is kept so that the caller can decide whether
    the result is usable anyway.
    """
    def __init__(self, iterations, residual, where) -> None:
        super().__init__()

        self.iterations = iterations
        self.residual = residual
        self.__message = self.__build_message(iterations, residual, where)

    def __build_message(self, iterations, residual, where) -> str:
        """Build the error message"""
        return "No convergence after {} iterations on {} (last residual {:.3e})".format(
            iterations, where, residual
        )

    def __str__(self) -> str:
        return self.__message


class UnsupportedMeasureError(WeylscopeError):
    """Exception for measures an oracle cannot handle, which
    is any measure with a density part.
    """
    def __init__(self, operation) -> None:
        super().__init__()

        self.__message = self.__build_message(operation)

    def __build_message(self, operation) -> str:
        """Build the error message"""
        return "{} supports purely atomic measures only".format(operation)

    def __str__(self) -> str:
        return self.__message


class DegenerateDiskError(WeylscopeError):
    """Exception for a Weyl disk that does not exist.

    This only happens when W(s, s*) vanishes, i.e. for real z.
    """
    def __init__(self, z, x0) -> None:
        super().__init__()

        self.__message = self.__build_message(z, x0)

    def __build_message(self, z, x0) -> str:
        """Build the error message"""
        return "Weyl disk is degenerate at z={} x0={}".format(z, x0)

    def __str__(self) -> str:
        return self.__message


class PoleError(WeylscopeError):
    """Exception for u(z, 0) = 0 while backward propagating.

    This cannot happen in the upper half plane, so seeing it
    means something upstream is broken.
    """
    def __init__(self, z) -> None:
        super().__init__()

        self.__message = self.__build_message(z)

    def __build_message(self, z) -> str:
        """Build the error message"""
        return "m has a pole at z={}".format(z)

    def __str__(self) -> str:
        return self.__message


class GridPointError(WeylscopeError):
    """Exception for a truncation point that is not on the solver grid."""
    def __init__(self, x0) -> None:
        super().__init__()

        self.__message = self.__build_message(x0)

    def __build_message(self, x0) -> str:
        """Build the error message"""
        return "x0={} is not a grid point; pass it as a checkpoint".format(x0)

    def __str__(self) -> str:
        return self.__message
