"""Exception hierarchy shared by the numerical services, the CLI and the routes."""


class LabError(Exception):
    """Base class for every error raised on purpose by the lab."""


class ParameterWindowError(LabError, ValueError):
    """Argument outside the window where the computation is documented to work."""


class DimensionMismatchError(LabError, ValueError):
    """Arrays or label lists whose sizes do not agree."""


class LatticeRangeError(LabError, IndexError):
    """Lattice index negative or beyond the simulated particles."""


class QuadratureError(LabError, ArithmeticError):
    """Invalid quadrature bounds, non-finite entries or an unreached truncation bound."""


class SingularSystemError(LabError, ArithmeticError):
    """Linear system that could not be solved by pivoted LU."""


class NumericalConsistencyError(LabError, ArithmeticError):
    """A probability computed outside [-eps, 1 + eps]."""


class PoleError(LabError, ZeroDivisionError):
    """Denominator of a rational identity hit zero."""


class EmptySampleError(LabError, ValueError):
    """Statistic requested for an empty sample."""
