"""Exception types raised by the hardylab package."""


class HardyLabError(Exception):
    """Base class for all hardylab errors."""


class ParameterBelowCritical(HardyLabError, ValueError):
    """Coefficient of the inverse-square potential below -N^2/4."""


class EvalAtSingularity(HardyLabError, ValueError):
    """A singular kernel was evaluated at (or too close to) the origin."""


class LogBranchOutOfRange(HardyLabError, ValueError):
    """Critical-coefficient log branch evaluated at |x| >= 1 where it changes sign."""


class RecipeDivergent(HardyLabError, ValueError):
    """A barrier-parameter recipe produced a non-finite or uncertifiable value."""


class DegenerateRegion(HardyLabError, ValueError):
    """Quadrature region with outer radius <= inner cut."""


class NonFiniteIntegrand(HardyLabError, ValueError):
    """Integrand evaluated to NaN/inf on a quadrature cell."""

    def __init__(self, message: str, cell_index: int | None = None, center=None):
        super().__init__(message)
        self.cell_index = cell_index
        self.center = center


class NotPositiveDefinite(HardyLabError, ValueError):
    """Assembled operator failed its positive-definiteness certificate."""


class SolverDiverged(HardyLabError, RuntimeError):
    """Linear solve did not reach the requested relative residual."""


class MonotonicityViolated(HardyLabError, AssertionError):
    """A solution family violated its proven monotonicity order."""

    def __init__(self, message: str, node_index=None, violation: float = 0.0):
        super().__init__(message)
        self.node_index = node_index
        self.violation = violation


class DegenerateTestFunction(HardyLabError, ValueError):
    """Test function with vanishing normal derivative at the origin."""


class ZeroDenominator(HardyLabError, ZeroDivisionError):
    """Rayleigh quotient requested for an (almost) identically zero function."""


class CollarUnresolved(HardyLabError, ValueError):
    """Cutoff collar too thin for the grid spacing."""


class ConfigInvalid(HardyLabError, ValueError):
    """Scenario configuration failed validation."""
