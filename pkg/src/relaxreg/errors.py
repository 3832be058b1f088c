"""Exception types shared across the package.

The CLI maps these onto exit codes, so solver and validation failures
stay distinguishable from plain I/O problems.
"""


class RelaxRegError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(RelaxRegError, ValueError):
    """Array shape incompatible with the graph or with a peer argument."""


class ParameterError(RelaxRegError, ValueError):
    """Invalid configuration value or out-of-range parameter."""


class DataError(RelaxRegError, ValueError):
    """Input data violates a contract (non-finite entries, etc.)."""


class DegenerateInputError(RelaxRegError, ValueError):
    """Numerically rank-deficient input where full rank is required."""


class ContractViolationError(RelaxRegError, ValueError):
    """Input violates a structural precondition (e.g. asymmetry)."""


class TopologyError(RelaxRegError, ValueError):
    """Graph structure unsupported by the requested solver."""


class ConvergenceError(RelaxRegError, RuntimeError):
    """An iterative subsolver exhausted its budget.

    Carries the best duality gap reached so callers can decide whether
    the iterate is still usable.
    """

    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap
