"""Error types raised by the fredholm package."""

from typing import Iterable, Optional


class FredholmError(Exception):
    """Base class for every error raised by this package"""


class InvalidOrderError(FredholmError, ValueError):
    """Quadrature order outside the supported range"""


class DimensionError(FredholmError, ValueError):
    """Array length does not match the quadrature rule"""


class DomainError(FredholmError, ValueError):
    """Evaluation point outside [0, 1]"""


class EvaluationError(FredholmError, ArithmeticError):
    """A kernel, forcing term or grid value produced NaN or infinity"""


class SmoothnessViolationError(FredholmError, ArithmeticError):
    """The Newton denominator T_{F,u}(h)(x) fell below the guard"""

    def __init__(self, x: float, denominator: float, guard: float):
        self.x = float(x)
        self.denominator = float(denominator)
        self.guard = float(guard)
        super().__init__(
            f"F is not smooth at x={self.x!r}: |T(h)(x)|={abs(self.denominator):.3e} "
            f"is below the guard {self.guard:.1e}"
        )


class ProblemNotFoundError(FredholmError, KeyError):
    """Unknown problem name"""

    def __init__(self, name: str, available: Iterable[str]):
        self.name = name
        self.available = sorted(available)
        super().__init__(name)

    def __str__(self) -> str:
        return (f"Unknown problem: {self.name}. "
                f"Available problems are: {', '.join(self.available)}")


class ConstructionError(FredholmError, ValueError):
    """A problem could not be built from the supplied functions"""


class MissingExactError(FredholmError, ValueError):
    """The problem has no exact solution attached"""


class PreconditionError(FredholmError, ValueError):
    """Inputs do not satisfy the operation's precondition"""


class InsufficientDataError(FredholmError, ValueError):
    """Not enough history to fit a convergence rate"""


class ConfigError(FredholmError, ValueError):
    """Run configuration could not be parsed or validated"""

    def __init__(self, message: str, source: Optional[str] = None):
        self.source = source
        super().__init__(f"{source}: {message}" if source else message)
