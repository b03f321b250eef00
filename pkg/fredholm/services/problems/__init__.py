from typing import Optional

from fredholm.models.grid import QuadratureRule
from fredholm.models.problem import ProblemSpec
from .base import ProblemRegistry
from .manufactured import manufactured, mms_linear, mms_sine_square, mms_singular, mms_zero_lambda
from .worked import worked_example_1, worked_example_2
from .verification import check_kernel_derivative, finite_difference_dh, verify_exact


def default_registry() -> ProblemRegistry:
    registry = ProblemRegistry()
    registry.register("paper-ex1", worked_example_1, worked_example_1().summary())
    registry.register("paper-ex2", worked_example_2, worked_example_2().summary())
    registry.register("mms-linear", mms_linear, "lambda=+1, exact u(x)=x; G(x,t,h)=x*h, T_{F,1}=1-x so the Newton-type run diverges, manufactured")
    registry.register("mms-sine-square", mms_sine_square, "lambda=+0.333333, exact u(x)=sin(x); G(x,t,h)=h^2, manufactured")
    registry.register("mms-zero-lambda", mms_zero_lambda, "lambda=+0, exact u(x)=cos(x); no integral term, manufactured")
    registry.register("mms-singular", mms_singular, "lambda=+1, exact u(x)=x; G(x,t,h)=h, T_{F,1} vanishes, manufactured")
    return registry


registry = default_registry()


def builtin(name: str, rule: Optional[QuadratureRule] = None) -> ProblemSpec:
    """Build a registered problem; manufactured problems use ``rule`` (32 nodes by default)."""
    return registry.create(name, rule)


__all__ = [
    'ProblemRegistry', 'registry', 'default_registry', 'builtin', 'manufactured',
    'verify_exact', 'check_kernel_derivative', 'finite_difference_dh',
]
