import numpy as np

from fredholm.core.exceptions import MissingExactError
from fredholm.models.grid import GridFunction, QuadratureRule
from fredholm.models.problem import KernelFunction, ProblemSpec
from fredholm.services.operators import OperatorContext

FD_STEP = 1e-6
CHECK_STEP = 1e-6
CHECK_RTOL = 1e-6
CHECK_ATOL = 1e-8


def finite_difference_dh(kernel: KernelFunction) -> KernelFunction:
    """Central difference of the kernel in h, step 1e-6 * max(1, |h|)."""
    def kernel_dh(x, t, h):
        step = FD_STEP * np.maximum(1.0, np.abs(h))
        return (kernel(x, t, h + step) - kernel(x, t, h - step)) / (2.0 * step)
    return kernel_dh


def check_kernel_derivative(spec: ProblemSpec, samples: int = 20, seed: int = 0) -> float:
    """Largest scaled gap between kernel_dh and a central difference of kernel.

    Samples (x, t, h) uniformly from [0, 1]^2 x [-2, 3]. Values up to 1 mean the
    analytic derivative agrees within 1e-6 relative plus 1e-8 absolute.
    """
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 1.0, samples)
    t = rng.uniform(0.0, 1.0, samples)
    h = rng.uniform(-2.0, 3.0, samples)
    shape = (samples,)
    plus = np.broadcast_to(spec.kernel(x, t, h + CHECK_STEP), shape)
    minus = np.broadcast_to(spec.kernel(x, t, h - CHECK_STEP), shape)
    central = (plus - minus) / (2.0 * CHECK_STEP)
    analytic = np.broadcast_to(spec.kernel_dh(x, t, h), shape)
    tolerance = CHECK_RTOL * np.abs(analytic) + CHECK_ATOL
    return float(np.max(np.abs(central - analytic) / tolerance))


def verify_exact(spec: ProblemSpec, rule: QuadratureRule) -> float:
    """sup over the nodes of |F(p)| for the attached exact solution p."""
    if spec.exact is None:
        raise MissingExactError(f"Problem {spec.name} has no exact solution")
    p = GridFunction.from_callable(rule, spec.exact)
    return float(np.max(np.abs(OperatorContext(spec, rule).residual(p))))
