"""Problems whose forcing term is built from a chosen solution."""

import logging
from typing import Optional

import numpy as np

from fredholm.core.exceptions import ConstructionError, EvaluationError
from fredholm.models.grid import QuadratureRule
from fredholm.models.problem import ArrayFunction, KernelFunction, ProblemSpec
from fredholm.services.problems.verification import finite_difference_dh
from fredholm.services.quadrature import gauss_legendre, kernel_sum

logger = logging.getLogger(__name__)

MIN_ORDER = 16
DEFAULT_ORDER = 32


def manufactured(p: ArrayFunction, kernel: KernelFunction, kernel_dh: Optional[KernelFunction],
                 lam: float, rule: QuadratureRule, name: str = "manufactured",
                 description: str = "", exact_formula: Optional[str] = None) -> ProblemSpec:
    """Build a problem with exact solution p on the given rule.

    The forcing term is f(x) = p(x) - lam * sum_i w_i G(x, t_i, p(t_i)), so p
    solves the discretized equation exactly. When ``kernel_dh`` is None a
    central finite difference is used and the spec is flagged as approximate.
    """
    if rule.order < MIN_ORDER:
        raise ConstructionError(f"Manufactured problems need at least {MIN_ORDER} nodes, got {rule.order}")

    approximate = kernel_dh is None
    if approximate:
        logger.warning(f"No analytic dG/dh for {name}; using a finite difference")
        kernel_dh = finite_difference_dh(kernel)

    with np.errstate(all="ignore"):
        p_nodes = np.broadcast_to(np.asarray(p(rule.nodes), dtype=float), rule.nodes.shape).copy()
    if not np.all(np.isfinite(p_nodes)):
        raise ConstructionError(f"Exact solution of {name} is not finite at the nodes")
    try:
        kernel_sum(rule, kernel, rule.nodes, p_nodes)
        kernel_sum(rule, kernel_dh, rule.nodes, p_nodes)
    except EvaluationError as e:
        raise ConstructionError(f"Cannot build {name}: {e}") from e
    p_nodes.setflags(write=False)
    lam = float(lam)

    def forcing(x):
        points = np.atleast_1d(np.asarray(x, dtype=float))
        values = np.broadcast_to(np.asarray(p(points), dtype=float), points.shape)
        values = values - lam * kernel_sum(rule, kernel, points, p_nodes)
        return float(values[0]) if np.ndim(x) == 0 else values

    return ProblemSpec(
        name=name,
        lam=lam,
        forcing=forcing,
        kernel=kernel,
        kernel_dh=kernel_dh,
        exact=p,
        description=description or f"manufactured on the {rule.order}-point rule",
        exact_formula=exact_formula,
        approximate_derivative=approximate,
    )


def _default_rule(rule: Optional[QuadratureRule]) -> QuadratureRule:
    return rule if rule is not None else gauss_legendre(DEFAULT_ORDER)


def mms_linear(rule=None) -> ProblemSpec:
    return manufactured(
        p=lambda x: x,
        kernel=lambda x, t, h: x * h,
        kernel_dh=lambda x, t, h: x + 0.0 * h,
        lam=1.0,
        rule=_default_rule(rule),
        name="mms-linear",
        exact_formula="x",
        description="G(x,t,h)=x*h, f baked from the rule",
    )


def mms_sine_square(rule=None) -> ProblemSpec:
    return manufactured(
        p=np.sin,
        kernel=lambda x, t, h: h ** 2 + 0.0 * x,
        kernel_dh=lambda x, t, h: 2.0 * h + 0.0 * x,
        lam=1.0 / 3.0,
        rule=_default_rule(rule),
        name="mms-sine-square",
        exact_formula="sin(x)",
        description="G(x,t,h)=h^2, f baked from the rule",
    )


def mms_zero_lambda(rule=None) -> ProblemSpec:
    return manufactured(
        p=np.cos,
        kernel=lambda x, t, h: h + 0.0 * x,
        kernel_dh=lambda x, t, h: np.ones(np.broadcast(x, h).shape),
        lam=0.0,
        rule=_default_rule(rule),
        name="mms-zero-lambda",
        exact_formula="cos(x)",
        description="no integral term: u = f",
    )


def mms_singular(rule=None) -> ProblemSpec:
    return manufactured(
        p=lambda x: x,
        kernel=lambda x, t, h: h + 0.0 * x,
        kernel_dh=lambda x, t, h: np.ones(np.broadcast(x, h).shape),
        lam=1.0,
        rule=_default_rule(rule),
        name="mms-singular",
        exact_formula="x",
        description="G(x,t,h)=h with lambda=1: T_{F,1} vanishes, the Newton-type step is undefined",
    )
