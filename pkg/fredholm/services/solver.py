"""Newton-type and Picard iterations on the nodal system.

Newton-type:  u_{n+1}(t_i) = u_n(t_i) - F(u_n)(t_i) / T_{F,1}(u_n)(t_i)
Picard:       u_{n+1}(t_i) = f(t_i) + lam * sum_j w_j G(t_i, t_j, u_n(t_j))

All nodes are updated together from u_n.
"""

import logging
import time
from typing import Callable, List, Optional, Sequence

import numpy as np

from fredholm.core.exceptions import EvaluationError, PreconditionError, SmoothnessViolationError
from fredholm.models.grid import GridFunction, QuadratureRule
from fredholm.models.problem import ProblemSpec
from fredholm.models.schemas import (
    FailureInfo,
    FailureReason,
    SolutionSample,
    SolveReport,
    SolverConfig,
    SolverMethod,
)
from fredholm.services.operators import OperatorContext
from fredholm.services.quadrature import gauss_legendre

logger = logging.getLogger(__name__)

# residuals this small count as an exact solve when testing for growth
RESIDUAL_FLOOR = 1e-300


def initial_guess(rule: QuadratureRule, initial) -> GridFunction:
    if callable(initial):
        return GridFunction.from_callable(rule, initial)
    return GridFunction.constant(rule, float(initial))


def _sup(values: np.ndarray) -> float:
    return float(np.max(np.abs(values)))


def _run(spec: ProblemSpec, config: SolverConfig, method: SolverMethod,
         update: Callable[[OperatorContext, GridFunction, np.ndarray], np.ndarray]) -> SolveReport:
    started = time.perf_counter()
    rule = gauss_legendre(config.quad_order)
    ctx = OperatorContext(spec, rule, config.denom_guard)
    exact_nodes = None
    if spec.exact is not None:
        exact_nodes = np.broadcast_to(np.asarray(spec.exact(rule.nodes), dtype=float), rule.nodes.shape)

    u = initial_guess(rule, config.initial)
    residual = ctx.residual(u)
    residuals = [_sup(residual)]
    steps: List[float] = []
    errors: Optional[List[float]] = None if exact_nodes is None else [_sup(u.nodal_values - exact_nodes)]
    iterates: Optional[List[GridFunction]] = [u] if config.keep_iterates else None
    failure: Optional[FailureInfo] = None
    converged = residuals[0] <= config.tol_residual
    iterations = 0
    growth_limit = config.divergence_factor * max(residuals[0], RESIDUAL_FLOOR)

    logger.info(f"Solving {spec.name} with {method.value}: n={rule.order}, |F(u_0)|={residuals[0]:.3e}")

    while not converged and iterations < config.max_iter:
        iteration = iterations + 1
        try:
            next_values = update(ctx, u, residual)
            next_u = GridFunction(rule, next_values)
            next_residual = ctx.residual(next_u)
        except SmoothnessViolationError as e:
            logger.warning(f"{spec.name}: {e}")
            failure = FailureInfo(
                reason=FailureReason.SMOOTHNESS_VIOLATION,
                detail=str(e),
                iteration=iteration,
                x=e.x,
                denominator=e.denominator,
            )
            break
        except EvaluationError as e:
            logger.warning(f"{spec.name}: iterate became non-finite at iteration {iteration}: {e}")
            failure = FailureInfo(reason=FailureReason.DIVERGENCE, detail=str(e), iteration=iteration)
            break

        step = _sup(next_u.nodal_values - u.nodal_values)
        u, residual = next_u, next_residual
        iterations = iteration
        residuals.append(_sup(residual))
        steps.append(step)
        if errors is not None:
            errors.append(_sup(u.nodal_values - exact_nodes))
        if iterates is not None:
            iterates.append(u)
        logger.debug(f"{spec.name} iteration {iteration}: |F|={residuals[-1]:.3e} step={step:.3e}")

        if residuals[-1] > growth_limit:
            failure = FailureInfo(
                reason=FailureReason.DIVERGENCE,
                detail=(f"residual {residuals[-1]:.3e} exceeds {config.divergence_factor:g} "
                        f"times the initial residual {residuals[0]:.3e}"),
                iteration=iteration,
            )
            logger.warning(f"{spec.name}: {failure.detail}")
            break
        converged = residuals[-1] <= config.tol_residual or step <= config.tol_step

    if not converged and failure is None:
        failure = FailureInfo(
            reason=FailureReason.MAX_ITER,
            detail=f"no convergence after {config.max_iter} iterations (|F|={residuals[-1]:.3e})",
            iteration=iterations,
        )
        logger.warning(f"{spec.name}: {failure.detail}")

    elapsed = time.perf_counter() - started
    if converged:
        logger.info(f"{spec.name} converged in {iterations} iterations, |F|={residuals[-1]:.3e}")

    return SolveReport(
        problem=spec.name,
        method=method,
        config=config,
        converged=converged,
        iterations=iterations,
        residual_history=residuals,
        step_history=steps,
        error_history=errors,
        final=u,
        iterate_history=iterates,
        failure=failure,
        approximate_derivative=spec.approximate_derivative,
        wall_clock_seconds=elapsed,
    )


def _newton_update(ctx: OperatorContext, u: GridFunction, residual: np.ndarray) -> np.ndarray:
    return ctx.newton_update(u, residual)


def _picard_update(ctx: OperatorContext, u: GridFunction, residual: np.ndarray) -> np.ndarray:
    return ctx.picard_update(u)


def solve(spec: ProblemSpec, config: Optional[SolverConfig] = None) -> SolveReport:
    """Run the iteration selected by ``config.method`` (Newton-type by default)."""
    config = config or SolverConfig()
    if config.method == SolverMethod.PICARD:
        return solve_picard(spec, config)
    return _run(spec, config, SolverMethod.NEWTON_TYPE, _newton_update)


def solve_picard(spec: ProblemSpec, config: Optional[SolverConfig] = None) -> SolveReport:
    """Classical successive approximation, the baseline for the Newton-type method."""
    config = config or SolverConfig(method=SolverMethod.PICARD)
    if config.method != SolverMethod.PICARD:
        config = config.model_copy(update={"method": SolverMethod.PICARD})
    return _run(spec, config, SolverMethod.PICARD, _picard_update)


def _samples(spec: ProblemSpec, g: GridFunction, xs: Sequence[float]) -> List[SolutionSample]:
    points = np.asarray(list(xs), dtype=float)
    if points.size == 0:
        return []
    ctx = OperatorContext(spec, g.rule)
    values = np.atleast_1d(ctx.nystrom_eval(g, points))
    exact = None
    if spec.exact is not None:
        exact = np.broadcast_to(np.asarray(spec.exact(points), dtype=float), points.shape)
    samples = []
    for k, x in enumerate(points):
        if exact is None:
            samples.append(SolutionSample(x=float(x), value=float(values[k])))
        else:
            samples.append(SolutionSample(
                x=float(x),
                value=float(values[k]),
                exact=float(exact[k]),
                abs_err=float(abs(values[k] - exact[k])),
            ))
    return samples


def evaluate_solution(report: SolveReport, spec: ProblemSpec, xs: Sequence[float]) -> List[SolutionSample]:
    """Off-node values of the final iterate through the Nystrom extension."""
    return _samples(spec, report.final, xs)


def evaluate_iterate(report: SolveReport, spec: ProblemSpec, n: int, xs: Sequence[float]) -> List[SolutionSample]:
    """Off-node values of u_n, for plotting an intermediate iterate against the exact solution."""
    if report.iterate_history is None:
        raise PreconditionError("iterates were not kept; solve with keep_iterates=True")
    if not 0 <= n <= report.iterations:
        raise PreconditionError(f"iterate {n} is out of range, the run stopped after {report.iterations} iterations")
    return _samples(spec, report.iterate_history[n], xs)
