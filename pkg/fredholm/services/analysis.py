"""Numerical checks of the contraction behaviour of H_1 near a solution.

Near a solution p of F(p) = 0 the update map H_1(h) = h - F(h) / T_{F,1}(h)
has zero derivative in the direction 1 and is expected to be a contraction
with constant 1/2 on a small ball. These routines sample that ball.
"""

import logging
from typing import Sequence, Union

import numpy as np

from fredholm.core.exceptions import InsufficientDataError, PreconditionError, SmoothnessViolationError
from fredholm.models.grid import GridFunction
from fredholm.models.problem import ProblemSpec
from fredholm.models.schemas import ContractionReport, RateFit, SolveReport
from fredholm.services.operators import DEFAULT_DENOM_GUARD, OperatorContext, perturb

logger = logging.getLogger(__name__)

HALF_BOUND = 0.5
DEFAULT_SLACK = 0.05
DIRECTIONAL_EPS = 1e-6
COARSE_EPS = 1e-5
MAX_CENTER_RESIDUAL = 1e-8
MIN_SAMPLES = 10
ERROR_FLOOR = 1e-13

NODAL_NOISE_NOTE = (
    "perturbations are independent uniform nodal noise, not smooth functions; "
    "this covers a larger set than continuous perturbations of the same size"
)


def estimate_contraction(spec: ProblemSpec, solution: GridFunction, radius: float = 0.1,
                         samples: int = 50, seed: int = 0, slack: float = DEFAULT_SLACK,
                         direction_radius: float = 0.1,
                         denom_guard: float = DEFAULT_DENOM_GUARD) -> ContractionReport:
    """Sample B_radius(solution) and measure how strongly H_1 contracts there.

    The same seed always yields the same unit noise; the radius only scales it,
    so runs with different radii sample nested sets.
    """
    if not radius > 0:
        raise PreconditionError(f"radius must be positive, got {radius!r}")
    if samples < MIN_SAMPLES:
        raise PreconditionError(f"samples must be at least {MIN_SAMPLES}, got {samples}")

    rule = solution.rule
    ctx = OperatorContext(spec, rule, denom_guard)
    center = GridFunction(rule, solution.nodal_values)
    center_residual = float(np.max(np.abs(ctx.residual(center))))
    if center_residual > MAX_CENTER_RESIDUAL:
        raise PreconditionError(
            f"center is not a converged solution: sup |F| = {center_residual:.3e} > {MAX_CENTER_RESIDUAL:g}"
        )

    rng = np.random.default_rng(seed)
    noise = rng.uniform(-1.0, 1.0, (samples, rule.order))
    partner_noise = rng.uniform(-1.0, 1.0, (samples, rule.order))
    direction_noise = rng.uniform(-1.0, 1.0, (samples, rule.order))

    directional = np.zeros(samples)
    directional_coarse = np.zeros(samples)
    direction_ball = np.zeros(samples)
    lipschitz = np.zeros(samples)
    excluded = 0

    for k in range(samples):
        h = center.shifted(radius * noise[k])
        partner = center.shifted(radius * partner_noise[k])
        direction = GridFunction(rule, 1.0 + direction_radius * direction_noise[k])
        try:
            base = ctx.newton_update(h)
            fine = (ctx.newton_update(h.shifted(DIRECTIONAL_EPS)) - base) / DIRECTIONAL_EPS
            coarse = (ctx.newton_update(h.shifted(COARSE_EPS)) - base) / COARSE_EPS
            along = (ctx.newton_update(perturb(h, direction, DIRECTIONAL_EPS)) - base) / DIRECTIONAL_EPS
            image_gap = np.max(np.abs(base - ctx.newton_update(partner)))
        except SmoothnessViolationError as e:
            excluded += 1
            logger.debug(f"sample {k} excluded: {e}")
            continue
        directional[k] = np.max(np.abs(fine))
        directional_coarse[k] = np.max(np.abs(coarse))
        direction_ball[k] = np.max(np.abs(along))
        distance = h.sup_distance(partner)
        lipschitz[k] = image_gap / distance if distance > 0 else 0.0

    if excluded == samples:
        raise PreconditionError(
            f"all {samples} samples hit a vanishing denominator; H_1 is undefined around this center"
        )
    if excluded:
        logger.warning(f"{excluded} of {samples} samples excluded after smoothness violations")

    report = ContractionReport(
        center=center,
        radius=radius,
        samples=samples,
        seed=seed,
        epsilon=DIRECTIONAL_EPS,
        sup_directional=float(directional.max()),
        sup_directional_coarse=float(directional_coarse.max()),
        sup_direction_ball=float(direction_ball.max()),
        sup_lipschitz=float(lipschitz.max()),
        slack=slack,
        excluded_samples=excluded,
        note=NODAL_NOISE_NOTE,
    )
    logger.info(
        f"{spec.name}: radius={radius:g} sup|T_H|={report.sup_directional:.3e} "
        f"Lipschitz={report.sup_lipschitz:.4f} passed={report.passed_half_bound}"
    )
    return report


def fit_error_sequence(errors: Sequence[float], floor: float = ERROR_FLOOR) -> RateFit:
    """Fit successive ratios and the order of convergence of an error sequence.

    Only the leading run of errors above ``floor`` is used.
    """
    values = np.asarray(list(errors), dtype=float)
    below = np.flatnonzero(~(values > floor))
    usable = values[: below[0]] if below.size else values
    if usable.size < 3:
        raise InsufficientDataError(
            f"need at least 3 errors above {floor:g}, got {usable.size}"
        )
    ratios = usable[1:] / usable[:-1]
    order = np.polyfit(np.log(usable[:-1]), np.log(usable[1:]), 1)[0]
    return RateFit(
        ratios=ratios.tolist(),
        geometric_rate=float(np.median(ratios)),
        order_estimate=float(order),
    )


def fit_rate(report: Union[SolveReport, Sequence[float]]) -> RateFit:
    if isinstance(report, SolveReport):
        if report.error_history is None:
            raise InsufficientDataError(f"{report.problem} has no exact solution, so no error history")
        return fit_error_sequence(report.error_history)
    return fit_error_sequence(report)
