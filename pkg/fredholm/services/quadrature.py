"""Gauss-Legendre rules on [0, 1]."""

import logging
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from fredholm.core.exceptions import DimensionError, EvaluationError, InvalidOrderError
from fredholm.models.grid import QuadratureRule

logger = logging.getLogger(__name__)

MAX_ORDER = 512
ROOT_TOL = 1e-15
MAX_NEWTON_STEPS = 100


def _legendre_with_derivative(n: int, z: np.ndarray):
    """P_n(z) and P_n'(z) by the three-term recurrence."""
    p_prev = np.ones_like(z)
    p = z.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * z * p - (k - 1) * p_prev) / k
    dp = n * (z * p - p_prev) / (z * z - 1.0)
    return p, dp


def _legendre_roots(n: int):
    """Non-negative roots of P_n (descending) and their weights on [-1, 1]."""
    half = (n + 1) // 2
    i = np.arange(1, half + 1)
    # Chebyshev-like asymptotic estimate of the i-th root
    z = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(MAX_NEWTON_STEPS):
        p, dp = _legendre_with_derivative(n, z)
        step = p / dp
        z = z - step
        if np.max(np.abs(step)) <= ROOT_TOL:
            break
    else:
        logger.warning(f"Legendre root iteration for n={n} stopped after {MAX_NEWTON_STEPS} steps")
    if n % 2 == 1:
        z[-1] = 0.0
    _, dp = _legendre_with_derivative(n, z)
    w = 2.0 / ((1.0 - z * z) * dp * dp)
    return z, w


@lru_cache(maxsize=None)
def _build_rule(n: int) -> QuadratureRule:
    z, w = _legendre_roots(n)
    # mirror the positive half; the middle root of an odd rule appears once
    mirrored = slice(1, None) if n % 2 == 1 else slice(None)
    ref_nodes = np.concatenate([-z, z[::-1][mirrored]])
    ref_weights = np.concatenate([w, w[::-1][mirrored]])
    logger.debug(f"Built {n}-point Gauss-Legendre rule")
    return QuadratureRule(nodes=0.5 + 0.5 * ref_nodes, weights=0.5 * ref_weights)


def gauss_legendre(n: int) -> QuadratureRule:
    """The n-point Gauss-Legendre rule mapped to [0, 1].

    Exact for polynomials of degree up to 2n - 1. Rules are cached, so repeated
    calls return the same immutable object.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise InvalidOrderError(f"Quadrature order must be an integer, got {n!r}")
    if not 1 <= n <= MAX_ORDER:
        raise InvalidOrderError(f"Quadrature order must be in [1, {MAX_ORDER}], got {n}")
    return _build_rule(int(n))


def rule_cache_info():
    return _build_rule.cache_info()


def integrate(rule: QuadratureRule, values: Union[Sequence[float], np.ndarray]) -> float:
    """Weighted sum of nodal values."""
    values = np.asarray(values, dtype=float)
    if values.shape != (rule.order,):
        raise DimensionError(
            f"Expected {rule.order} values for the {rule.order}-point rule, got shape {values.shape}"
        )
    return float(np.dot(rule.weights, values))



def kernel_sum(rule: QuadratureRule, kernel, x: np.ndarray, h_values: np.ndarray,
               u_values: Optional[np.ndarray] = None) -> np.ndarray:
    """Sum_i w_i K(x, t_i, h_i) [u_i] for every point of ``x``.

    ``kernel`` is called once on the broadcast grid (x[:, None], t[None, :], h[None, :]).
    """
    points = np.atleast_1d(np.asarray(x, dtype=float))
    shape = (points.size, rule.order)
    with np.errstate(all="ignore"):
        values = np.broadcast_to(
            np.asarray(kernel(points[:, None], rule.nodes[None, :], np.asarray(h_values)[None, :]), dtype=float),
            shape,
        )
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))[0]
        raise EvaluationError(
            f"Kernel is not finite at x={points[bad[0]]!r}, t={rule.nodes[bad[1]]!r}"
        )
    if u_values is not None:
        values = values * np.asarray(u_values)[None, :]
    return values @ rule.weights
