"""Discretized operators F, T_{F,u} and H_u of the Newton-type method.

For a problem h = f + lam * int G(x, t, h(t)) dt on a quadrature rule:

    F(h)(x)       = h(x) - f(x) - lam * sum_i w_i G(x, t_i, h_i)
    T_{F,u}(h)(x) = u(x) - lam * sum_i w_i dG/dh(x, t_i, h_i) u_i
    H_u(h)(x)     = h(x) - F(h)(x) / T_{F,u}(h)(x)

Every method accepts a scalar or a 1-D array of points and returns a float or
an array accordingly.
"""

import logging
from functools import cached_property
from typing import Optional, Union

import numpy as np

from fredholm.core.exceptions import (
    DimensionError,
    DomainError,
    EvaluationError,
    PreconditionError,
    SmoothnessViolationError,
)
from fredholm.models.grid import GridFunction, QuadratureRule
from fredholm.models.problem import ProblemSpec
from fredholm.services.quadrature import kernel_sum

logger = logging.getLogger(__name__)

DEFAULT_DENOM_GUARD = 1e-10
DEFAULT_FD_STEP = 1e-6

Points = Union[float, np.ndarray]


class OperatorContext:
    """A problem paired with the rule that discretizes its integral."""

    def __init__(self, spec: ProblemSpec, rule: QuadratureRule,
                 denom_guard: float = DEFAULT_DENOM_GUARD):
        if not denom_guard > 0:
            raise PreconditionError(f"denom_guard must be positive, got {denom_guard!r}")
        self.spec = spec
        self.rule = rule
        self.denom_guard = float(denom_guard)

    # helpers

    def _points(self, x: Points) -> np.ndarray:
        points = np.atleast_1d(np.asarray(x, dtype=float))
        if points.ndim != 1:
            raise DomainError("Evaluation points must be a scalar or a 1-D array")
        outside = ~np.isfinite(points) | (points < 0.0) | (points > 1.0)
        if np.any(outside):
            raise DomainError(f"x={points[outside][0]!r} is outside [0, 1]")
        return points

    @staticmethod
    def _shaped(values: np.ndarray, x: Points):
        return float(values[0]) if np.ndim(x) == 0 else values

    def _check_grid(self, g: GridFunction) -> None:
        if g.rule is not self.rule and (
            g.order != self.rule.order or not np.array_equal(g.rule.nodes, self.rule.nodes)
        ):
            raise DimensionError("Grid function is defined on a different quadrature rule")

    def _forcing(self, points: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            values = np.broadcast_to(np.asarray(self.spec.forcing(points), dtype=float), points.shape)
        if not np.all(np.isfinite(values)):
            raise EvaluationError(f"Forcing term of {self.spec.name} is not finite")
        return values

    @cached_property
    def forcing_at_nodes(self) -> np.ndarray:
        values = np.array(self._forcing(self.rule.nodes))
        values.setflags(write=False)
        return values

    @cached_property
    def unit(self) -> GridFunction:
        return GridFunction.constant(self.rule, 1.0)

    def _integral(self, h: GridFunction, points: np.ndarray) -> np.ndarray:
        return kernel_sum(self.rule, self.spec.kernel, points, h.nodal_values)

    def _solution_values(self, h: GridFunction, points: np.ndarray) -> np.ndarray:
        # a sampled callable is its own off-node extension
        if h.source is not None:
            return h.values_at(points)
        return self._nystrom(h, points)

    def _nystrom(self, h: GridFunction, points: np.ndarray) -> np.ndarray:
        index = self.rule.node_index(points)
        on_node = index >= 0
        out = np.empty(points.shape, dtype=float)
        out[on_node] = h.nodal_values[index[on_node]]
        if not np.all(on_node):
            off = points[~on_node]
            out[~on_node] = self._forcing(off) + self.spec.lam * self._integral(h, off)
        return out

    def _guard(self, denominator: np.ndarray, points: np.ndarray) -> None:
        small = np.abs(denominator) < self.denom_guard
        if np.any(small):
            k = int(np.argmax(small))
            raise SmoothnessViolationError(points[k], denominator[k], self.denom_guard)

    # operators

    def nystrom_eval(self, h: GridFunction, x: Points):
        """h at x: the nodal value on a node, f(x) + lam * sum_i w_i G(x, t_i, h_i) elsewhere."""
        self._check_grid(h)
        points = self._points(x)
        return self._shaped(self._nystrom(h, points), x)

    def eval_F(self, h: GridFunction, x: Points):
        """F(h) at x.

        Off the nodes h(x) comes from ``h.source`` when h was sampled from a
        callable, and from the Nystrom extension otherwise. For a nodal-only h
        this makes F vanish off the nodes, so only nodal residuals carry
        information there. eval_H reads h(x) the same way.
        """
        self._check_grid(h)
        points = self._points(x)
        values = self._solution_values(h, points) - self._forcing(points) - self.spec.lam * self._integral(h, points)
        return self._shaped(values, x)

    def eval_T(self, h: GridFunction, u: GridFunction, x: Points):
        self._check_grid(h)
        self._check_grid(u)
        points = self._points(x)
        derivative = kernel_sum(self.rule, self.spec.kernel_dh, points, h.nodal_values, u.nodal_values)
        return self._shaped(u.values_at(points) - self.spec.lam * derivative, x)

    def eval_H(self, h: GridFunction, u: GridFunction, x: Points):
        self._check_grid(h)
        points = self._points(x)
        residual = np.atleast_1d(self.eval_F(h, points))
        denominator = np.atleast_1d(self.eval_T(h, u, points))
        self._guard(denominator, points)
        return self._shaped(self._solution_values(h, points) - residual / denominator, x)

    def eval_T_H(self, h: GridFunction, u: GridFunction, x: Points, eps: float = DEFAULT_FD_STEP):
        """Forward-difference directional derivative of H_1 at h in direction u."""
        points = self._points(x)
        moved = perturb(h, u, eps)
        base = np.atleast_1d(self.eval_H(h, self.unit, points))
        ahead = np.atleast_1d(self.eval_H(moved, self.unit, points))
        return self._shaped((ahead - base) / eps, x)

    def closed_form_T_H(self, p: GridFunction, u: GridFunction, x: Points):
        """Closed form u(x) - T_{F,u}(p)(x) / T_{F,1}(p)(x) of T_{H_1,u} at a solution p."""
        points = self._points(x)
        denominator = np.atleast_1d(self.eval_T(p, self.unit, points))
        self._guard(denominator, points)
        values = u.values_at(points) - np.atleast_1d(self.eval_T(p, u, points)) / denominator
        return self._shaped(values, x)

    # nodal fast paths used by the iterations

    def residual(self, h: GridFunction) -> np.ndarray:
        """F(h) at every node."""
        self._check_grid(h)
        return h.nodal_values - self.forcing_at_nodes - self.spec.lam * self._integral(h, self.rule.nodes)

    def newton_denominator(self, h: GridFunction) -> np.ndarray:
        """T_{F,1}(h) at every node."""
        self._check_grid(h)
        derivative = kernel_sum(self.rule, self.spec.kernel_dh, self.rule.nodes, h.nodal_values)
        return 1.0 - self.spec.lam * derivative

    def newton_update(self, h: GridFunction, residual: Optional[np.ndarray] = None) -> np.ndarray:
        """H_1(h) at every node; raises SmoothnessViolationError on a vanishing denominator."""
        if residual is None:
            residual = self.residual(h)
        denominator = self.newton_denominator(h)
        self._guard(denominator, self.rule.nodes)
        return h.nodal_values - residual / denominator

    def picard_update(self, h: GridFunction) -> np.ndarray:
        """f + lam * sum_i w_i G(., t_i, h_i) at every node."""
        self._check_grid(h)
        return self.forcing_at_nodes + self.spec.lam * self._integral(h, self.rule.nodes)


def perturb(h: GridFunction, u: GridFunction, eps: float) -> GridFunction:
    """h + eps * u, keeping an exact source when both operands have one."""
    values = h.nodal_values + eps * u.nodal_values
    if h.source is not None and u.source is not None:
        h_source, u_source = h.source, u.source
        return GridFunction(h.rule, values, lambda x: h_source(x) + eps * u_source(x))
    return GridFunction(h.rule, values)
