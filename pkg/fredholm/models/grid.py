"""Discretization value types: quadrature rules and functions sampled on them."""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, Optional, Union

import numpy as np
from numpy.polynomial import Legendre

from fredholm.core.exceptions import DimensionError, EvaluationError

ArrayLike = Union[float, np.ndarray]
ScalarFunction = Callable[[np.ndarray], ArrayLike]

# two points closer than this are the same node
NODE_MATCH_TOL = 1e-14


def _frozen_array(values: Any) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights of a quadrature rule on [0, 1]."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        nodes = _frozen_array(self.nodes)
        weights = _frozen_array(self.weights)
        if nodes.ndim != 1 or nodes.size == 0:
            raise DimensionError("Quadrature nodes must be a non-empty 1-D array")
        if weights.shape != nodes.shape:
            raise DimensionError(
                f"Got {weights.size} weights for {nodes.size} nodes"
            )
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("Quadrature nodes must be strictly increasing")
        if nodes[0] <= 0.0 or nodes[-1] >= 1.0:
            raise ValueError("Quadrature nodes must lie in the open interval (0, 1)")
        if np.any(weights <= 0):
            raise ValueError("Quadrature weights must be positive")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def order(self) -> int:
        return int(self.nodes.size)

    def node_index(self, x: ArrayLike) -> np.ndarray:
        """Index of the node each point coincides with, or -1 when off-node."""
        points = np.atleast_1d(np.asarray(x, dtype=float))
        right = np.clip(np.searchsorted(self.nodes, points), 0, self.order - 1)
        left = np.clip(right - 1, 0, self.order - 1)
        nearest = np.where(
            np.abs(self.nodes[left] - points) <= np.abs(self.nodes[right] - points),
            left,
            right,
        )
        hit = np.abs(self.nodes[nearest] - points) <= NODE_MATCH_TOL
        return np.where(hit, nearest, -1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "order": self.order,
            "nodes": self.nodes.tolist(),
            "weights": self.weights.tolist(),
        }


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A function on [0, 1] represented by its values at the nodes of a rule.

    ``source`` is the callable the values were sampled from, when known; it
    gives exact off-node values. Without it, off-node values come from the
    degree ``order - 1`` Legendre interpolant of the nodal values.
    """

    rule: QuadratureRule
    nodal_values: np.ndarray
    source: Optional[ScalarFunction] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        values = np.array(self.nodal_values, dtype=float)
        if values.ndim != 1 or values.size != self.rule.order:
            raise DimensionError(
                f"Expected {self.rule.order} nodal values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise EvaluationError("Grid function values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "nodal_values", values)

    @classmethod
    def from_callable(cls, rule: QuadratureRule, func: ScalarFunction,
                      keep_source: bool = True) -> "GridFunction":
        with np.errstate(all="ignore"):
            values = np.broadcast_to(np.asarray(func(rule.nodes), dtype=float), rule.nodes.shape)
        return cls(rule, values, func if keep_source else None)

    @classmethod
    def constant(cls, rule: QuadratureRule, value: float) -> "GridFunction":
        value = float(value)
        return cls(rule, np.full(rule.order, value), lambda x: np.full(np.shape(x), value))

    @property
    def order(self) -> int:
        return self.rule.order

    @cached_property
    def interpolant(self) -> Legendre:
        # n points and degree n - 1: the least-squares fit interpolates
        return Legendre.fit(self.rule.nodes, self.nodal_values, deg=self.order - 1, domain=[0.0, 1.0])

    def values_at(self, x: ArrayLike) -> np.ndarray:
        """Values at arbitrary points of [0, 1]; nodal values are returned exactly."""
        points = np.atleast_1d(np.asarray(x, dtype=float))
        index = self.rule.node_index(points)
        on_node = index >= 0
        out = np.empty(points.shape, dtype=float)
        out[on_node] = self.nodal_values[index[on_node]]
        if not np.all(on_node):
            off = points[~on_node]
            if self.source is not None:
                off_values = np.broadcast_to(np.asarray(self.source(off), dtype=float), off.shape)
            else:
                off_values = self.interpolant(off)
            out[~on_node] = off_values
        return out

    def shifted(self, delta: ArrayLike) -> "GridFunction":
        """Return ``self + delta``; a scalar shift keeps the source callable."""
        if np.ndim(delta) == 0 and self.source is not None:
            source, shift = self.source, float(delta)
            return GridFunction(self.rule, self.nodal_values + shift, lambda x: source(x) + shift)
        return GridFunction(self.rule, self.nodal_values + np.asarray(delta, dtype=float))

    def sup_distance(self, other: "GridFunction") -> float:
        if other.order != self.order:
            raise DimensionError("Grid functions live on different rules")
        return float(np.max(np.abs(self.nodal_values - other.nodal_values)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nodes": self.rule.nodes.tolist(),
            "values": self.nodal_values.tolist(),
        }
