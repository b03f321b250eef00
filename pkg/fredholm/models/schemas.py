from pydantic import BaseModel, ConfigDict, Field, InstanceOf, computed_field, field_serializer, field_validator, model_validator
from typing import Any, Callable, Dict, List, Optional, Union
import enum
import math

from fredholm.core.config import get_settings
from fredholm.models.grid import GridFunction

class SolverMethod(str, enum.Enum):
    NEWTON_TYPE = "newton_type"
    PICARD = "picard"

class FailureReason(str, enum.Enum):
    MAX_ITER = "max-iter"
    SMOOTHNESS_VIOLATION = "smoothness-violation"
    DIVERGENCE = "divergence"

class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    quad_order: int = Field(32, ge=1, le=512, description="Number of Gauss-Legendre nodes")
    tol_residual: float = Field(1e-12, gt=0, description="Stop when sup-node |F(u_n)| is below this")
    tol_step: float = Field(1e-12, gt=0, description="Stop when sup-node |u_{n+1}-u_n| is below this")
    max_iter: int = Field(50, ge=1, description="Maximum number of iterations")
    initial: Union[float, Callable[..., Any]] = Field(1.0, description="Initial guess u_0: a constant or a function of x")
    denom_guard: float = Field(1e-10, gt=0, description="Smallest admissible |T_{F,1}(u_n)(x)|")
    method: SolverMethod = Field(SolverMethod.NEWTON_TYPE, description="Iteration to run")
    keep_iterates: bool = Field(False, description="Retain every iterate in the report")
    divergence_factor: float = Field(1e6, gt=1, description="Residual growth over u_0's that counts as divergence")

    @field_validator("initial")
    @classmethod
    def _finite_initial(cls, value):
        if not callable(value) and not math.isfinite(value):
            raise ValueError("initial guess must be finite")
        return value

    @field_serializer("initial")
    def _serialize_initial(self, value):
        if callable(value):
            return getattr(value, "__name__", repr(value))
        return value

class FailureInfo(BaseModel):
    reason: FailureReason = Field(..., description="Why the iteration stopped without converging")
    detail: str = Field(..., description="Human readable explanation")
    iteration: int = Field(..., description="Iteration during which the failure happened")
    x: Optional[float] = Field(None, description="Node where the denominator vanished")
    denominator: Optional[float] = Field(None, description="Offending value of T_{F,1}(u_n)(x)")

class SolveReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    problem: str = Field(..., description="Problem name")
    method: SolverMethod = Field(..., description="Iteration that produced the report")
    config: SolverConfig = Field(..., description="Settings actually used")
    converged: bool
    iterations: int = Field(..., ge=0)
    residual_history: List[float] = Field(..., description="sup-node |F(u_n)| for n = 0..iterations")
    step_history: List[float] = Field(default_factory=list, description="sup-node |u_{n+1}-u_n|")
    error_history: Optional[List[float]] = Field(None, description="sup-node |u_n - p| when p is known")
    final: InstanceOf[GridFunction]
    iterate_history: Optional[List[InstanceOf[GridFunction]]] = None
    failure: Optional[FailureInfo] = None
    approximate_derivative: bool = Field(False, description="dG/dh came from a finite difference")
    wall_clock_seconds: float = 0.0

    @model_validator(mode="after")
    def _check_lengths(self):
        if len(self.residual_history) != self.iterations + 1:
            raise ValueError("residual_history must hold one entry per iterate, u_0 included")
        if self.error_history is not None and len(self.error_history) != len(self.residual_history):
            raise ValueError("error_history must hold one entry per iterate")
        return self

    @field_serializer("final")
    def _serialize_final(self, value: GridFunction):
        return value.to_dict()

    @field_serializer("iterate_history")
    def _serialize_iterates(self, value: Optional[List[GridFunction]]):
        if value is None:
            return None
        return [g.nodal_values.tolist() for g in value]

class SolutionSample(BaseModel):
    x: float
    value: float
    exact: Optional[float] = None
    abs_err: Optional[float] = None

class RateFit(BaseModel):
    ratios: List[float] = Field(..., description="error[n+1]/error[n] while errors exceed the floor")
    geometric_rate: float = Field(..., description="Median of the ratios")
    order_estimate: float = Field(..., description="Slope of log error[n+1] against log error[n]")

class ContractionReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    center: InstanceOf[GridFunction]
    radius: float = Field(..., gt=0)
    samples: int = Field(..., ge=1)
    seed: int
    epsilon: float = Field(..., description="Forward-difference step for T_{H_1,1}")
    sup_directional: float = Field(..., ge=0, description="max |T_{H_1,1}(h)(x)| over samples and nodes")
    sup_directional_coarse: float = Field(..., ge=0, description="Same with a 10x larger step")
    sup_direction_ball: float = Field(..., ge=0, description="max |T_{H_1,u}(h)(x)| over sampled directions u near 1")
    sup_lipschitz: float = Field(..., ge=0, description="max sup|H_1(h1)-H_1(h2)| / sup|h1-h2| over sampled pairs")
    slack: float = Field(0.05, ge=0)
    excluded_samples: int = Field(0, ge=0, description="Samples dropped after a smoothness violation")
    note: str = ""

    @computed_field
    @property
    def passed_half_bound(self) -> bool:
        return self.sup_lipschitz <= 0.5 + self.slack

    @field_serializer("center")
    def _serialize_center(self, value: GridFunction):
        return value.to_dict()

class RunConfigFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    problem: str = Field(..., description="Registered problem name")
    method: SolverMethod = SolverMethod.NEWTON_TYPE
    quad_order: int = Field(default_factory=lambda: get_settings().DEFAULT_QUAD_ORDER, ge=1, le=512, validate_default=True)
    tol_residual: float = Field(1e-12, gt=0)
    tol_step: float = Field(1e-12, gt=0)
    max_iter: int = Field(default_factory=lambda: get_settings().DEFAULT_MAX_ITER, ge=1, validate_default=True)
    initial_constant: float = 1.0
    denom_guard: float = Field(1e-10, gt=0)
    keep_iterates: bool = False
    output_dir: Optional[str] = None
    plot_points: int = Field(101, ge=2)
    plot_iterate: Optional[int] = Field(None, ge=0, description="Also write iterate_<n>.csv for this iterate")

    @field_validator("initial_constant")
    @classmethod
    def _finite_initial(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("initial_constant must be finite")
        return value

    def to_solver_config(self, method: Optional[SolverMethod] = None) -> SolverConfig:
        return SolverConfig(
            quad_order=self.quad_order,
            tol_residual=self.tol_residual,
            tol_step=self.tol_step,
            max_iter=self.max_iter,
            initial=self.initial_constant,
            denom_guard=self.denom_guard,
            method=method or self.method,
            keep_iterates=self.keep_iterates or self.plot_iterate is not None,
        )

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")
