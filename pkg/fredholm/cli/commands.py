import functools
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from fredholm.cli.artifacts import write_csv, write_json
from fredholm.core.config import get_settings
from fredholm.core.exceptions import (
    ConfigError,
    ConstructionError,
    FredholmError,
    PreconditionError,
    ProblemNotFoundError,
)
from fredholm.models.problem import ProblemSpec
from fredholm.models.schemas import RunConfigFile, SolutionSample, SolveReport, SolverMethod
from fredholm.services.analysis import MIN_SAMPLES, estimate_contraction
from fredholm.services.problems import ProblemRegistry, registry as default_registry
from fredholm.services.quadrature import gauss_legendre
from fredholm.services.solver import evaluate_iterate, evaluate_solution, solve, solve_picard

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


def _exit_codes(command):
    """Turn configuration and precondition errors into exit code 1."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs) -> int:
        try:
            return command(*args, **kwargs)
        except (ConfigError, ConstructionError, ProblemNotFoundError, PreconditionError) as e:
            logger.error(f"{command.__name__}: {e}")
            print(f"error: {e}", file=sys.stderr)
            return EXIT_CONFIG
    return wrapper


def load_run_config(path: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfigFile:
    """Read a flat JSON object and apply non-None overrides on top of it."""
    data: Dict[str, Any] = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config file: {e}", source=str(path)) from e
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a single JSON object", source=str(path))
        nested = [key for key, value in data.items() if isinstance(value, (dict, list))]
        if nested:
            raise ConfigError(f"config keys must be flat, nested values under: {', '.join(nested)}", source=str(path))
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    try:
        return RunConfigFile(**data)
    except ValidationError as e:
        raise ConfigError(str(e), source=str(path) if path else "arguments") from e


def resolve_output_dir(config: RunConfigFile, out: Optional[str] = None) -> Path:
    settings = get_settings()
    return Path(out or config.output_dir or settings.FREDHOLM_OUT or settings.DEFAULT_OUTPUT_DIR)


def _build_problem(config: RunConfigFile, registry: Optional[ProblemRegistry]) -> ProblemSpec:
    registry = registry if registry is not None else default_registry
    return registry.create(config.problem, gauss_legendre(config.quad_order))


def _config_echo(config: RunConfigFile, out_dir: Path) -> Dict[str, Any]:
    echo = config.echo()
    echo["output_dir"] = str(out_dir)
    return echo


def _status(report: SolveReport) -> str:
    if report.converged:
        return f"converged in {report.iterations} iterations"
    return f"failed ({report.failure.reason.value}) after {report.iterations} iterations"


def _write_samples(path: Path, spec: ProblemSpec, samples: List[SolutionSample]) -> None:
    if spec.exact is not None:
        header = ["x", "u_approx", "u_exact", "abs_err"]
        rows = [[s.x, s.value, s.exact, s.abs_err] for s in samples]
    else:
        header = ["x", "u_approx"]
        rows = [[s.x, s.value] for s in samples]
    write_csv(path, header, rows)


def cmd_list(registry: Optional[ProblemRegistry] = None) -> str:
    """Print registered problems, one per line."""
    registry = registry if registry is not None else default_registry
    lines = [f"{'name':<18} description"]
    for name, description in registry.describe():
        lines.append(f"{name:<18} {description}")
    text = "\n".join(lines)
    print(text)
    return text


@_exit_codes
def cmd_solve(config: RunConfigFile, out_dir: Path, registry: Optional[ProblemRegistry] = None) -> int:
    spec = _build_problem(config, registry)
    report = solve(spec, config.to_solver_config())
    xs = np.linspace(0.0, 1.0, config.plot_points)
    iterate = None
    if config.plot_iterate is not None:
        iterate = evaluate_iterate(report, spec, config.plot_iterate, xs)

    out_dir = Path(out_dir)
    write_json(out_dir / "report.json", {
        "config": _config_echo(config, out_dir),
        "report": report.model_dump(mode="json"),
    })

    _write_samples(out_dir / "solution.csv", spec, evaluate_solution(report, spec, xs))
    if iterate is not None:
        _write_samples(out_dir / f"iterate_{config.plot_iterate}.csv", spec, iterate)

    print(f"{spec.name}: {_status(report)}, sup |F| = {report.residual_history[-1]:.3e}")
    return EXIT_OK if report.converged else EXIT_NUMERICAL


@_exit_codes
def cmd_compare(config: RunConfigFile, out_dir: Path, registry: Optional[ProblemRegistry] = None) -> int:
    spec = _build_problem(config, registry)
    newton = solve(spec, config.to_solver_config(SolverMethod.NEWTON_TYPE))
    picard = solve_picard(spec, config.to_solver_config(SolverMethod.PICARD))

    header = ["iteration", "newton_residual", "picard_residual"]
    columns: List[List[float]] = [newton.residual_history, picard.residual_history]
    if newton.error_history is not None and picard.error_history is not None:
        header += ["newton_error", "picard_error"]
        columns += [newton.error_history, picard.error_history]
    length = max(len(column) for column in columns)
    rows = []
    for k in range(length):
        rows.append([str(k)] + [column[k] if k < len(column) else None for column in columns])
    write_csv(Path(out_dir) / "compare.csv", header, rows)

    print(f"{spec.name}: newton_type {_status(newton)}; picard {_status(picard)}")
    return EXIT_OK if newton.converged and picard.converged else EXIT_NUMERICAL


@_exit_codes
def cmd_certify(config: RunConfigFile, out_dir: Path, radius: float, samples: int, seed: int,
                direction_radius: float = 0.1, registry: Optional[ProblemRegistry] = None) -> int:
    if samples < MIN_SAMPLES:
        raise PreconditionError(f"samples must be at least {MIN_SAMPLES}, got {samples}")
    if not radius > 0:
        raise PreconditionError(f"radius must be positive, got {radius}")

    spec = _build_problem(config, registry)
    report = solve(spec, config.to_solver_config(SolverMethod.NEWTON_TYPE))
    if not report.converged:
        print(f"{spec.name}: {_status(report)}; nothing to certify", file=sys.stderr)
        return EXIT_NUMERICAL

    try:
        contraction = estimate_contraction(spec, report.final, radius=radius, samples=samples,
                                           seed=seed, direction_radius=direction_radius,
                                           denom_guard=config.denom_guard)
    except FredholmError as e:
        logger.error(f"Contraction estimate failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL

    out_dir = Path(out_dir)
    payload = {"problem": spec.name, "config": _config_echo(config, out_dir)}
    payload.update(contraction.model_dump(mode="json"))
    write_json(out_dir / "contraction.json", payload)

    verdict = "passed" if contraction.passed_half_bound else "FAILED"
    print(f"{spec.name}: Lipschitz estimate {contraction.sup_lipschitz:.4f} "
          f"(bound {0.5 + contraction.slack:g}) {verdict}; "
          f"sup |T_H1,1| = {contraction.sup_directional:.3e}")
    return EXIT_OK if contraction.passed_half_bound else EXIT_NUMERICAL
