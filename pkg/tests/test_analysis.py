import dataclasses

import numpy as np
import pytest

from fredholm.core.exceptions import InsufficientDataError, PreconditionError
from fredholm.models.grid import GridFunction
from fredholm.services.analysis import estimate_contraction, fit_error_sequence, fit_rate
from fredholm.services.problems import builtin
from fredholm.services.solver import solve


@pytest.fixture(scope="module")
def zero_lambda():
    spec = builtin("mms-zero-lambda")
    return spec, solve(spec)


def test_example_one_passes_half_bound(ex1, ex1_report):
    report = estimate_contraction(ex1, ex1_report.final, radius=0.1, samples=50, seed=7)
    assert report.passed_half_bound
    assert report.sup_lipschitz <= 0.55
    assert report.excluded_samples == 0
    assert report.samples == 50
    assert report.seed == 7
    assert report.note


def test_directional_derivative_vanishes_at_solution(ex1, ex1_report):
    report = estimate_contraction(ex1, ex1_report.final, radius=1e-8, samples=20, seed=1)
    assert report.sup_directional <= 1e-3
    assert report.sup_directional_coarse <= 1e-3


def test_example_two_directional_derivative_is_small(ex2, ex2_report):
    report = estimate_contraction(ex2, ex2_report.final, radius=1e-6, samples=10, seed=2)
    assert report.sup_directional <= 1e-3


def test_zero_lambda_update_is_constant(zero_lambda):
    spec, solved = zero_lambda
    report = estimate_contraction(spec, solved.final, radius=0.1, samples=20, seed=0)
    assert report.sup_directional <= 1e-9
    assert report.sup_lipschitz <= 1e-12
    assert report.passed_half_bound


def test_estimate_is_deterministic(ex1, ex1_report):
    first = estimate_contraction(ex1, ex1_report.final, radius=0.05, samples=10, seed=3)
    second = estimate_contraction(ex1, ex1_report.final, radius=0.05, samples=10, seed=3)
    assert first.model_dump() == second.model_dump()


def test_nested_radii_are_monotone(ex1, ex1_report):
    values = [
        estimate_contraction(ex1, ex1_report.final, radius=r, samples=20, seed=5).sup_directional
        for r in (0.01, 0.05, 0.1)
    ]
    for smaller, larger in zip(values, values[1:]):
        assert smaller <= larger + 1e-9


def test_contraction_report_serializes(ex1, ex1_report):
    data = estimate_contraction(ex1, ex1_report.final, radius=0.1, samples=10, seed=0).model_dump(mode="json")
    assert data["passed_half_bound"] is True
    assert len(data["center"]["values"]) == 32
    assert data["slack"] == 0.05


def test_estimate_preconditions(ex1, ex1_report, rule32):
    with pytest.raises(PreconditionError):
        estimate_contraction(ex1, ex1_report.final, radius=0.0)
    with pytest.raises(PreconditionError):
        estimate_contraction(ex1, ex1_report.final, samples=5)
    with pytest.raises(PreconditionError):
        estimate_contraction(ex1, GridFunction.constant(rule32, 1.0))


def test_fit_geometric_sequence():
    fit = fit_error_sequence([1.0, 0.5, 0.25, 0.125])
    assert fit.geometric_rate == pytest.approx(0.5)
    assert fit.ratios == pytest.approx([0.5, 0.5, 0.5])
    assert fit.order_estimate == pytest.approx(1.0)


def test_fit_quadratic_sequence():
    fit = fit_error_sequence([1e-1, 1e-2, 1e-4, 1e-8])
    assert fit.order_estimate == pytest.approx(2.0, abs=0.2)


def test_fit_stops_at_floor():
    fit = fit_error_sequence([1.0, 0.1, 0.01, 1e-14, 1e-3])
    assert len(fit.ratios) == 2


@pytest.mark.parametrize("fixture", ["ex1_report", "ex2_report"])
def test_worked_examples_contract_by_half(fixture, request):
    assert fit_rate(request.getfixturevalue(fixture)).geometric_rate <= 0.5


def test_fit_rate_needs_history(zero_lambda, ex1):
    _, solved = zero_lambda
    with pytest.raises(InsufficientDataError):
        fit_rate(solved)
    with pytest.raises(InsufficientDataError):
        fit_rate([1.0, 0.5])
    no_exact = solve(dataclasses.replace(ex1, exact=None))
    with pytest.raises(InsufficientDataError):
        fit_rate(no_exact)


def test_no_usable_samples_is_an_error(rule32):
    spec = builtin("mms-singular", rule32)
    exact = GridFunction(rule32, rule32.nodes)
    with pytest.raises(PreconditionError):
        estimate_contraction(spec, exact, radius=0.1, samples=10)
