import numpy as np
import pytest

from fredholm.core.exceptions import DimensionError, DomainError, PreconditionError, SmoothnessViolationError
from fredholm.models.grid import GridFunction
from fredholm.services.operators import OperatorContext, perturb
from fredholm.services.problems import builtin
from fredholm.services.quadrature import gauss_legendre


@pytest.fixture
def ctx1(ex1, rule32):
    return OperatorContext(ex1, rule32)


@pytest.fixture
def ctx2(ex2, rule32):
    return OperatorContext(ex2, rule32)


def exact_on(ctx):
    return GridFunction.from_callable(ctx.rule, ctx.spec.exact)


def test_F_vanishes_at_exact_solution(ctx1):
    assert abs(ctx1.eval_F(exact_on(ctx1), 0.3)) <= 1e-13


def test_F_without_integral_term(rule32):
    spec = builtin("mms-zero-lambda", rule32)
    ctx = OperatorContext(spec, rule32)
    h = GridFunction.from_callable(rule32, np.sin)
    for x in (0.0, 0.37, rule32.nodes[4], 1.0):
        assert ctx.eval_F(h, x) == pytest.approx(np.sin(x) - spec.forcing(x), abs=1e-15)


def test_F_at_zero_function(ctx1, rule32):
    zero = GridFunction.constant(rule32, 0.0)
    assert ctx1.eval_F(zero, 0.0) == pytest.approx((np.cos(1.0) - 1.0) / 8.0, abs=1e-15)


def test_F_accepts_arrays(ctx1, rule32):
    xs = np.array([0.0, 0.5, 1.0])
    values = ctx1.eval_F(exact_on(ctx1), xs)
    assert values.shape == (3,)
    assert np.max(np.abs(values)) <= 1e-13


def test_T_at_exact_solution(ctx1):
    p = exact_on(ctx1)
    for x in (0.0, 0.42, 1.0):
        assert ctx1.eval_T(p, ctx1.unit, x) == pytest.approx(1.0 + np.sin(1.0) / 8.0, abs=1e-12)


def test_T_at_left_end_of_second_example(ctx2, rule32):
    h = GridFunction(rule32, np.linspace(-1.0, 2.0, 32))
    assert ctx2.eval_T(h, ctx2.unit, 0.0) == 1.0


def test_T_in_zero_direction(ctx1, rule32):
    zero = GridFunction.constant(rule32, 0.0)
    values = ctx1.eval_T(exact_on(ctx1), zero, np.linspace(0.0, 1.0, 7))
    assert np.all(values == 0.0)


def test_T_is_linear_in_direction(ctx2, rule32):
    rng = np.random.default_rng(3)
    h = GridFunction(rule32, np.exp(rule32.nodes) + 0.1 * rng.uniform(-1, 1, 32))
    u = GridFunction(rule32, rng.uniform(-1, 1, 32))
    v = GridFunction(rule32, rng.uniform(-1, 1, 32))
    a, b = rng.uniform(-2, 2, 2)
    combined = GridFunction(rule32, a * u.nodal_values + b * v.nodal_values)
    xs = np.concatenate([rule32.nodes, rng.uniform(0, 1, 5)])
    left = ctx2.eval_T(h, combined, xs)
    right = a * ctx2.eval_T(h, u, xs) + b * ctx2.eval_T(h, v, xs)
    assert np.max(np.abs(left - right)) <= 1e-12


def test_T_is_directional_derivative_of_F(ctx2, rule32):
    rng = np.random.default_rng(11)
    h = GridFunction(rule32, np.exp(rule32.nodes) + 0.2 * rng.uniform(-1, 1, 32))
    u = GridFunction(rule32, rng.uniform(-1, 1, 32))
    nodes = rule32.nodes
    expected = ctx2.eval_T(h, u, nodes)
    base = ctx2.eval_F(h, nodes)

    gaps = []
    for eps in (1e-4, 1e-5, 1e-6):
        quotient = (ctx2.eval_F(perturb(h, u, eps), nodes) - base) / eps
        gaps.append(np.max(np.abs(quotient - expected)))

    assert gaps[0] <= 1e-3
    assert gaps[1] < gaps[0]
    assert gaps[2] <= 1e-5


@pytest.mark.parametrize("name", ["paper-ex1", "paper-ex2"])
def test_H_fixes_the_solution(name, rule32):
    ctx = OperatorContext(builtin(name), rule32)
    p = exact_on(ctx)
    values = ctx.eval_H(p, ctx.unit, rule32.nodes)
    assert np.max(np.abs(values - p.nodal_values)) <= 1e-12


def test_H_at_left_end_of_second_example(ctx2, rule32):
    one = GridFunction.constant(rule32, 1.0)
    assert ctx2.eval_H(one, ctx2.unit, 0.0) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("name", ["paper-ex1", "paper-ex2"])
def test_H_is_flat_near_the_solution(name, rule32):
    ctx = OperatorContext(builtin(name), rule32)
    derivative = ctx.eval_T_H(exact_on(ctx), ctx.unit, rule32.nodes, eps=1e-5)
    assert np.max(np.abs(derivative)) <= 1e-3


def test_closed_form_derivative_of_H(ctx1, rule32):
    p = exact_on(ctx1)
    assert np.max(np.abs(ctx1.closed_form_T_H(p, ctx1.unit, rule32.nodes))) <= 1e-15

    u = GridFunction.from_callable(rule32, lambda x: 1.0 + x)
    closed = ctx1.closed_form_T_H(p, u, rule32.nodes)
    numeric = ctx1.eval_T_H(p, u, rule32.nodes, eps=1e-6)
    assert np.max(np.abs(closed - numeric)) <= 1e-4


def test_smoothness_violation(rule32):
    ctx = OperatorContext(builtin("mms-singular", rule32), rule32)
    h = GridFunction.constant(rule32, 0.5)
    with pytest.raises(SmoothnessViolationError) as info:
        ctx.eval_H(h, ctx.unit, 0.25)
    assert info.value.x == 0.25
    assert abs(info.value.denominator) < 1e-10
    with pytest.raises(SmoothnessViolationError):
        ctx.newton_update(h)


def test_nystrom_on_node_is_exact(ctx1, rule32):
    h = GridFunction(rule32, np.linspace(0.0, 1.0, 32))
    assert ctx1.nystrom_eval(h, rule32.nodes[3]) == h.nodal_values[3]


def test_nystrom_recovers_solution_off_node(ctx1, ex1_report):
    assert ctx1.nystrom_eval(ex1_report.final, 0.7) == pytest.approx(0.49, abs=1e-10)


def test_nystrom_without_integral_term(rule32):
    spec = builtin("mms-zero-lambda", rule32)
    ctx = OperatorContext(spec, rule32)
    h = GridFunction(rule32, np.full(32, 7.0))
    assert ctx.nystrom_eval(h, 0.37) == pytest.approx(np.cos(0.37), abs=1e-15)


def test_nodal_fast_paths_agree(ctx2, rule32):
    h = GridFunction(rule32, np.exp(rule32.nodes) + 0.05)
    assert np.allclose(ctx2.residual(h), ctx2.eval_F(h, rule32.nodes), atol=1e-15)
    assert np.allclose(ctx2.newton_update(h), ctx2.eval_H(h, ctx2.unit, rule32.nodes), atol=1e-14)


def test_points_outside_interval(ctx1, rule32):
    h = GridFunction.constant(rule32, 0.0)
    for x in (-0.1, 1.5, np.nan):
        with pytest.raises(DomainError):
            ctx1.eval_F(h, x)


def test_rule_mismatch(ctx1):
    h = GridFunction.constant(gauss_legendre(16), 0.0)
    with pytest.raises(DimensionError):
        ctx1.residual(h)


def test_guard_must_be_positive(ex1, rule32):
    with pytest.raises(PreconditionError):
        OperatorContext(ex1, rule32, denom_guard=0.0)


def test_F_off_node_depends_on_how_h_was_built(ctx1, rule32):
    sampled = GridFunction.from_callable(rule32, lambda x: x ** 2 + 0.1)
    nodal = GridFunction(rule32, sampled.nodal_values)
    assert ctx1.eval_F(nodal, 0.5) == pytest.approx(0.0, abs=1e-15)
    assert abs(ctx1.eval_F(sampled, 0.5)) > 1e-2
    assert ctx1.eval_F(nodal, rule32.nodes[7]) == pytest.approx(ctx1.eval_F(sampled, rule32.nodes[7]), abs=1e-15)
