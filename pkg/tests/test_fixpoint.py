import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kuramoto_fp import (
    FixedPoint,
    PhaseState,
    complete_network,
    cycle_network,
    is_zero_fixed_point,
    residual,
    solve_newton,
    twisted_state,
)
from kuramoto_fp.fixpoint import format_phases, parse_phases, wrap


def test_residual_constant_phases():
    net = complete_network(5)
    assert not np.any(residual(net, PhaseState(np.full(5, 0.4), np.full(5, 2.0), 1.0)))


def test_residual_ring6_twisted():
    r = residual(cycle_network(6), PhaseState.homogeneous(twisted_state(6, 1)))
    assert np.max(np.abs(r)) < 1e-15


def test_residual_k3_equilateral():
    theta = np.array([0.0, 2 * math.pi / 3, 4 * math.pi / 3])
    assert np.max(np.abs(residual(complete_network(3), PhaseState.homogeneous(theta)))) < 1e-15


@settings(max_examples=80, deadline=None)
@given(
    arrays(float, 7, elements=st.floats(-6, 6)),
    arrays(float, 7, elements=st.floats(-2, 2)),
    st.floats(0.1, 5),
    st.floats(-6, 6),
)
def test_residual_rotation_invariant_and_zero_sum(theta, omega, k, c):
    net = cycle_network(7)
    r = residual(net, PhaseState(theta, omega, k))
    assert abs(r.sum()) < 1e-12
    shifted = residual(net, PhaseState(theta + c, omega, k))
    assert np.max(np.abs(shifted - r)) < 1e-12


def test_twisted_states_on_cycles_are_fixed_points():
    worst = 0.0
    for n in range(3, 65):
        net = cycle_network(n)
        for q in range(-((n - 1) // 2), (n - 1) // 2 + 1):
            if 2 * abs(q) >= n:
                continue
            r = residual(net, PhaseState.homogeneous(twisted_state(n, q)))
            worst = max(worst, float(np.max(np.abs(r))))
    assert worst < 1e-14


def test_twisted_state_values():
    assert not np.any(twisted_state(5, 0))
    t6 = twisted_state(6, 1)
    assert np.diff(t6) == pytest.approx(np.full(5, math.pi / 3))
    assert twisted_state(3, 1) == pytest.approx([0, 2 * math.pi / 3, 4 * math.pi / 3])


def test_newton_exact_guess():
    net = complete_network(4)
    res = solve_newton(net, PhaseState.homogeneous(np.zeros(4)))
    assert res.success and res.iterations <= 1
    assert res.fixed_point.theta[0] == 0.0


def test_newton_k3_equilateral_from_perturbed_guess():
    net = complete_network(3)
    guess = np.array([0.0, 2 * math.pi / 3, -2 * math.pi / 3]) + 0.1 * np.array([0.3, 1.0, -0.7])
    res = solve_newton(net, PhaseState.homogeneous(guess))
    assert res.success
    fp = res.fixed_point
    assert fp.theta[0] == 0.0
    assert np.max(np.abs(residual(net, PhaseState.homogeneous(fp.theta)))) < 1e-12
    assert wrap(fp.theta - np.array([0, 2 * math.pi / 3, -2 * math.pi / 3])) == pytest.approx(np.zeros(3), abs=1e-9)


def test_newton_recovers_ring6_twisted():
    net = cycle_network(6)
    rng = np.random.default_rng(3)
    guess = twisted_state(6, 1) + rng.normal(scale=0.05, size=6)
    res = solve_newton(net, PhaseState.homogeneous(guess))
    assert res.success
    assert wrap(res.fixed_point.theta - twisted_state(6, 1)) == pytest.approx(np.zeros(6), abs=1e-9)


def test_newton_inhomogeneous_two_nodes():
    net = complete_network(2)
    state = PhaseState([0.0, -0.4], [1.0, -1.0], 2.0)
    res = solve_newton(net, state)
    assert res.success
    # closed form: 1 + 2 sin(theta_1 - theta_0) = 0
    assert math.sin(res.fixed_point.theta[1]) == pytest.approx(-0.5, abs=1e-12)


def test_newton_reports_no_convergence():
    # coupling too weak for these frequencies: no fixed point exists
    net = complete_network(2)
    res = solve_newton(net, PhaseState([0.0, 0.1], [1.0, -1.0], 0.1), max_iter=20)
    assert not res.success
    assert res.status in {"no-convergence", "singular"}
    assert res.fixed_point is None


def test_newton_success_rechecked_by_residual():
    rng = np.random.default_rng(11)
    net = complete_network(6)
    for _ in range(40):
        res = solve_newton(net, PhaseState.homogeneous(rng.uniform(-np.pi, np.pi, 6)))
        if res.success:
            r = residual(net, PhaseState.homogeneous(res.fixed_point.theta))
            assert np.max(np.abs(r)) < 1e-12


def test_is_zero_fixed_point():
    tol = 1e-6
    assert is_zero_fixed_point(np.full(4, 2.3), tol)
    assert is_zero_fixed_point([0.0, 2 * math.pi], tol)
    assert not is_zero_fixed_point(twisted_state(6, 1), tol)
    assert is_zero_fixed_point([0.0, tol / 2], tol)


def test_fixed_point_from_state_grounds_node_zero():
    net = cycle_network(6)
    fp = FixedPoint.homogeneous_from(net, twisted_state(6, 1) + 0.7)
    assert fp.theta[0] == 0.0
    assert fp.residual_norm < 1e-14


def test_phase_csv_round_trip():
    theta = twisted_state(7, 2) - 1.0
    assert np.array_equal(parse_phases(format_phases(theta) + "\n"), theta)
