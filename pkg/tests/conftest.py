import math

import mpmath
import numpy as np
import pytest

from kuramoto_fp import (
    FixedPoint,
    PhaseState,
    circulant_network,
    complete_network,
    cycle_network,
    integrate_rk4,
    solve_newton,
    twisted_state,
)
from kuramoto_fp.network import Network


def cubic_symmetric_eigs(m):
    """Closed-form eigenvalues of a real symmetric 3x3 matrix (trigonometric method).

    Evaluated in 50-digit arithmetic: in doubles the arccos step loses half
    the digits at repeated roots.
    """
    with mpmath.workdps(50):
        a = mpmath.matrix([[mpmath.mpf(float(x)) for x in row] for row in np.asarray(m)])
        p1 = a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2
        q = (a[0, 0] + a[1, 1] + a[2, 2]) / 3
        if p1 == 0:
            return np.sort([float(a[i, i]) for i in range(3)])
        p2 = (a[0, 0] - q) ** 2 + (a[1, 1] - q) ** 2 + (a[2, 2] - q) ** 2 + 2 * p1
        p = mpmath.sqrt(p2 / 6)
        b = (a - q * mpmath.eye(3)) / p
        det = (
            b[0, 0] * (b[1, 1] * b[2, 2] - b[1, 2] * b[2, 1])
            - b[0, 1] * (b[1, 0] * b[2, 2] - b[1, 2] * b[2, 0])
            + b[0, 2] * (b[1, 0] * b[2, 1] - b[1, 1] * b[2, 0])
        )
        r = max(-1, min(1, det / 2))
        phi = mpmath.acos(r) / 3
        e1 = q + 2 * p * mpmath.cos(phi)
        e3 = q + 2 * p * mpmath.cos(phi + 2 * mpmath.pi / 3)
        e2 = 3 * q - e1 - e3
        return np.sort([float(e1), float(e2), float(e3)])


def brute_cut_sum(net, theta, subset):
    """Cut-cosine sum by walking the edge list."""
    inside = set(subset)
    total = 0.0
    for i, j in net.edges:
        if (i in inside) != (j in inside):
            total += math.cos(theta[i] - theta[j])
    return total


def random_connected_network(rng, n, p=0.5):
    while True:
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
        if not edges:
            continue
        net = Network.from_edges(n, edges)
        if net.is_connected():
            return net


@pytest.fixture
def k3():
    return complete_network(3)


@pytest.fixture
def k3_equilateral(k3):
    return FixedPoint.homogeneous_from(k3, twisted_state(3, 1))


@pytest.fixture
def ring6():
    return cycle_network(6)


@pytest.fixture
def ring6_twisted(ring6):
    return FixedPoint.homogeneous_from(ring6, twisted_state(6, 1))


@pytest.fixture
def eight_node():
    return circulant_network(8, [1, 4])


@pytest.fixture
def eight_node_state(eight_node):
    return FixedPoint.homogeneous_from(eight_node, twisted_state(8, 1))


@pytest.fixture(scope="session")
def random_fixed_points():
    """Homogeneous fixed points on random connected graphs, n = 4..10.

    Half come from Newton on a random start (mostly saddles), half from
    relaxing the flow first and polishing with Newton (mostly attractors).
    """
    rng = np.random.default_rng(20240501)
    found = []
    while len(found) < 60:
        n = int(rng.integers(4, 11))
        net = random_connected_network(rng, n, p=float(rng.uniform(0.25, 0.6)))
        start = PhaseState.homogeneous(rng.uniform(-np.pi, np.pi, n))
        if len(found) % 2:
            start = start.with_theta(integrate_rk4(net, start, h=0.05, steps=600).final)
        res = solve_newton(net, start)
        if res.success:
            found.append((net, res.fixed_point))
    return found


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
