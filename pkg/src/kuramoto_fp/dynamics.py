"""Kuramoto right-hand side, RK4 integration and the monotonicity probe."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import PreconditionError, ShapeError
from .network import Network

if TYPE_CHECKING:
    from .fixpoint import FixedPoint

TRANSIENT_FRACTION = 0.05
MONOTONE_SLACK = 1e-12
CONVERGED_DISTANCE = 1e-8
# deviations below this are rounding noise and are left out of the rate fit
FIT_FLOOR = 1e-11


@dataclass(frozen=True)
class PhaseState:
    """Phases (unwrapped radians), natural frequencies and coupling constant."""

    theta: np.ndarray
    omega: np.ndarray
    k: float = 1.0

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        omega = np.asarray(self.omega, dtype=float)
        if omega.ndim == 0:
            omega = np.full_like(theta, float(omega))
        if theta.ndim != 1 or theta.shape != omega.shape:
            raise ShapeError(f"theta {theta.shape} and omega {omega.shape} must be equal-length vectors")
        if not self.k > 0:
            raise PreconditionError(f"coupling constant must be positive, got {self.k}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "k", float(self.k))

    @classmethod
    def homogeneous(cls, theta, k: float = 1.0, frequency: float = 0.0) -> "PhaseState":
        theta = np.asarray(theta, dtype=float)
        return cls(theta, np.full(theta.shape, float(frequency)), k)

    @property
    def n(self) -> int:
        return self.theta.size

    def with_theta(self, theta) -> "PhaseState":
        return PhaseState(theta, self.omega, self.k)


@dataclass
class Trajectory:
    times: np.ndarray
    thetas: np.ndarray  # shape (samples, n)

    @property
    def final(self) -> np.ndarray:
        return self.thetas[-1]

    def to_csv(self) -> str:
        n = self.thetas.shape[1]
        header = "t," + ",".join(f"theta_{i}" for i in range(n))
        rows = [
            ",".join([f"{t:.12g}"] + [f"{x:.12g}" for x in row])
            for t, row in zip(self.times, self.thetas)
        ]
        return "\n".join([header] + rows) + "\n"


@dataclass
class MonotonicityReport:
    monotone: np.ndarray  # bool per node
    fitted_rate: list  # float or None per node
    converged: bool
    final_distance: float
    # sign of theta_i - theta_i* and of dtheta_i/dt - mean frequency, taken at
    # the end of the transient window
    deviation_sign: np.ndarray
    rate_sign: np.ndarray


def _check(net: Network, theta: np.ndarray) -> None:
    if theta.shape != (net.n,):
        raise ShapeError(f"expected {net.n} phases, got shape {theta.shape}")


def coupling_term(net: Network, theta: np.ndarray) -> np.ndarray:
    """sum_j A_ij sin(theta_j - theta_i) for every node i."""
    diff = theta[None, :] - theta[:, None]
    return (net.adjacency * np.sin(diff)).sum(axis=1)


def kuramoto_rhs(net: Network, state: PhaseState) -> np.ndarray:
    _check(net, state.theta)
    return state.omega + state.k * coupling_term(net, state.theta)


def mean_frequency(omega) -> float:
    omega = np.asarray(omega, dtype=float)
    if omega.size == 0:
        raise ShapeError("mean frequency of an empty vector")
    return float(omega.mean())


def default_step(net: Network, k: float) -> float:
    return 0.01 / (k * max(net.max_degree, 1))


def integrate_rk4(
    net: Network,
    state: PhaseState,
    h: float | None = None,
    steps: int = 1000,
    record_every: int = 1,
) -> Trajectory:
    """Fixed-step classical Runge-Kutta integration of the Kuramoto flow.

    The last sample is always the final state, even when ``steps`` is not a
    multiple of ``record_every``.
    """
    _check(net, state.theta)
    if h is None:
        h = default_step(net, state.k)
    if not h > 0:
        raise PreconditionError(f"step size must be positive, got {h}")
    if steps < 0 or record_every < 1:
        raise PreconditionError("steps must be >= 0 and record_every >= 1")

    adj, omega, k = net.adjacency, state.omega, state.k

    def f(th):
        return omega + k * (adj * np.sin(th[None, :] - th[:, None])).sum(axis=1)

    theta = state.theta.copy()
    times, samples = [0.0], [theta.copy()]
    for step in range(1, steps + 1):
        k1 = f(theta)
        k2 = f(theta + 0.5 * h * k1)
        k3 = f(theta + 0.5 * h * k2)
        k4 = f(theta + h * k3)
        theta = theta + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if step % record_every == 0 or step == steps:
            times.append(step * h)
            samples.append(theta.copy())
    return Trajectory(np.array(times), np.array(samples))


def monotonicity_probe(
    net: Network,
    k: float,
    fp: "FixedPoint",
    delta,
    h: float | None = None,
    steps: int = 2000,
    omega=None,
) -> MonotonicityReport:
    """Integrate from ``fp.theta + delta`` and test per-node monotone convergence.

    ``delta`` must sum to zero, which pins the rotational mode so the flow
    returns to ``fp`` itself rather than a rotated copy. For each node the
    deviation ``theta_i(t) - theta_i*(t)`` is checked for a constant sign of
    successive differences after a 5% transient, and where it shrinks
    monotonically an exponential rate is fitted to its magnitude by least
    squares on the log scale.
    """
    delta = np.asarray(delta, dtype=float)
    _check(net, delta)
    if abs(delta.sum()) > 1e-12:
        raise PreconditionError(f"perturbation must sum to zero, sum={delta.sum():.3e}")
    if omega is None:
        omega = np.zeros(net.n)
    state = PhaseState(fp.theta + delta, omega, k)
    wbar = mean_frequency(state.omega)
    traj = integrate_rk4(net, state, h=h, steps=steps)

    dev = traj.thetas - fp.theta[None, :] - wbar * traj.times[:, None]
    start = int(np.floor(TRANSIENT_FRACTION * len(traj.times)))
    tail, t_tail = dev[start:], traj.times[start:]
    steps_diff = np.diff(tail, axis=0)

    monotone = np.all(steps_diff <= MONOTONE_SLACK, axis=0) | np.all(steps_diff >= -MONOTONE_SLACK, axis=0)
    rates: list = []
    for i in range(net.n):
        mag = np.abs(tail[:, i])
        rate = None
        if monotone[i] and mag[-1] < mag[0]:
            keep = mag > FIT_FLOOR
            if keep.sum() >= 3:
                slope = np.polyfit(t_tail[keep], np.log(mag[keep]), 1)[0]
                if slope < 0:
                    rate = float(-slope)
        rates.append(rate)

    speed = kuramoto_rhs(net, state.with_theta(traj.thetas[start])) - wbar
    final_distance = float(np.max(np.abs(dev[-1])))
    return MonotonicityReport(
        monotone=monotone,
        fitted_rate=rates,
        converged=final_distance < CONVERGED_DISTANCE,
        final_distance=final_distance,
        deviation_sign=np.sign(tail[0]).astype(int),
        rate_sign=np.sign(speed).astype(int),
    )
