"""Frequency fixed points: residuals, a grounded damped Newton solver, twisted states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import PhaseState, coupling_term, mean_frequency
from .errors import FormatError, PreconditionError, ShapeError
from .network import Network

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 100
MAX_HALVINGS = 30


@dataclass(frozen=True)
class FixedPoint:
    """Representative of a frequency fixed point at ``t = 0``.

    ``theta[grounded_node]`` is exactly zero; any other rotation of the same
    phases describes the same fixed point.
    """

    theta: np.ndarray
    residual_norm: float
    homogeneous: bool
    grounded_node: int = 0

    @classmethod
    def from_state(cls, net: Network, state: PhaseState, grounded_node: int = 0) -> "FixedPoint":
        """Wrap arbitrary phases, re-based so ``theta[grounded_node] = 0``."""
        theta = state.theta - state.theta[grounded_node]
        res = residual(net, state.with_theta(theta))
        return cls(
            theta=theta,
            residual_norm=float(np.max(np.abs(res))),
            homogeneous=bool(np.all(state.omega == state.omega[0])),
            grounded_node=grounded_node,
        )

    @classmethod
    def homogeneous_from(cls, net: Network, theta, k: float = 1.0) -> "FixedPoint":
        return cls.from_state(net, PhaseState.homogeneous(theta, k))


@dataclass
class NewtonResult:
    """Outcome of :func:`solve_newton`; failures are reported, not raised."""

    success: bool
    status: str  # "converged", "singular" or "no-convergence"
    theta: np.ndarray
    residual_norm: float
    iterations: int
    fixed_point: FixedPoint | None = None


def residual(net: Network, state: PhaseState) -> np.ndarray:
    """Deviation of each node's rate from the common frequency.

    ``r_i = mean(omega) - omega_i - k * sum_j A_ij sin(theta_j - theta_i)``;
    zero exactly at a frequency fixed point. Components always sum to zero.
    """
    if state.theta.shape != (net.n,):
        raise ShapeError(f"expected {net.n} phases, got shape {state.theta.shape}")
    return mean_frequency(state.omega) - state.omega - state.k * coupling_term(net, state.theta)


def residual_jacobian(net: Network, k: float, theta: np.ndarray) -> np.ndarray:
    """d residual / d theta; the negative of the stability Jacobian."""
    c = net.adjacency * np.cos(theta[None, :] - theta[:, None])
    jac = -k * c
    np.fill_diagonal(jac, k * c.sum(axis=1))
    return jac


def solve_newton(
    net: Network,
    state: PhaseState,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> NewtonResult:
    """Damped Newton iteration with node 0 pinned at phase 0.

    ``state.theta`` is the initial guess. The unknowns are ``theta[1:]`` and
    the equations are ``residual[1:]`` (the dropped equation is implied by
    the zero-sum identity). A step is halved, up to 30 times, while it would
    increase the residual max-norm.
    """
    if not tol > 0:
        raise PreconditionError(f"tol must be positive, got {tol}")
    if state.theta.shape != (net.n,):
        raise ShapeError(f"expected {net.n} phases, got shape {state.theta.shape}")
    theta = state.theta - state.theta[0]
    adj, k = net.adjacency, state.k
    offset = mean_frequency(state.omega) - state.omega

    def res_of(th):
        return offset - k * (adj * np.sin(th[None, :] - th[:, None])).sum(axis=1)

    def norm(th):
        return float(np.max(np.abs(res_of(th))))

    current = norm(theta)
    it = 0
    status = "no-convergence"
    while True:
        if current < tol:
            status = "converged"
            break
        if it >= max_iter:
            break
        it += 1
        res = res_of(theta)
        jac = residual_jacobian(net, k, theta)[1:, 1:]
        try:
            step = np.linalg.solve(jac, -res[1:])
        except np.linalg.LinAlgError:
            status = "singular"
            break
        if not np.all(np.isfinite(step)):
            status = "singular"
            break
        scale = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial = theta.copy()
            trial[1:] += scale * step
            trial_norm = norm(trial)
            if trial_norm <= current:
                break
            scale *= 0.5
        else:
            break
        theta, current = trial, trial_norm

    result = NewtonResult(
        success=status == "converged",
        status=status,
        theta=theta,
        residual_norm=current,
        iterations=it,
    )
    if result.success:
        result.fixed_point = FixedPoint(
            theta=theta,
            residual_norm=current,
            homogeneous=bool(np.all(state.omega == state.omega[0])),
            grounded_node=0,
        )
    return result


def twisted_state(n: int, q: int) -> np.ndarray:
    """Phases wound ``q`` times evenly around the circle, ``2*pi*q*i/n``.

    Each phase is reduced to ``[0, 2*pi)`` via ``(q*i) mod n`` so rounding
    does not grow with ``q * i``.
    """
    i = np.arange(n)
    return 2.0 * np.pi * ((q * i) % n) / n


def wrap(x) -> np.ndarray:
    """Map angles into (-pi, pi]."""
    return -(np.mod(np.pi - np.asarray(x, dtype=float), 2.0 * np.pi) - np.pi)


def is_zero_fixed_point(theta, tol: float = 1e-6) -> bool:
    """True when every wrapped pairwise phase difference is below ``tol``."""
    if not tol > 0:
        raise PreconditionError(f"tol must be positive, got {tol}")
    theta = np.asarray(theta, dtype=float)
    diff = wrap(theta[None, :] - theta[:, None])
    return bool(np.all(np.abs(diff) < tol))


def format_phases(theta, digits: int = 17) -> str:
    return ",".join(f"{x:.{digits}g}" for x in np.asarray(theta, dtype=float))


def parse_phases(text: str) -> np.ndarray:
    """Read a single CSV line of phases; blank and ``#`` lines are ignored."""
    values = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.extend(float(tok) for tok in line.split(","))
        except ValueError:
            raise FormatError(f"non-numeric phase in {line!r}") from None
    if not values:
        raise FormatError("no phases found")
    return np.array(values)
