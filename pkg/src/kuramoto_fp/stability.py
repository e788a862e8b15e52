"""Linear stability of fixed points and cut-cosine instability certificates.

The linearization of the Kuramoto flow at phases ``theta`` is the symmetric
matrix ``J`` with off-diagonal entries ``k A_ij cos(theta_j - theta_i)`` and
zero row sums, i.e. minus a cosine-weighted graph Laplacian. Its constant
vector is always a zero mode (global rotation).

For a bipartition ``(A, B)`` the cut-cosine sum is
``sum_{i in A, j in B} A_ij cos(theta_i - theta_j)``. A stable fixed point
has a strictly positive sum on every cut, so any cut with a non-positive sum
certifies instability. The converse does not hold: finding no such cut says
nothing about stability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .dynamics import PhaseState, kuramoto_rhs, mean_frequency
from .errors import InvalidSizeError, PreconditionError, ScopeError, ShapeError
from .fixpoint import FixedPoint, is_zero_fixed_point
from .network import Network

EXHAUSTIVE_MAX_N = 20
HEURISTIC_RESTARTS = 50
JACOBI_MAX_SWEEPS = 100
JACOBI_TOL = 1e-12
_CHUNK = 1 << 15


@dataclass
class StabilityReport:
    eigenvalues: np.ndarray
    zero_modes: int
    classification: str  # stable | unstable | marginal | degenerate
    tau: float

    def to_text(self) -> str:
        eig = " ".join(f"{x:.12g}" for x in self.eigenvalues)
        return (
            f"classification: {self.classification}\n"
            f"zero_modes: {self.zero_modes}\n"
            f"tau: {self.tau:.12g}\n"
            f"eigenvalues: {eig}\n"
        )


@dataclass(frozen=True)
class CutCertificate:
    subset_A: tuple[int, ...]
    cut_sum: float
    certifies_instability: bool

    def to_text(self) -> str:
        return (
            f"subset_A: {' '.join(map(str, self.subset_A))}\n"
            f"cut_sum: {self.cut_sum:.12g}\n"
            f"certifies_instability: {str(self.certifies_instability).lower()}\n"
        )


@dataclass(frozen=True)
class ProbeRecord:
    lhs: float
    rhs: float
    ratio: float | None
    degenerate: bool  # rhs == 0, ratio undefined


@dataclass(frozen=True)
class CentroidCut:
    node: int
    cut_sum: float
    centroid_magnitude: float


def _phases(x) -> np.ndarray:
    if isinstance(x, FixedPoint):
        return x.theta
    return np.asarray(x, dtype=float)


def _subset(net: Network, subset_A: Iterable[int]) -> np.ndarray:
    members = sorted(set(int(i) for i in subset_A))
    if not members or len(members) >= net.n:
        raise PreconditionError("subset A must be a nonempty proper subset of the nodes")
    if members[0] < 0 or members[-1] >= net.n:
        raise PreconditionError(f"subset A has nodes outside 0..{net.n - 1}")
    mask = np.zeros(net.n, dtype=bool)
    mask[members] = True
    return mask


def _cosine_weights(net: Network, theta: np.ndarray) -> np.ndarray:
    return net.adjacency * np.cos(theta[None, :] - theta[:, None])


def jacobian(net: Network, k: float, theta) -> np.ndarray:
    theta = _phases(theta)
    if theta.shape != (net.n,):
        raise ShapeError(f"expected {net.n} phases, got shape {theta.shape}")
    jac = k * _cosine_weights(net, theta)
    np.fill_diagonal(jac, -jac.sum(axis=1))
    return jac


def eigen_symmetric(m, vectors: bool = False):
    """Eigenvalues (ascending) of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps over all ``(p, q)`` pairs until the off-diagonal Frobenius norm is
    below ``1e-12 * ||M||_F`` or 100 sweeps have run. With ``vectors=True``
    returns ``(values, Q)`` where the columns of ``Q`` are the matching
    eigenvectors.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"square matrix required, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-12 * scale):
        raise PreconditionError("matrix is not symmetric")
    n = a.shape[0]
    a = 0.5 * (a + a.T)
    q_mat = np.eye(n)
    target = JACOBI_TOL * np.linalg.norm(a)

    for _ in range(JACOBI_MAX_SWEEPS):
        off = math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < abs(diff) * 1e-36:
                    t = apq / diff
                else:
                    tau = diff / (2.0 * apq)
                    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                row_p, row_q = a[p].copy(), a[q].copy()
                a[p] = c * row_p - s * row_q
                a[q] = s * row_p + c * row_q
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, q] = a[q, p] = 0.0
                if vectors:
                    vp, vq = q_mat[:, p].copy(), q_mat[:, q].copy()
                    q_mat[:, p] = c * vp - s * vq
                    q_mat[:, q] = s * vp + c * vq

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    if vectors:
        return values[order], q_mat[:, order]
    return values[order]


def classify(net: Network, k: float, fp: FixedPoint) -> StabilityReport:
    """Classify a fixed point from the spectrum of its linearization.

    The tolerance ``tau = 1e-8 * k * n`` decides which eigenvalues count as
    zero. One zero mode (the rotation) is always expected on a connected
    network.
    """
    if fp.residual_norm >= 1e-8:
        raise PreconditionError(f"not a fixed point: residual {fp.residual_norm:.3e}")
    eig = eigen_symmetric(jacobian(net, k, fp.theta))
    tau = 1e-8 * k * net.n
    zero_modes = int(np.sum(np.abs(eig) < tau))
    if not net.is_connected():
        label = "degenerate"
    elif np.any(eig > tau):
        label = "unstable"
    elif zero_modes == 1 and np.sum(eig < -tau) == net.n - 1:
        label = "stable"
    else:
        label = "marginal"
    return StabilityReport(eigenvalues=eig, zero_modes=zero_modes, classification=label, tau=tau)


def partition_flow_identity(net: Network, state: PhaseState, fp: FixedPoint, subset_A) -> float:
    """Net imbalance of the flow balance across the cut ``(A, B)``.

    Returns ``|A| wbar - sum_{A} omega_i - k sum_{i in A, j in B} A_ij sin(theta_j - theta_i)``,
    which vanishes at every fixed point.
    """
    mask = _subset(net, subset_A)
    if fp.residual_norm >= 1e-8:
        raise PreconditionError(f"not a fixed point: residual {fp.residual_norm:.3e}")
    theta = fp.theta
    sines = net.adjacency * np.sin(theta[None, :] - theta[:, None])
    cross = float(sines[np.ix_(mask, ~mask)].sum())
    wbar = mean_frequency(state.omega)
    return float(mask.sum() * wbar - state.omega[mask].sum() - state.k * cross)


def cut_cosine_sum(net: Network, fp, subset_A) -> CutCertificate:
    mask = _subset(net, subset_A)
    theta = _phases(fp)
    cosines = _cosine_weights(net, theta)
    total = float(cosines[np.ix_(mask, ~mask)].sum())
    return CutCertificate(
        subset_A=tuple(int(i) for i in np.flatnonzero(mask)),
        cut_sum=total,
        certifies_instability=total <= 0.0,
    )


def _exhaustive_min_cut(net: Network, theta: np.ndarray) -> tuple[int, float]:
    """Minimum cut sum over all bipartitions, with node 0 always in A.

    Subsets are encoded as bit masks (bit i set when node i is in A); ties go
    to the smallest encoding.
    """
    n = net.n
    if not net.edges:
        return 1, 0.0
    ei = np.array([e[0] for e in net.edges])
    ej = np.array([e[1] for e in net.edges])
    w = np.cos(theta[ei] - theta[ej])
    shifts = np.arange(n - 1, dtype=np.int64)
    total = (1 << (n - 1)) - 1  # masks over nodes 1..n-1, excluding the all-ones mask
    best_code, best_val = -1, math.inf
    for lo in range(0, total, _CHUNK):
        m = np.arange(lo, min(lo + _CHUNK, total), dtype=np.int64)
        side = np.ones((m.size, n), dtype=bool)
        side[:, 1:] = ((m[:, None] >> shifts) & 1).astype(bool)
        vals = (side[:, ei] != side[:, ej]) @ w
        idx = int(np.argmin(vals))
        if vals[idx] < best_val:
            best_val, best_code = float(vals[idx]), int((m[idx] << 1) | 1)
    return best_code, best_val


def _greedy_descent(weights: np.ndarray, side: np.ndarray) -> np.ndarray:
    """Move single nodes across the cut while the cut sum decreases."""
    s = np.where(side, 1.0, -1.0)
    n = s.size
    while True:
        gain = s * (weights @ s)  # change in cut sum from flipping each node
        in_a = int((s > 0).sum())
        # flipping must keep both sides nonempty
        if in_a == 1:
            gain[s > 0] = np.inf
        if in_a == n - 1:
            gain[s < 0] = np.inf
        v = int(np.argmin(gain))
        if not gain[v] < -1e-15:
            return s > 0
        s[v] = -s[v]


def find_unstable_cut(
    net: Network,
    fp,
    mode: str = "exhaustive",
    seed: int = 0,
) -> CutCertificate | None:
    """Search bipartitions for a non-positive cut-cosine sum.

    ``mode="exhaustive"`` scans all ``2**(n-1) - 1`` bipartitions (n <= 20)
    and returns the minimum if it is non-positive. ``mode="heuristic"``
    tries every singleton cut, then greedy single-node moves from the best
    singleton and from 50 seeded random partitions. ``None`` from the
    heuristic is not evidence of stability.
    """
    theta = _phases(fp)
    n = net.n
    if n < 2:
        return None
    if mode == "exhaustive":
        if n > EXHAUSTIVE_MAX_N:
            raise InvalidSizeError(f"exhaustive cut search limited to n <= {EXHAUSTIVE_MAX_N}, got {n}")
        code, _ = _exhaustive_min_cut(net, theta)
        cert = cut_cosine_sum(net, theta, [i for i in range(n) if code >> i & 1])
        return cert if cert.certifies_instability else None
    if mode != "heuristic":
        raise ValueError(f"unknown mode {mode!r}")

    weights = _cosine_weights(net, theta)
    np.fill_diagonal(weights, 0.0)
    singles = weights.sum(axis=1)
    best = cut_cosine_sum(net, theta, [int(np.argmin(singles))])
    rng = np.random.Generator(np.random.Philox(key=seed))
    starts = [np.arange(n) == int(np.argmin(singles))]
    for _ in range(HEURISTIC_RESTARTS):
        side = rng.random(n) < 0.5
        if side.all() or not side.any():
            side[rng.integers(n)] ^= True
        starts.append(side)
    for side in starts:
        side = _greedy_descent(weights, side)
        cert = cut_cosine_sum(net, theta, np.flatnonzero(side))
        if cert.cut_sum < best.cut_sum:
            best = cert
    return best if best.certifies_instability else None


def perturbation_probe(
    net: Network,
    state: PhaseState,
    fp: FixedPoint,
    subset_A,
    eps: float,
) -> ProbeRecord:
    """Compare the exact rate imbalance after a cut-shaped push with its first-order form.

    Nodes in ``A`` are raised by ``eps*|B|`` and nodes in ``B`` lowered by
    ``eps*|A|`` (the mean phase is unchanged). ``lhs`` is
    ``|A| wbar - sum_{i in A} dtheta_i/dt`` evaluated exactly, ``rhs`` is
    ``k n eps * cut_sum``. Their ratio tends to 1 with an ``O(eps**2)`` error.
    """
    mask = _subset(net, subset_A)
    if eps < 0:
        raise PreconditionError(f"eps must be non-negative, got {eps}")
    n_a = int(mask.sum())
    n_b = net.n - n_a
    theta0 = fp.theta + np.where(mask, eps * n_b, -eps * n_a)
    rates = kuramoto_rhs(net, state.with_theta(theta0))
    lhs = n_a * mean_frequency(state.omega) - float(rates[mask].sum())
    cut = cut_cosine_sum(net, fp, np.flatnonzero(mask)).cut_sum
    rhs = state.k * net.n * eps * cut
    if rhs == 0.0:
        return ProbeRecord(lhs=lhs, rhs=rhs, ratio=None, degenerate=True)
    return ProbeRecord(lhs=lhs, rhs=rhs, ratio=lhs / rhs, degenerate=False)


def centroid_singleton_cut(net: Network, fp) -> CentroidCut:
    """Pick a node whose singleton cut is non-positive using the phase centroid.

    Valid for networks of minimum degree at least ``n - 2`` and a non-zero
    fixed point. With ``S = sum_j exp(i theta_j)`` any node lying in the half
    plane opposite ``S`` has a non-positive singleton cut; when ``S`` vanishes
    every node does.
    """
    theta = _phases(fp)
    n = net.n
    if net.min_degree < n - 2:
        raise ScopeError(f"minimum degree {net.min_degree} is below n-2 = {n - 2}")
    if is_zero_fixed_point(theta):
        raise PreconditionError("centroid argument needs a non-zero fixed point")
    sx, sy = float(np.cos(theta).sum()), float(np.sin(theta).sum())
    magnitude = math.hypot(sx, sy)
    if magnitude < 1e-9:
        weights = _cosine_weights(net, theta)
        np.fill_diagonal(weights, 0.0)
        m = int(np.argmin(weights.sum(axis=1)))
    else:
        m = int(np.argmin(np.cos(theta) * sx + np.sin(theta) * sy))
    cut = cut_cosine_sum(net, theta, [m]).cut_sum
    return CentroidCut(node=m, cut_sum=cut, centroid_magnitude=magnitude)
