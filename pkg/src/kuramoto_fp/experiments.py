"""Batch harnesses: the near-complete-network theorem and the degree threshold conjecture.

``theorem51_harness`` searches for homogeneous fixed points on networks
whose degrees are all ``n-1`` or ``n-2`` and checks that every non-zero one
is unstable by three independent routes: the Jacobian spectrum, an
exhaustive cut search, and the centroid singleton cut.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import PhaseState
from .errors import InvalidSizeError, ScopeError
from .fixpoint import is_zero_fixed_point, solve_newton
from .network import Network, circulant_network, complete_network, near_complete_network
from .stability import centroid_singleton_cut, classify, cut_cosine_sum, find_unstable_cut

ZERO_CLASS_TOL = 1e-6
CENTROID_TOL = 1e-9


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent counter-based stream for one trial."""
    return np.random.Generator(np.random.Philox(key=(int(seed) << 64) | int(trial)))


def random_phases(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform draw from (-pi, pi]^n."""
    return np.pi - rng.uniform(0.0, 2.0 * np.pi, size=n)


@dataclass
class TrialOutcome:
    trial: int
    status: str  # failed | zero | nonzero
    spectrum_unstable: bool = False
    cut_certified: bool = False
    centroid_certified: bool = False
    classification: str = ""
    min_cut: float = math.nan
    centroid_cut: float = math.nan
    theta: tuple = ()

    @property
    def upheld(self) -> bool:
        return self.spectrum_unstable and self.cut_certified and self.centroid_certified


@dataclass
class Theorem51Report:
    n: int
    trials: int
    seed: int
    graph: str
    newton_failures: int = 0
    zero_class: int = 0
    nonzero: int = 0
    unstable_by_spectrum: int = 0
    unstable_by_cut: int = 0
    unstable_by_centroid: int = 0
    classifications: dict = field(default_factory=dict)
    max_min_cut: float = -math.inf
    max_centroid_cut: float = -math.inf
    uncertified: list = field(default_factory=list)

    @property
    def upheld(self) -> bool:
        return not self.uncertified

    def to_text(self) -> str:
        lines = [
            f"graph: {self.graph}",
            f"n: {self.n}",
            f"trials: {self.trials}",
            f"seed: {self.seed}",
            f"newton_failures: {self.newton_failures}",
            f"zero_class: {self.zero_class}",
            f"nonzero: {self.nonzero}",
            f"unstable_by_spectrum: {self.unstable_by_spectrum}",
            f"unstable_by_cut: {self.unstable_by_cut}",
            f"unstable_by_centroid: {self.unstable_by_centroid}",
        ]
        for label in sorted(self.classifications):
            lines.append(f"classification_{label}: {self.classifications[label]}")
        if self.nonzero:
            lines.append(f"max_min_cut: {self.max_min_cut:.12g}")
            lines.append(f"max_centroid_cut: {self.max_centroid_cut:.12g}")
        lines.append(f"uncertified: {len(self.uncertified)}")
        for out in self.uncertified:
            phases = ",".join(f"{x:.12g}" for x in out.theta)
            lines.append(f"uncertified_trial: {out.trial} {out.classification} {phases}")
        lines.append(f"theorem_upheld: {str(self.upheld).lower()}")
        return "\n".join(lines) + "\n"


def _run_trial(net: Network, seed: int, trial: int) -> TrialOutcome:
    rng = trial_rng(seed, trial)
    state = PhaseState.homogeneous(random_phases(rng, net.n))
    result = solve_newton(net, state)
    if not result.success:
        return TrialOutcome(trial, "failed")
    fp = result.fixed_point
    if is_zero_fixed_point(fp.theta, ZERO_CLASS_TOL):
        return TrialOutcome(trial, "zero")
    report = classify(net, 1.0, fp)
    cert = find_unstable_cut(net, fp, mode="exhaustive")
    centroid = centroid_singleton_cut(net, fp)
    if cert is None:
        # no non-positive cut: record the best available for the report
        min_cut = min(cut_cosine_sum(net, fp, [i]).cut_sum for i in range(net.n))
    else:
        min_cut = cert.cut_sum
    return TrialOutcome(
        trial,
        "nonzero",
        spectrum_unstable=report.classification == "unstable",
        cut_certified=cert is not None,
        centroid_certified=centroid.cut_sum <= CENTROID_TOL,
        classification=report.classification,
        min_cut=min_cut,
        centroid_cut=centroid.cut_sum,
        theta=tuple(float(x) for x in fp.theta),
    )


def _run_block(args) -> list[TrialOutcome]:
    net, seed, trials = args
    return [_run_trial(net, seed, t) for t in trials]


def theorem51_harness(
    n: int,
    trials: int = 1000,
    seed: int = 0,
    non_edges: list[tuple[int, int]] | None = None,
    min_degree: str = "n-1",
    workers: int = 1,
) -> Theorem51Report:
    """Seeded Newton search for non-zero fixed points on a near-complete network.

    ``min_degree="n-1"`` uses the complete network; ``"n-2"`` removes
    ``non_edges`` from it (a near-perfect matching by default). Trial ``t``
    draws its start from an independent stream keyed by ``(seed, t)``, so
    the report does not depend on ``workers``.
    """
    if not 3 <= n <= 12:
        raise InvalidSizeError(f"harness supports 3 <= n <= 12, got {n}")
    if trials < 1:
        raise InvalidSizeError("trials must be >= 1")
    if min_degree == "n-1":
        net, graph = complete_network(n), f"complete K{n}"
    elif min_degree == "n-2":
        net = near_complete_network(n, non_edges)
        removed = sorted(set(((i, j) for i in range(n) for j in range(i + 1, n))) - set(net.edges))
        graph = f"K{n} minus " + " ".join(f"{i}-{j}" for i, j in removed)
    else:
        raise ValueError(f"min_degree must be 'n-1' or 'n-2', got {min_degree!r}")
    if net.min_degree < n - 2:
        raise ScopeError(f"minimum degree {net.min_degree} is below n-2")

    ids = list(range(trials))
    if workers <= 1:
        outcomes = _run_block((net, seed, ids))
    else:
        blocks = [(net, seed, ids[w::workers]) for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = [o for block in pool.map(_run_block, blocks) for o in block]
        outcomes.sort(key=lambda o: o.trial)

    report = Theorem51Report(n=n, trials=trials, seed=seed, graph=graph)
    for out in outcomes:
        if out.status == "failed":
            report.newton_failures += 1
        elif out.status == "zero":
            report.zero_class += 1
        else:
            report.nonzero += 1
            report.unstable_by_spectrum += out.spectrum_unstable
            report.unstable_by_cut += out.cut_certified
            report.unstable_by_centroid += out.centroid_certified
            report.classifications[out.classification] = report.classifications.get(out.classification, 0) + 1
            report.max_min_cut = max(report.max_min_cut, out.min_cut)
            report.max_centroid_cut = max(report.max_centroid_cut, out.centroid_cut)
            if not out.upheld:
                report.uncertified.append(out)
    return report


@dataclass(frozen=True)
class ThresholdRow:
    n: int
    r: int
    ratio: float  # 2r / n

    def to_csv(self) -> str:
        return f"{self.n},{self.r},{self.ratio:.12g}"


def threshold_partial_sum(n: int, r: int) -> float:
    return math.fsum(i * math.cos(2.0 * math.pi * i / n) for i in range(1, r + 1))


def conjecture51_r(n: int) -> ThresholdRow:
    """Smallest r with sum_{i=1..r} i cos(2 pi i / n) <= 0."""
    if n < 3:
        raise InvalidSizeError(f"threshold needs n >= 3, got {n}")
    total = 0.0
    for r in range(1, n + 1):
        total += r * math.cos(2.0 * math.pi * r / n)
        if total <= 0.0:
            return ThresholdRow(n=n, r=r, ratio=2.0 * r / n)
    raise AssertionError(f"partial sums never turned non-positive for n={n}")


def conjecture51_half_cut(n: int, r: int) -> float:
    """Cut-cosine sum across the middle of a ring of half-degree ``r`` at the 1-twisted state."""
    if n % 2:
        raise InvalidSizeError(f"half cut needs even n, got {n}")
    if not 1 <= r <= n // 2:
        raise InvalidSizeError(f"r must lie in [1, {n // 2}], got {r}")
    from .fixpoint import twisted_state

    net = circulant_network(n, range(1, r + 1))
    return cut_cosine_sum(net, twisted_state(n, 1), range(n // 2)).cut_sum
