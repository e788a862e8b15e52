"""Fixed points of the network Kuramoto model and their stability."""

from .errors import (
    FormatError,
    InvalidOffsetError,
    InvalidSizeError,
    KuramotoError,
    PreconditionError,
    ScopeError,
    ShapeError,
)
from .network import (
    Network,
    circulant_network,
    complete_network,
    cycle_network,
    load_edge_list,
    near_complete_network,
)
from .dynamics import (
    MonotonicityReport,
    PhaseState,
    Trajectory,
    integrate_rk4,
    kuramoto_rhs,
    mean_frequency,
    monotonicity_probe,
)
from .fixpoint import (
    FixedPoint,
    NewtonResult,
    is_zero_fixed_point,
    residual,
    solve_newton,
    twisted_state,
)
from .stability import (
    CutCertificate,
    StabilityReport,
    centroid_singleton_cut,
    classify,
    cut_cosine_sum,
    eigen_symmetric,
    find_unstable_cut,
    jacobian,
    partition_flow_identity,
    perturbation_probe,
)
from .experiments import (
    Theorem51Report,
    ThresholdRow,
    conjecture51_half_cut,
    conjecture51_r,
    theorem51_harness,
)

__version__ = "0.1.0"
