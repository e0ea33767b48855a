"""Learning local Hamiltonians from Gibbs-state measurements at desk scale."""

from .geometry import (
    GeometrySpec,
    InteractionGraph,
    ball_term_ids,
    build_graph,
    patch_term_ids,
    surface_count,
    term_distance,
    truncate_to_ball,
    volume_count,
)
from .identify import (
    QInputs,
    QValue,
    SharedBasisEngine,
    assemble_q_operator,
    high_frequency_residual,
    identifiability_lhs,
    q_frequency_exact,
    q_time_direct,
    q_time_quadrature,
    stability_bounds,
)
from .kernels import KernelParams, QuadratureGrid, choose_truncation
from .learner import (
    BudgetExceeded,
    EpsilonNet,
    LearnConfig,
    LearnReport,
    coefficient_error,
    enumerate_candidates,
    iterate_once,
    learn_iterative,
    learn_simple,
    local_closeness_sides,
    make_net,
    score_candidate,
)
from .measure import MeasurementPlan, ObservableJob, build_plan, run_plan, sample_expectation
from .pauli import HamiltonianSpec, PauliString, pauli_commutator
from .spectral import (
    BohrDecomposition,
    GibbsState,
    SpectralData,
    bohr_decompose,
    gibbs_state,
    heisenberg_evolve,
    kms_inner_product,
    kms_norm,
    operator_fourier_transform,
    tau_norm,
)

__version__ = "0.1.0"

__all__ = [
    "GeometrySpec",
    "InteractionGraph",
    "ball_term_ids",
    "build_graph",
    "patch_term_ids",
    "surface_count",
    "term_distance",
    "truncate_to_ball",
    "volume_count",
    "QInputs",
    "QValue",
    "SharedBasisEngine",
    "assemble_q_operator",
    "high_frequency_residual",
    "identifiability_lhs",
    "q_frequency_exact",
    "q_time_direct",
    "q_time_quadrature",
    "stability_bounds",
    "KernelParams",
    "QuadratureGrid",
    "choose_truncation",
    "BudgetExceeded",
    "EpsilonNet",
    "LearnConfig",
    "LearnReport",
    "coefficient_error",
    "enumerate_candidates",
    "iterate_once",
    "learn_iterative",
    "learn_simple",
    "local_closeness_sides",
    "make_net",
    "score_candidate",
    "MeasurementPlan",
    "ObservableJob",
    "build_plan",
    "run_plan",
    "sample_expectation",
    "HamiltonianSpec",
    "PauliString",
    "pauli_commutator",
    "BohrDecomposition",
    "GibbsState",
    "SpectralData",
    "bohr_decompose",
    "gibbs_state",
    "heisenberg_evolve",
    "kms_inner_product",
    "kms_norm",
    "operator_fourier_transform",
    "tau_norm",
    "__version__",
]
