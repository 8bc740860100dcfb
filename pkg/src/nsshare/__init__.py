"""Sequential sharing of genuine tripartite nonlocality.

Exact density-matrix simulation of an Alice/Bob/many-Charlies protocol on
generalized GHZ states, evaluation of the five-correlator inequality per
round, and independent certification of genuine nonsignaling nonlocality by
linear-programming membership in the hybrid local-nonlocal polytope.
"""

from .behavior_io import export_behavior, import_behavior
from .certifier import (
    DecompositionResult,
    NoSignalingReport,
    VertexProvenance,
    VertexSet,
    check_no_signaling,
    hybrid_vertices,
    lp_feasible,
)
from .engine import (
    BehaviorTable,
    SequentialScenario,
    behavior,
    luders_update,
    no_signaling_residual,
    run_sequence,
)
from .inequality import (
    NS2_BOUND,
    NS2Report,
    SignalingTableError,
    closed_form_ns2,
    compare,
    correlator,
    is_violation,
    ns2_relabelings,
    ns2_value,
)
from .linalg import (
    BlochEffect,
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    adjoint,
    bloch_operator,
    effect_matrix,
    effect_sqrt,
    is_hermitian,
    kron,
    multiply,
    trace,
)
from .measurements import (
    GammaSchedule,
    PartySetting,
    alice_bob_setting,
    charlie_setting,
    gamma_sequence,
    validity_region,
)
from .states import (
    DensityReport,
    TripartiteState,
    build_gghz,
    expectation,
    jacobi_eigenvalues,
    maximally_mixed,
    validate_density,
)

__version__ = "0.1.0"
