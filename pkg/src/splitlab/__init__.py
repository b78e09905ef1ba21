"""splitlab: degeneracy splitting of ground-subspace codes under local perturbations.

The package quantifies how strongly a perturbation splits the degenerate
ground subspace of a gapped hamiltonian, constructs worst-case single-site
perturbations for commuting two-local models, and predicts and simulates the
dephasing those perturbations induce.
"""

from .code_space import CodeSubspace, full_space_code, ground_subspace, project_onto_code
from .dynamics import (
    BathModel,
    CoherenceReport,
    DephasingProfile,
    NoiseDistribution,
    bath_embedding_check,
    characteristic_function,
    coherence_time,
    dephasing_profile,
    dephasing_time_series,
    evolve_mixture,
    fidelity_bound_check,
    gap_bound_check,
    predict_dephasing,
    worst_code_state,
)
from .models import (
    LocalModel,
    PerturbationSpec,
    QuditSystem,
    block_sites,
    embed_operator,
    four_two_two_model,
    model_from_json,
    model_to_json,
    pauli_string_matrix,
    random_commuting_model,
    repetition_model,
    stabilizer_hamiltonian,
    two_local_model,
)
from .no_hiding import (
    AttackReport,
    NoHidingWitness,
    no_hiding_witness,
    pair_side_norms,
    subspace_pair_score_scan,
    two_site_attack,
)
from .operators import (
    DensityOp,
    HermOp,
    Ket,
    Projector,
    embed,
    fidelity,
    helstrom,
    herm_eig,
    herm_propagator,
    operator_norm,
    partial_trace,
    tensor,
    trace_norm,
)
from .splitting import IdsReport, ids, kl_check, worst_single_site_ascent
from .structure import (
    GroundFactorization,
    StructureError,
    commuting_model_attack,
    detect_multi_sector,
    factor_ground_projector,
    multi_sector_attack,
    operator_schmidt,
    sector_projectors,
    site_algebra,
)
from .verify import CheckResult, run_battery

__version__ = "0.1.0"

__all__ = [
    "AttackReport",
    "BathModel",
    "CheckResult",
    "CodeSubspace",
    "CoherenceReport",
    "DensityOp",
    "DephasingProfile",
    "GroundFactorization",
    "HermOp",
    "IdsReport",
    "Ket",
    "LocalModel",
    "NoHidingWitness",
    "NoiseDistribution",
    "PerturbationSpec",
    "Projector",
    "QuditSystem",
    "StructureError",
    "bath_embedding_check",
    "block_sites",
    "characteristic_function",
    "coherence_time",
    "commuting_model_attack",
    "dephasing_profile",
    "dephasing_time_series",
    "detect_multi_sector",
    "embed",
    "embed_operator",
    "evolve_mixture",
    "factor_ground_projector",
    "fidelity",
    "fidelity_bound_check",
    "four_two_two_model",
    "full_space_code",
    "gap_bound_check",
    "ground_subspace",
    "helstrom",
    "herm_eig",
    "herm_propagator",
    "ids",
    "kl_check",
    "model_from_json",
    "model_to_json",
    "multi_sector_attack",
    "no_hiding_witness",
    "operator_norm",
    "operator_schmidt",
    "pair_side_norms",
    "partial_trace",
    "pauli_string_matrix",
    "predict_dephasing",
    "project_onto_code",
    "random_commuting_model",
    "repetition_model",
    "run_battery",
    "sector_projectors",
    "site_algebra",
    "stabilizer_hamiltonian",
    "subspace_pair_score_scan",
    "tensor",
    "trace_norm",
    "two_local_model",
    "two_site_attack",
    "worst_code_state",
    "worst_single_site_ascent",
    "__version__",
]
