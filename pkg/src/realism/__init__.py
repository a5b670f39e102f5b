"""Realism and irrealism quantifiers for quantum and finite GPT states."""
from .channels import (
    BipartiteState,
    dephase,
    dephase_bloch,
    dephase_local,
    local_decomposition,
    sequential_dephase,
)
from .errors import DomainError, InvalidStateError, NumericError, RealismError
from .quantifiers import (
    INFINITE,
    DivergenceResult,
    RobustnessResult,
    dephased_kl_identity_residual,
    divergence_of_realism,
    irreality,
    kl_divergence,
    probe_divergence,
    probe_residual,
    quantum_relative_entropy,
    qubit_robustness_closed_form,
    realism_check_quantum,
    robustness_of_irrealism,
    von_neumann_entropy,
)
from .states import (
    DensityMatrix,
    GeneratorBasis,
    ProjectiveMeasurement,
    bloch_to_density,
    born_probabilities,
    computational_measurement,
    density_to_bloch,
    measurement_bloch_frame,
    measurement_from_unitary,
    probability_distribution,
    qubit_axis_measurement,
    qubit_state,
    random_rank1_measurement,
    random_state,
    su_generators,
)

__version__ = "0.1.0"
