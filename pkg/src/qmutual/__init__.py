"""Quantum mutual entropy, pseudo-mutual entropy and channel capacities.

All entropies are in nats.
"""

from . import capacity, channels, checks, cqc, entropy, errors, linalg, mutual, scenario, search, states
from .capacity import (
    CapacityReport,
    ChainReport,
    ChainScenario,
    CodingFamily,
    DecodingFamily,
    DistributionSet,
    StateSet,
    blahut_arimoto,
    coding_capacity,
    coding_decoding_capacity,
    cqc_capacity,
    cqc_mutual,
    holevo_bound,
    pseudo_capacity,
    quantum_capacity,
    verify_chains,
)
from .channels import (
    ClassicalChannel,
    MeasurementDecoding,
    QuantumChannel,
    QuantumCoding,
    amplitude_damping,
    apply,
    basis_decoding,
    bit_flip,
    channel_zoo,
    compose,
    decode,
    dephasing,
    depolarizing,
    embed_classical,
    from_choi,
    identity_channel,
    kraus_to_choi,
    phase_flip,
    random_channel,
    trivial_decoding,
)
from .checks import check_suite
from .cqc import CqcPipeline, MessageEnsemble, build_pipeline, induced_classical_channel, trace_pipeline
from .entropy import classical_mutual, classical_relative, shannon, umegaki_relative, von_neumann
from .mutual import (
    classical_input_mutual,
    compound_form,
    compound_state,
    mutual_entropy,
    mutual_for_decomposition,
    mutual_orthogonal,
    pseudo_mutual_entropy,
    shannon_form,
)
from .scenario import RunReport, Scenario, parse_scenario, run, serialize_scenario
from .search import SearchParams
from .states import (
    DensityMatrix,
    OrthogonalDecomposition,
    SchattenDecomposition,
    canonical_schatten,
    diagonal_state,
    maximally_mixed,
    pure_state,
    random_density,
    schatten_decomposition,
    spectral_decomposition,
    validate_density,
)

__version__ = "0.1.0"
