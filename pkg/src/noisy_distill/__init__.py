"""Exact simulation of recurrence entanglement distillation under local Pauli noise."""
from .classes import (
    DEFAULT_GRID,
    DistillableInterval,
    class_interval,
    classify_all,
    classify_by_curve,
    classify_by_rule,
    depolarization_decomposition,
    distillable_interval,
    measurement_noise_curves,
)
from .engine import (
    ClassFidelityTerms,
    DistillOutcome,
    analytic_class_terms,
    fidelity_increment,
    ideal_round,
    iterate_protocol,
    noisy_round_analytic,
    noisy_round_noisy_measurement,
    noisy_round_oracle,
    single_error_fidelity,
)
from .errors import (
    DimensionMismatch,
    DistillError,
    EmptyInterval,
    InvalidState,
    NonUnitary,
    OutOfRange,
    Unclassified,
    ZeroSuccessProbability,
)
from .noise import (
    NOISE_TYPES,
    NoiseDistribution,
    PauliChannel,
    absorb_measurement_noise,
    compose_distributions,
    depolarizing_distribution,
    error_operator,
    pauli_matrix,
    self_duality_check,
    single_type_distribution,
)
from .states import bilateral_cnot, post_selector, twirl, werner_state

__version__ = "0.1.0"
