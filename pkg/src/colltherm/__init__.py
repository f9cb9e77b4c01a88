"""Collisional quantum thermometry at desk scale.

A probe qubit couples to a thermal bath and to a stream of identically
prepared ancilla qubits; temperature information accumulates in the
correlated ancilla chain. This package builds the steady-state chain
states exactly and evaluates quantum and classical Fisher information
of temperature, together with the closed forms that serve as oracles.
"""

from .chain import (
    ChainConfig,
    ExceedsAncillaCap,
    UnsupportedPrep,
    build_chain_register,
    build_chain_state,
    pair_coherence,
    single_ancilla_population,
)
from .estimation import (
    DerivativeResult,
    DimensionMismatch,
    NonSmooth,
    Povm,
    QfiResult,
    StepTooLarge,
    SupportLeak,
    analytic_f1_ratio,
    analytic_pair_ratio_weak,
    classical_fisher_information,
    params_for_occupation,
    qfi,
    qfi_chain,
    qfi_over_thermal,
    temperature_derivative,
)
from .linalg import (
    ComplexMatrix,
    DensityMatrix,
    EigensolverError,
    HermiticityViolation,
    NegativityViolation,
    StateValidationError,
    TraceViolation,
    hermitian_eig,
    kron,
    partial_trace,
    partial_trace_mat,
    validate_state,
)
from .model import (
    EXCITED,
    GROUND,
    PLUS,
    AncillaPrep,
    ModelParams,
    apply_thermal_map,
    mean_occupation,
    partial_swap_unitary,
    thermal_fisher_information,
    thermal_map_mat,
    thermal_qubit_state,
)
from .steady import (
    DegenerateFixedPoint,
    Superoperator,
    build_stroboscopic_channel,
    fixed_point,
    unvectorize,
    vectorize,
)

__version__ = "0.1.0"

__all__ = [
    "AncillaPrep",
    "ChainConfig",
    "ComplexMatrix",
    "DegenerateFixedPoint",
    "DensityMatrix",
    "DerivativeResult",
    "DimensionMismatch",
    "EXCITED",
    "EigensolverError",
    "ExceedsAncillaCap",
    "GROUND",
    "HermiticityViolation",
    "ModelParams",
    "NegativityViolation",
    "NonSmooth",
    "PLUS",
    "Povm",
    "QfiResult",
    "StateValidationError",
    "StepTooLarge",
    "Superoperator",
    "SupportLeak",
    "TraceViolation",
    "UnsupportedPrep",
    "analytic_f1_ratio",
    "analytic_pair_ratio_weak",
    "apply_thermal_map",
    "build_chain_register",
    "build_chain_state",
    "build_stroboscopic_channel",
    "classical_fisher_information",
    "fixed_point",
    "hermitian_eig",
    "kron",
    "mean_occupation",
    "pair_coherence",
    "params_for_occupation",
    "partial_swap_unitary",
    "partial_trace",
    "partial_trace_mat",
    "qfi",
    "qfi_chain",
    "qfi_over_thermal",
    "single_ancilla_population",
    "temperature_derivative",
    "thermal_fisher_information",
    "thermal_map_mat",
    "thermal_qubit_state",
    "unvectorize",
    "validate_state",
    "vectorize",
]
