"""Kraus-operator models of a damped harmonic oscillator on truncated Fock spaces."""

from . import analytics, channels, encodings, fock, oracle, special
from .channels import (
    ChannelParams,
    KrausFamily,
    amp_family,
    amp_family_one_photon,
    amp_kraus,
    apply,
    apply_two_mode,
    conditional_one_photon,
    dephase,
    phase_family,
    phase_kraus,
    regroup_phase_qubit,
)
from .encodings import Encoding, bell_state, cat_bell_state, cat_state, fock_bell_state
from .errors import (
    BKrausError,
    ConvergenceError,
    DegenerateEncodingError,
    DimensionError,
    IntegrationError,
    TruncationError,
    UndefinedConditionalStateError,
)
from .fock import (
    DensityOperator,
    FockVector,
    Operator,
    Tolerances,
    coherent_state,
    fidelity_pure,
    number_state,
    outer,
    tensor,
)

__all__ = [
    "analytics",
    "channels",
    "encodings",
    "fock",
    "oracle",
    "special",
    "ChannelParams",
    "KrausFamily",
    "amp_family",
    "amp_family_one_photon",
    "amp_kraus",
    "apply",
    "apply_two_mode",
    "conditional_one_photon",
    "dephase",
    "phase_family",
    "phase_kraus",
    "regroup_phase_qubit",
    "Encoding",
    "bell_state",
    "cat_bell_state",
    "cat_state",
    "fock_bell_state",
    "BKrausError",
    "ConvergenceError",
    "DegenerateEncodingError",
    "DimensionError",
    "IntegrationError",
    "TruncationError",
    "UndefinedConditionalStateError",
    "DensityOperator",
    "FockVector",
    "Operator",
    "Tolerances",
    "coherent_state",
    "fidelity_pure",
    "number_state",
    "outer",
    "tensor",
]
