"""Open-system-like qubit maps generated by unitary evolution of one qutrit."""

from .channels import (
    AmplitudeDamping,
    PhaseDamping,
    apply_named_channel,
    dilation_oracle,
    iterate_channel,
    transform_closed_form,
)
from .dynamics import (
    LevelConfig,
    RelaxationRates,
    build_hamiltonian,
    dark_state,
    evolve,
    prepare_sigma,
    relaxation_term,
)
from .extraction import extract, extract_all, partial_trace_oracle, slot_entropy
from .matcore import conjugate, eigenvalues_hermitian, minors
from .realizations import (
    quasi_unitary,
    realization_catalog,
    reduced_unitary,
    small_time_expansion,
    verify_realization,
)
from .states import (
    SigmaFamily,
    embed,
    is_ppt_separable,
    make_sigma,
    random_sigma,
    random_state,
    random_unitary,
    validate,
)
from .tomography import (
    ProbabilityTriple,
    coin_shannon,
    coin_tsallis,
    evolved_entropy,
    from_probabilities,
    probability_evolution,
    to_probabilities,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeDamping",
    "apply_named_channel",
    "build_hamiltonian",
    "coin_shannon",
    "coin_tsallis",
    "conjugate",
    "dark_state",
    "dilation_oracle",
    "eigenvalues_hermitian",
    "embed",
    "evolve",
    "evolved_entropy",
    "extract",
    "extract_all",
    "from_probabilities",
    "is_ppt_separable",
    "iterate_channel",
    "LevelConfig",
    "make_sigma",
    "minors",
    "partial_trace_oracle",
    "PhaseDamping",
    "prepare_sigma",
    "probability_evolution",
    "ProbabilityTriple",
    "quasi_unitary",
    "random_sigma",
    "random_state",
    "random_unitary",
    "realization_catalog",
    "reduced_unitary",
    "relaxation_term",
    "RelaxationRates",
    "SigmaFamily",
    "slot_entropy",
    "small_time_expansion",
    "to_probabilities",
    "transform_closed_form",
    "validate",
    "verify_realization",
]
