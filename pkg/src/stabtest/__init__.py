"""Gowers-3 norms, Weyl spectra, tolerant stabilizer testing and stabilizer covers."""

from .cover import (
    CanonicalForm,
    StabilizerCover,
    canonical_form,
    fidelity_from_subgroup,
    greedy_subgroup,
    heavy_set,
    purity_bound_check,
    stabilizer_cover,
)
from .errors import (
    ConfigurationError,
    DimensionError,
    InternalConsistencyError,
    NumericalIntegrityError,
    PreconditionError,
    ResourceGuardError,
)
from .f2 import (
    F2Subspace,
    PauliIndex,
    SymplecticMap,
    complete_to_lagrangian,
    enumerate_lagrangians,
    rref_basis,
    symplectic_form,
    symplectic_gram_schmidt,
)
from .harness import StateSpec, generate_state, run_sweep
from .sampler import (
    SampleChannel,
    TesterVerdict,
    bell_difference_sample,
    estimate_uniformity,
    pauli_squared_sample,
    tolerant_test,
)
from .spectra import (
    StabilizerWitness,
    WeylDistribution,
    WeylSpectrum,
    fact1_certificate,
    gowers_norm_pow,
    stabilizer_fidelity_exact,
    weyl_distribution,
    weyl_spectrum,
    weyl_uniformity,
)
from .weyl import QuantumState, apply_weyl, weyl_expectation, weyl_product_phase

__version__ = "0.1.0"
