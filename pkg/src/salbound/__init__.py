"""Rigorous energy bounds for semirelativistic N-boson systems.

Units: hbar = c = 1 throughout.
"""

__version__ = "0.1.0"

from .bounds import (
    BoundResult,
    BoundSet,
    ConjectureStatus,
    LinearBoundTable,
    ProblemSpec,
    RatioTable,
    UpperBoundResult,
    compute_bounds,
    conjecture_status,
    conjectured_lower,
    gaussian_upper,
    linear_bound_table,
    lower_n2,
    lower_n3,
    lower_n4,
    ratio_table,
)
from .delta import (
    DeltaStats,
    SymmetrizedGaussianState,
    classify_regime,
    delta_value,
    expectation_delta,
    quadratic_identities_check,
    random_state_corpus,
    regular_tetrahedron,
    sample_momenta,
    tetrahedron_relations,
)
from .jacobi import from_jacobi, jacobi_matrix, to_jacobi
from .potentials import (
    Coulomb,
    CoulombPlusLinear,
    Harmonic,
    Linear,
    PairPotential,
    PotentialParseError,
    PowerLaw,
    parse_potential,
)
from .solver import (
    COULOMB_CRITICAL_COUPLING,
    LINEAR_GROUND_ENERGY,
    ReducedHamiltonian,
    SolverConfig,
    SpectrumResult,
    StabilityError,
    ground_energy,
    kinetic_matrix,
    potential_matrix,
    scaled_energy_linear,
)

__all__ = [
    "BoundResult",
    "BoundSet",
    "COULOMB_CRITICAL_COUPLING",
    "ConjectureStatus",
    "Coulomb",
    "CoulombPlusLinear",
    "DeltaStats",
    "Harmonic",
    "LINEAR_GROUND_ENERGY",
    "Linear",
    "LinearBoundTable",
    "PairPotential",
    "PotentialParseError",
    "PowerLaw",
    "ProblemSpec",
    "RatioTable",
    "ReducedHamiltonian",
    "SolverConfig",
    "SpectrumResult",
    "StabilityError",
    "SymmetrizedGaussianState",
    "UpperBoundResult",
    "classify_regime",
    "compute_bounds",
    "conjecture_status",
    "conjectured_lower",
    "delta_value",
    "expectation_delta",
    "from_jacobi",
    "gaussian_upper",
    "ground_energy",
    "jacobi_matrix",
    "kinetic_matrix",
    "linear_bound_table",
    "lower_n2",
    "lower_n3",
    "lower_n4",
    "parse_potential",
    "potential_matrix",
    "quadratic_identities_check",
    "random_state_corpus",
    "ratio_table",
    "regular_tetrahedron",
    "sample_momenta",
    "scaled_energy_linear",
    "tetrahedron_relations",
    "to_jacobi",
]
