"""Generalized bunching probabilities of partially distinguishable bosons."""

__version__ = "0.1.0"

from ._errors import InternalConsistencyError, ValidationError
from .bunching import (
    ExperimentConfig,
    IrrepDistribution,
    StateSpec,
    aux_irrep_distribution,
    bunch_partially_labelled_direct,
    bunch_probability,
    lieb_scan,
    mean_bunch_closed,
    mean_bunch_mc,
    refinement_monotonicity_check,
    schur_convexity_probe,
    subset_avg_estimator,
)
from .fock_oracle import aux_state, extract_q, oracle_bunch, oracle_bunch_perm_sum, oracle_visible_distribution
from .linalg import backend_name, gram_matrix, haar_unitary, normalized_immanant, permanent, random_psd
from .partitions import Partition, enumerate_partitions, kostka
from .symfunc import schur_poly, sw_distribution
from .symgroup import character, character_table
from .thermometry import EnergySpectrum, gibbs, invert_temperature, thermo_curve

__all__ = [
    "__version__",
    "InternalConsistencyError",
    "ValidationError",
    "ExperimentConfig",
    "IrrepDistribution",
    "StateSpec",
    "aux_irrep_distribution",
    "bunch_partially_labelled_direct",
    "bunch_probability",
    "lieb_scan",
    "mean_bunch_closed",
    "mean_bunch_mc",
    "refinement_monotonicity_check",
    "schur_convexity_probe",
    "subset_avg_estimator",
    "aux_state",
    "extract_q",
    "oracle_bunch",
    "oracle_bunch_perm_sum",
    "oracle_visible_distribution",
    "backend_name",
    "gram_matrix",
    "haar_unitary",
    "normalized_immanant",
    "permanent",
    "random_psd",
    "Partition",
    "enumerate_partitions",
    "kostka",
    "schur_poly",
    "sw_distribution",
    "character",
    "character_table",
    "EnergySpectrum",
    "gibbs",
    "invert_temperature",
    "thermo_curve",
]
