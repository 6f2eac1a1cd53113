"""Entropy bounds at fixed index of coincidence for symmetric quantum measurements."""

from .probdist import (
    ProbDist,
    TwoLevelParams,
    extremal_x,
    extremal_y,
    index_of_coincidence,
    oracle_extremal,
    renyi_entropy,
    theorem1_bounds,
    two_level_dist,
)
from .quantum import (
    DensityMatrix,
    MeasurementSet,
    Povm,
    conjecture_spectrum_state,
    gsic,
    maximally_mixed,
    measure,
    mub_set,
    mum_set,
    random_density_fixed_purity,
    random_density_hs,
    sic_set,
)
from .util import ConvergenceError, DomainError

__version__ = "0.1.0"

__all__ = [
    "ProbDist",
    "TwoLevelParams",
    "extremal_x",
    "extremal_y",
    "index_of_coincidence",
    "oracle_extremal",
    "renyi_entropy",
    "theorem1_bounds",
    "two_level_dist",
    "DensityMatrix",
    "MeasurementSet",
    "Povm",
    "conjecture_spectrum_state",
    "gsic",
    "maximally_mixed",
    "measure",
    "mub_set",
    "mum_set",
    "random_density_fixed_purity",
    "random_density_hs",
    "sic_set",
    "DomainError",
    "ConvergenceError",
    "__version__",
]
