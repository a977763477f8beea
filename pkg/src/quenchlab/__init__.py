"""Numerical laboratory for closed-system quantum quenches on spin chains.

Exact diagonalization of transverse-and-longitudinal-field Ising chains, exact
dephasing dynamics of expectation values in the eigenbasis, Gaussian analysis
of the occupied density of states, slow versus typical observables and their
relaxation times, entanglement-entropy growth across cuts, and correlation
light cones. Everything targets desk scale: full spectra up to 14 sites.
"""
from .core import (
    LOCAL_DIM,
    MAX_SITES,
    DensityMatrix,
    HilbertSpec,
    PureState,
    SiteRegion,
    apply,
    partial_trace,
    product_state,
)
from .dynamics import (
    TimeGrid,
    TimeSeries,
    default_relax_grid,
    default_slow_grid,
    diagonal_ensemble,
    evolve_spectral,
    expectation_series,
    krylov_evolve,
    linear_grid,
)
from .entanglement import (
    CorrelationFront,
    CutGrowth,
    EntanglementProfile,
    GrowthFit,
    entropy,
    entropy_scan,
    fit_front,
    growth_fit,
    light_cone,
)
from .errors import (
    ConvergenceFailure,
    DegenerateWidth,
    DimensionMismatch,
    NoFrontDetected,
    NonNormalizedLocal,
    QuenchError,
    RegionOutOfBounds,
    SiteOutOfBounds,
    TooFewOccupied,
    ValidationFailed,
)
from .hamiltonian import (
    ChainParams,
    HermitianOperator,
    build_goe,
    build_local_chain,
    haar_unitary,
    scramble,
)
from .observables import (
    ObservableMatrix,
    RelaxationReport,
    identity_observable,
    local_observable,
    relaxation_time,
    slow_observable,
    to_eigenbasis,
    typical_observable,
)
from .spectral import (
    DEFAULT_WEIGHT_FLOOR,
    EigenSystem,
    GaussianFit,
    SpectralData,
    Timescales,
    diagonalize,
    dos_fit,
    occupied_spectrum,
    timescales,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "LOCAL_DIM",
    "MAX_SITES",
    "DEFAULT_WEIGHT_FLOOR",
    "QuenchError",
    "DimensionMismatch",
    "NonNormalizedLocal",
    "RegionOutOfBounds",
    "SiteOutOfBounds",
    "DegenerateWidth",
    "TooFewOccupied",
    "ConvergenceFailure",
    "NoFrontDetected",
    "ValidationFailed",
    "HilbertSpec",
    "PureState",
    "SiteRegion",
    "DensityMatrix",
    "product_state",
    "apply",
    "partial_trace",
    "ChainParams",
    "HermitianOperator",
    "build_local_chain",
    "haar_unitary",
    "scramble",
    "build_goe",
    "EigenSystem",
    "SpectralData",
    "Timescales",
    "GaussianFit",
    "diagonalize",
    "occupied_spectrum",
    "timescales",
    "dos_fit",
    "TimeGrid",
    "TimeSeries",
    "linear_grid",
    "default_relax_grid",
    "default_slow_grid",
    "evolve_spectral",
    "expectation_series",
    "diagonal_ensemble",
    "krylov_evolve",
    "ObservableMatrix",
    "RelaxationReport",
    "slow_observable",
    "typical_observable",
    "local_observable",
    "identity_observable",
    "to_eigenbasis",
    "relaxation_time",
    "EntanglementProfile",
    "CutGrowth",
    "GrowthFit",
    "CorrelationFront",
    "entropy",
    "entropy_scan",
    "growth_fit",
    "fit_front",
    "light_cone",
]
