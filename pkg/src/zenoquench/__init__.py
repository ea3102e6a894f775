"""zenoquench: exact single-excitation dynamics of a two-level emitter in a
coupled-resonator array under piecewise-constant coupling quenches."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    ConvergenceFailure,
    DegenerateFitError,
    InvalidValueError,
    MissingKeyError,
)
from .experiments import (
    FreeDecayResult,
    SingleQuenchResult,
    SweepRow,
    ZenoRunResult,
    classify_zeno,
    run_free_decay,
    run_periodic_quench,
    run_single_quench,
    sweep,
)
from .model import (
    BandInfo,
    QuenchProtocol,
    StateVector,
    SystemParams,
    assemble_hamiltonian,
    band_info,
    build_params,
    protocol_segments,
)
from .observables import (
    BoundStateReport,
    RateSeries,
    ZenoFit,
    bound_state_analysis,
    concurrence_qubit_site0,
    decay_rates,
    fit_zeno_time,
    ideal_measurement_survival,
    site_populations,
    survival_probability,
)
from .propagator import (
    Eigensystem,
    Trajectory,
    amplitudes_at,
    eig_sym,
    evolve_segment,
    ideal_measure,
    propagate,
)

__all__ = [
    "BandInfo",
    "BoundStateReport",
    "ConfigError",
    "ConvergenceFailure",
    "DegenerateFitError",
    "Eigensystem",
    "FreeDecayResult",
    "InvalidValueError",
    "MissingKeyError",
    "QuenchProtocol",
    "RateSeries",
    "SingleQuenchResult",
    "StateVector",
    "SweepRow",
    "SystemParams",
    "Trajectory",
    "ZenoFit",
    "ZenoRunResult",
    "amplitudes_at",
    "assemble_hamiltonian",
    "band_info",
    "bound_state_analysis",
    "build_params",
    "classify_zeno",
    "concurrence_qubit_site0",
    "decay_rates",
    "eig_sym",
    "evolve_segment",
    "fit_zeno_time",
    "ideal_measure",
    "ideal_measurement_survival",
    "propagate",
    "protocol_segments",
    "run_free_decay",
    "run_periodic_quench",
    "run_single_quench",
    "site_populations",
    "survival_probability",
    "sweep",
]
