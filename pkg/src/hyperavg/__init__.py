"""Simulation and prediction toolkit for three-body averaging dynamics
on 3-uniform hypergraphs."""

__version__ = "1.0.0"

from .dynamics import (
    InteractionFunction,
    OneStepDecomposition,
    SimulationTrace,
    exponential,
    linear_step,
    nonlinear_residual,
    one_step_closed_form,
    power_series,
    rescale_to_pm1,
    run,
    step,
)
from .errors import (
    BadRangeError,
    ConfigError,
    DegenerateTripleError,
    HyperavgError,
    IsolatedVertexError,
    LambdaOutOfRangeError,
    NonBinaryStateError,
    NonpositiveNormalizationError,
    NuNotLessThanOneError,
    OutOfRangeError,
    SingularDenominatorError,
    SingularLocalNormalizationError,
    TooSmallTorusError,
    WrongInitProbabilityError,
    ZeroWeightedSumError,
)
from .hypergraph import (
    Hypergraph3,
    StateVector,
    from_edge_list,
    generate_complete,
    generate_erdos_renyi,
    generate_torus,
    load_hypergraph,
    load_state,
    rademacher_init,
    save_hypergraph,
    save_state,
)
from .montecarlo import (
    AnticoncentrationReport,
    ConcentrationReport,
    EnsembleSummary,
    RunRecord,
    anticoncentration_report,
    concentration_report,
    run_ensemble,
)
from .motif import (
    ComparisonCertificate,
    ErSpectrumCertificate,
    MotifGraph,
    SpectralSummary,
    build_motif,
    epsilon,
    er_spectrum_certificate,
    find_M,
    spectral_comparison_certificate,
    spectral_summary,
    transition_spectrum,
)
from .prediction import (
    AssumptionReport,
    PredictionReport,
    check_assumptions,
    convergence_time_estimate,
    mean_field_consensus,
    predict,
    shift_theorem,
    sigma_lambda_exact,
    weighted_average,
)
