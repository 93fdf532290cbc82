"""heatlab: numerical laboratory for a semilinear heat equation with power
absorption and a nonlocal nonlinear boundary flux on the unit interval."""

from .barriers import (
    BarrierCandidate,
    ExpSupersolution,
    ExtinctionBarrier,
    LayerSubsolution,
    ResidualReport,
    StrictSupersolution,
    ZeroCandidate,
    apriori_sup_bound,
    build_exp_supersolution,
    build_extinction_barrier,
    build_layer_subsolution,
    build_strict_supersolution,
    certifies_subsolution,
    certifies_supersolution,
    classify_candidate,
    layer_amplitude_window,
    shrink_to_admissible,
    strict_amplitude_window,
)
from .errors import (
    CertificationSearchError,
    ConfigError,
    ConstructionError,
    ContractionError,
    HeatLabError,
    KernelDomainError,
    NonconvergenceError,
    OrderingError,
    PositivityViolationError,
    SchemaError,
)
from .experiments import (
    EXPERIMENTS,
    CheckResult,
    ExperimentOutcome,
    run_experiment,
)
from .fd_solver import StepScheme, Trajectory, solve
from .greens import (
    NeumannKernel,
    PicardResult,
    build_kernel,
    contraction_estimate,
    kernel_eval,
    picard_chain,
    picard_solve,
)
from .grid import (
    SpatialGrid,
    TimeGrid,
    build_grid,
    integrate,
    normal_derivative,
    time_grid_for_horizon,
)
from .io import (
    Artifact,
    read_convergence_csv,
    read_scan_csv,
    read_trajectory_csv,
    write_artifacts,
    write_error,
    write_json,
    write_outcome,
)
from .ladder import LadderReport, aitken_limit, ordering_check, run_ladder
from .presets import ORACLES, PRESETS, run_oracle, run_preset
from .problem import (
    Coefficient,
    InitialDatum,
    Kernel,
    ProblemSpec,
    compatibility_residual,
    positive_power,
    regularize_initial,
)

__all__ = [
    "BarrierCandidate",
    "Artifact",
    "CertificationSearchError",
    "CheckResult",
    "Coefficient",
    "ConfigError",
    "ConstructionError",
    "ContractionError",
    "EXPERIMENTS",
    "ExperimentOutcome",
    "ExpSupersolution",
    "ExtinctionBarrier",
    "HeatLabError",
    "InitialDatum",
    "Kernel",
    "KernelDomainError",
    "LadderReport",
    "LayerSubsolution",
    "NeumannKernel",
    "NonconvergenceError",
    "ORACLES",
    "OrderingError",
    "PRESETS",
    "PicardResult",
    "PositivityViolationError",
    "ProblemSpec",
    "ResidualReport",
    "SchemaError",
    "SpatialGrid",
    "StepScheme",
    "StrictSupersolution",
    "TimeGrid",
    "Trajectory",
    "ZeroCandidate",
    "aitken_limit",
    "apriori_sup_bound",
    "build_exp_supersolution",
    "build_extinction_barrier",
    "build_grid",
    "build_kernel",
    "build_layer_subsolution",
    "build_strict_supersolution",
    "certifies_subsolution",
    "certifies_supersolution",
    "classify_candidate",
    "compatibility_residual",
    "contraction_estimate",
    "integrate",
    "kernel_eval",
    "layer_amplitude_window",
    "normal_derivative",
    "ordering_check",
    "picard_chain",
    "picard_solve",
    "positive_power",
    "read_convergence_csv",
    "read_scan_csv",
    "read_trajectory_csv",
    "regularize_initial",
    "run_experiment",
    "run_ladder",
    "run_oracle",
    "run_preset",
    "shrink_to_admissible",
    "solve",
    "strict_amplitude_window",
    "time_grid_for_horizon",
    "write_artifacts",
    "write_error",
    "write_json",
    "write_outcome",
]

__version__ = "0.1.0"
