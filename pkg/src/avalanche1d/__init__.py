"""Solvers for the one-dimensional Savage-Hutter avalanche equations.

Lagrangian moving mesh, staggered non-oscillatory central (NOC) scheme
and NOC with vacuum front tracking, plus the exact travelling-shock and
parabolic similarity solutions used to check them.
"""
from .errors import (
    AvalancheError,
    CellInversionError,
    CFLViolationError,
    ConfigError,
    ConvergenceError,
    DomainError,
    DryStateError,
    InadmissibleShockError,
    MarginError,
    NegativeDepthError,
    ValidityError,
)
from .harness import (
    Experiment,
    ExperimentConfig,
    RunReport,
    Scheme,
    error_metric,
    locate_shock,
    preset,
    run,
    runout_diagnostics,
)
from .model import MaterialParams, TrackProfile
from .reconstruction import ReconMethod

__version__ = "0.1.0"
