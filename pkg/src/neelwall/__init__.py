"""Solver and verification toolkit for one-dimensional Neel wall profiles
in thin films with uniaxial anisotropy.

The reduced energy couples exchange, anisotropy with an in-plane field,
and a nonlocal stray-field term built on the half-Laplacian. The package
minimizes it on a uniform grid, checks the structural properties of the
minimizer (monotonicity, symmetry, quadratic tail decay, a-priori
derivative bounds), certifies uniqueness through convexity along an
arcsin interpolation path, and explains the tail via the linearized
Green function.
"""

from .analysis import (
    BoundsReport,
    DecayFit,
    check_bounds,
    check_monotone,
    derivative_sup,
    fit_decay,
    symmetry_defect,
    tail_decay_check,
)
from .energy import el_residual, energy, energy_gradient
from .errors import (
    CenterDegenerateError,
    MultipleCrossingsError,
    NeelWallError,
    NoCrossingError,
    NotConvergedError,
    NotRecentredError,
    RangeViolationError,
    StepUnderflowError,
    TailTooLargeError,
    WindowTooNoisyError,
)
from .greenfn import (
    FoldedProfile,
    LinearizedOperator,
    decay_prediction,
    fold,
    fundamental_solution,
    make_linearized,
    reconstruct,
)
from .halflap import (
    HalfLaplacianOperator,
    apply_quadrature,
    apply_spectral,
    default_delta,
    make_operator,
    pairing,
    seminorm_double_integral,
)
from .model import (
    EnergyBreakdown,
    Grid,
    ModelParams,
    WallProfile,
    load_profile,
    make_grid,
    make_initial_profile,
    make_params,
    recenter,
    reflect_compose,
    save_profile,
)
from .path import (
    CertificateVerdict,
    PathPoint,
    interpolate_profiles,
    path_derivative_fields,
    path_scan,
    path_velocity_norm,
    stationarity_defect,
    uniqueness_certificate,
)
from .solver import SolveOptions, SolveReport, minimize, sweep

__version__ = "0.1.0"
