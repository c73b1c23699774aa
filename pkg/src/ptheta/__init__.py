"""Numerics for Ramanujan's partial theta function.

Tail-bounded evaluation of the series, its truncations and the bilateral
product form; explicit comparison envelopes; zero location, counting and
separation certificates; and location of spectral values (parameters with a
double zero).  See the module docstrings for the mathematics and README for
the command-line interface.
"""

__version__ = "0.1.0"

from .bounds import k_bound, l_bound, m_bound, psi, solve_c0, xi
from .errors import (
    AmbiguousModulus,
    ChainBroken,
    DivisionByZero,
    InvalidParameter,
    MajorantDiverges,
    NoConvergence,
    NonFiniteValue,
    NotAnInteger,
    NotStabilized,
    PathLost,
    ResultantOverflow,
    SingularJacobian,
    TailNotConverged,
    ThetaError,
    ZeroOnContour,
)
from .series import (
    DEFAULT_CONFIG,
    EvalConfig,
    TailedEvaluation,
    bilateral_series,
    g_tail,
    theta,
    theta_dx,
    theta_tail_bound,
    theta_trunc,
    triple_product,
)
from .spectra import (
    CONFIRMED_SPECTRAL_VALUES,
    RegionSpec,
    ResultantValue,
    SpectralValue,
    classify_pair,
    refine_to_full_theta,
    resultant_at,
    resultant_at_raw,
    scan_truncation_spectrum,
)
from .torusopt import TorusMinResult, TorusProblem, minimize_on_torus, objective_and_gradient
from .verify import (
    ChainReport,
    GridSpec,
    SeparationCertificate,
    certify_separation_direct,
    run_k1_chain,
    run_k2_grid,
    run_sector2,
)
from .zeros import (
    AnnulusSpec,
    ContourConfig,
    ZeroSet,
    count_zeros_annulus,
    count_zeros_disk,
    refine_double_zero,
    roots_truncation,
    track_zero,
)

__all__ = [
    "__version__",
    "AmbiguousModulus", "AnnulusSpec", "CONFIRMED_SPECTRAL_VALUES", "ChainBroken",
    "ChainReport", "ContourConfig", "DEFAULT_CONFIG", "DivisionByZero",
    "EvalConfig", "GridSpec", "InvalidParameter", "MajorantDiverges",
    "NoConvergence", "NonFiniteValue", "NotAnInteger", "NotStabilized",
    "PathLost", "RegionSpec", "ResultantOverflow", "ResultantValue",
    "SeparationCertificate", "SingularJacobian", "SpectralValue",
    "TailNotConverged", "TailedEvaluation", "ThetaError", "TorusMinResult",
    "TorusProblem", "ZeroOnContour", "ZeroSet",
    "bilateral_series", "certify_separation_direct", "classify_pair",
    "count_zeros_annulus", "count_zeros_disk", "g_tail", "k_bound", "l_bound",
    "m_bound", "minimize_on_torus", "objective_and_gradient", "psi",
    "refine_double_zero", "refine_to_full_theta", "resultant_at",
    "resultant_at_raw", "roots_truncation", "run_k1_chain", "run_k2_grid",
    "run_sector2", "scan_truncation_spectrum", "solve_c0", "theta",
    "theta_dx", "theta_tail_bound", "theta_trunc", "track_zero",
    "triple_product", "xi",
]
