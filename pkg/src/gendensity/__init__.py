"""Density and memorization diagnostics for generative maps.

A generator f: R^m -> R^n pushes its latent prior onto a low-dimensional
output manifold.  This package estimates the Jacobian of f by central
differences, reads off tangent structure and effective rank from its SVD,
evaluates the induced log-density through the rank-restricted change of
variables, and aggregates density profiles along latent paths into two
scalar memorization measures (mean dip, mean decay).
"""

from .density import LatentPrior, LogDensityValue, induced_log_density, prior_log_density
from .differentiation import FdConfig, JacobianMatrix, jacobian
from .dimension import SpectrumSummary, mean_spectrum, pointcloud_svd
from .errors import (
    DegenerateDirectionError,
    DegeneratePointError,
    EmptyProfileError,
    EmptyReportError,
    GendensityError,
    GeneratorLoadError,
    InputDimensionError,
    NumericalError,
    ScoreUndefinedError,
    UnsupportedOperationError,
)
from .generator import (
    EvalCounter,
    GeneratorHandle,
    NetworkSpec,
    analytic_jacobian,
    circle_embed,
    identity,
    linear,
    load_network,
    memorizer,
    smooth_interpolator,
)
from .paths import (
    DensityProfile,
    LatentPath,
    arclength_reparametrize,
    decay_profile,
    path_density,
)
from .scores import (
    AnchorSet,
    ScoreConfig,
    ScoreReport,
    decay_score,
    dip_score,
    nearest_neighbor_pairs,
    score_run,
)
from .spectrum import (
    RankPolicy,
    SpectrumResult,
    log_volume_factor,
    nondegenerate_directions,
    svd_spectrum,
    volume_factor,
)

__version__ = "0.1.0"

__all__ = [
    "AnchorSet",
    "DegenerateDirectionError",
    "DegeneratePointError",
    "DensityProfile",
    "EmptyProfileError",
    "EmptyReportError",
    "EvalCounter",
    "FdConfig",
    "GendensityError",
    "GeneratorHandle",
    "GeneratorLoadError",
    "InputDimensionError",
    "JacobianMatrix",
    "LatentPath",
    "LatentPrior",
    "LogDensityValue",
    "NetworkSpec",
    "NumericalError",
    "RankPolicy",
    "ScoreConfig",
    "ScoreReport",
    "ScoreUndefinedError",
    "SpectrumResult",
    "SpectrumSummary",
    "UnsupportedOperationError",
    "analytic_jacobian",
    "arclength_reparametrize",
    "circle_embed",
    "decay_profile",
    "decay_score",
    "dip_score",
    "identity",
    "induced_log_density",
    "jacobian",
    "linear",
    "load_network",
    "log_volume_factor",
    "mean_spectrum",
    "memorizer",
    "nearest_neighbor_pairs",
    "nondegenerate_directions",
    "path_density",
    "pointcloud_svd",
    "prior_log_density",
    "score_run",
    "smooth_interpolator",
    "svd_spectrum",
    "volume_factor",
]
