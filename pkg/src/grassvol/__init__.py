"""Volumes of chordal-distance balls in complex Grassmann manifolds.

The distribution function of the squared chordal distance between random
subspaces is computed exactly (an oscillatory determinant integral, plus a
table of piecewise-polynomial closed forms), approximately (two erf
surrogates with exact cumulants behind them), and empirically (Monte
Carlo). On top sit sphere-covering and sphere-packing bounds on subspace
code sizes and distortion-rate tools: a closed-form lower bound, random
codebooks, and Lloyd optimization.
"""

__version__ = "0.1.0"

from .exceptions import (
    AccuracyError,
    EmptyComplementError,
    NotTabulatedError,
    ParameterError,
    UndefinedConstantError,
    UnsupportedSizeError,
)
from .geometry import (
    DISTANCE_VARIANTS,
    Params,
    PrincipalAngles,
    SubspaceBasis,
    canonicalize,
    chordal_distance_sq,
    fivepointed_constants,
    grassmannian_log_volume,
    grassmannian_volume,
    max_radius_sq,
    orthogonal_complement,
    principal_angles,
    sample_haar,
)
from .exact import (
    CharFnEvaluator,
    QuadratureConfig,
    beta_fourier_moment,
    charfn,
    closed_form_supported,
    closed_form_triples,
    closed_form_volume_sq,
    volume_closed_form,
    volume_complement,
    volume_curve,
    volume_quadrature,
    volume_quadrature_half_dim,
)
from .asymptotic import (
    GaussianSurrogate,
    cumulants_closed,
    cumulants_recursive,
    expected_sq_distance,
    hellinger_gaussians,
    surrogate_hellinger,
    volume_finite,
    volume_rmt,
)
from .montecarlo import (
    MomentEstimate,
    VolumeEstimate,
    empirical_moments,
    estimate_volume,
    estimate_volume_curve,
    sample_distances_sq,
)
from .coding import (
    Codebook,
    DistortionReport,
    distortion_lower_bound,
    error_cdf,
    gv_bound,
    hamming_bound,
    lloyd_quantizer,
    quantize,
    random_code_distortion,
    random_codebook,
)

__all__ = [
    "AccuracyError",
    "CharFnEvaluator",
    "Codebook",
    "DISTANCE_VARIANTS",
    "DistortionReport",
    "EmptyComplementError",
    "GaussianSurrogate",
    "MomentEstimate",
    "NotTabulatedError",
    "ParameterError",
    "Params",
    "PrincipalAngles",
    "QuadratureConfig",
    "SubspaceBasis",
    "UndefinedConstantError",
    "UnsupportedSizeError",
    "VolumeEstimate",
    "beta_fourier_moment",
    "canonicalize",
    "charfn",
    "chordal_distance_sq",
    "closed_form_supported",
    "closed_form_triples",
    "closed_form_volume_sq",
    "cumulants_closed",
    "cumulants_recursive",
    "distortion_lower_bound",
    "empirical_moments",
    "error_cdf",
    "estimate_volume",
    "estimate_volume_curve",
    "expected_sq_distance",
    "fivepointed_constants",
    "grassmannian_log_volume",
    "grassmannian_volume",
    "gv_bound",
    "hamming_bound",
    "hellinger_gaussians",
    "lloyd_quantizer",
    "max_radius_sq",
    "orthogonal_complement",
    "principal_angles",
    "quantize",
    "random_code_distortion",
    "random_codebook",
    "sample_distances_sq",
    "sample_haar",
    "surrogate_hellinger",
    "volume_closed_form",
    "volume_complement",
    "volume_curve",
    "volume_finite",
    "volume_quadrature",
    "volume_quadrature_half_dim",
    "volume_rmt",
]
