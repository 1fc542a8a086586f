"""Tapered product-processing spectral estimation for sparse line arrays.

Pairs of tapered subarrays on a shared half-wavelength grid (coprime,
nested, ULA, NULA, or arbitrary layouts) are multiplied at the beamformer
output to estimate the spatial power spectral density.  The package covers
geometry construction, taper weighting, snapshot synthesis, the estimator
with its implicit autocorrelation form, closed-form means and covariances,
a Monte-Carlo verification harness, a 3-D extension, and a CLI for
scenario reproduction.
"""

from .estimator import (AcfEstimate, PpoEstimate, ProductPeriodogram,
                        acf_estimate, ppo, ppo_from_outputs, ppo_per_trial,
                        subarray_outputs)
from .fourier import closed_grid, standard_grid
from .geometry import (DifferenceCoarray, ProductArray, SubarraySpec,
                       difference_coarray, make_coprime, make_nested,
                       make_nula, make_ula)
from .moments import (CovarianceCurve, discretized_acf, expected_ppo,
                      ppo_covariance, ppo_variance, second_moment_oracle,
                      true_acf)
from .signals import (NoiseSpec, SnapshotBatch, SourceSpec, array_manifold,
                      batch_from_field, colored_field, generate_snapshots)
from .tapers import (BeamMetrics, Spectrum, TaperedWeights, WeightingFunction,
                     beam_metrics, count_local_maxima, make_taper,
                     normalization_nu, spectrum_of, taper_cross_correlation,
                     weighting_function)
from .validation import ConfigError, NumericalError

__version__ = "0.1.0"

__all__ = [
    "AcfEstimate", "PpoEstimate", "ProductPeriodogram", "acf_estimate",
    "ppo", "ppo_from_outputs", "ppo_per_trial", "subarray_outputs",
    "closed_grid", "standard_grid",
    "DifferenceCoarray", "ProductArray", "SubarraySpec", "difference_coarray",
    "make_coprime", "make_nested", "make_nula", "make_ula",
    "CovarianceCurve", "discretized_acf", "expected_ppo", "ppo_covariance",
    "ppo_variance", "second_moment_oracle", "true_acf",
    "NoiseSpec", "SnapshotBatch", "SourceSpec", "array_manifold",
    "batch_from_field", "colored_field", "generate_snapshots",
    "BeamMetrics", "Spectrum", "TaperedWeights", "WeightingFunction",
    "beam_metrics", "count_local_maxima", "make_taper", "normalization_nu",
    "spectrum_of", "taper_cross_correlation", "weighting_function",
    "ConfigError", "NumericalError",
    "__version__",
]
