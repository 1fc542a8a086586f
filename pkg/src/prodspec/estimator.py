"""Product periodogram and its implicit autocorrelation estimate.

The product of the two tapered, steered subarray outputs, normalized by the
taper inner product, is a spatial periodogram.  It equals the transform of
a lag-domain cross-correlation of the tapered snapshots, and both routes
are implemented: the lag route is the fast path, the direct product of
subarray outputs is kept as an independent reference ("the same number two
ways" is the key structural identity and stays continuously tested).

A scikit-learn flavored wrapper, :class:`ProductPeriodogram`, exposes the
estimator to pipeline-style code: ``fit`` consumes a complex snapshot
matrix over the aperture grid and stores the averaged spectrum, while
``transform`` maps snapshots to per-snapshot periodogram features.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import fourier
from .geometry import ProductArray, make_ula
from .signals import SnapshotBatch, batch_from_field
from .tapers import TaperedWeights, make_taper, normalization_nu
from .validation import check_snapshot_matrix, check_u_grid

__all__ = [
    "AcfEstimate",
    "PpoEstimate",
    "subarray_outputs",
    "acf_estimate",
    "ppo",
    "ppo_per_trial",
    "ppo_from_outputs",
    "ProductPeriodogram",
]


@dataclass(frozen=True)
class AcfEstimate:
    """Trial-averaged spatial autocorrelation estimate on its lag support."""

    lags: np.ndarray
    values: np.ndarray
    trials_averaged: int


@dataclass(frozen=True)
class PpoEstimate:
    """Trial-averaged product periodogram sampled on a direction-cosine grid."""

    u: np.ndarray
    values: np.ndarray
    trials_averaged: int


def _check_pair(batch: SnapshotBatch, w1: TaperedWeights, w2: TaperedWeights):
    if w1.extent != batch.extent_a or w2.extent != batch.extent_b:
        raise ValueError(
            f"taper extents ({w1.extent}, {w2.extent}) do not match snapshot "
            f"extents ({batch.extent_a}, {batch.extent_b})")


def subarray_outputs(batch: SnapshotBatch, w1: TaperedWeights,
                     w2: TaperedWeights, u: float):
    """Tapered, steered sums ``y_i = sum_m w_i[m] exp(-j pi u m) x_i[m]`` per trial."""
    _check_pair(batch, w1, w2)
    c1 = w1.values * np.exp(-1j * np.pi * u * np.arange(w1.extent))
    c2 = w2.values * np.exp(-1j * np.pi * u * np.arange(w2.extent))
    return batch.x1 @ c1, batch.x2 @ c2


def _acf_rows(batch: SnapshotBatch, w1: TaperedWeights, w2: TaperedWeights,
              nu: complex) -> np.ndarray:
    """Per-trial lag cross-correlation of the tapered snapshots, over nu."""
    a = batch.x1 * w1.values
    b = batch.x2 * w2.values
    corr = fftconvolve(a, np.conj(b[:, ::-1]), axes=1)
    return corr / nu


def acf_estimate(batch: SnapshotBatch, w1: TaperedWeights,
                 w2: TaperedWeights) -> AcfEstimate:
    """Averaged autocorrelation estimate on lags ``-(N_e-1) .. M_e-1``."""
    _check_pair(batch, w1, w2)
    nu = normalization_nu(w1, w2)
    rows = _acf_rows(batch, w1, w2, nu)
    lags = np.arange(-(w2.extent - 1), w1.extent)
    return AcfEstimate(lags=lags, values=rows.mean(axis=0),
                       trials_averaged=batch.trials)


def ppo(batch: SnapshotBatch, w1: TaperedWeights, w2: TaperedWeights,
        u_grid) -> PpoEstimate:
    """Averaged product periodogram, computed as the transform of the ACF estimate."""
    u = check_u_grid(u_grid)
    acf = acf_estimate(batch, w1, w2)
    values = fourier.evaluate_lags(acf.values, int(acf.lags[0]), u)
    return PpoEstimate(u=u, values=values, trials_averaged=batch.trials)


def ppo_per_trial(batch: SnapshotBatch, w1: TaperedWeights, w2: TaperedWeights,
                  u_points) -> np.ndarray:
    """Single-snapshot periodogram values, one row per trial.

    Uses the direct output-product form ``y1 y2* / nu``; for identical
    subarrays and tapers every entry is real non-negative by construction.
    """
    _check_pair(batch, w1, w2)
    u_points = np.atleast_1d(np.asarray(u_points, dtype=np.float64))
    nu = normalization_nu(w1, w2)
    c1 = w1.values[:, np.newaxis] * np.exp(
        -1j * np.pi * np.outer(np.arange(w1.extent), u_points))
    c2 = w2.values[:, np.newaxis] * np.exp(
        -1j * np.pi * np.outer(np.arange(w2.extent), u_points))
    y1 = batch.x1 @ c1
    y2 = batch.x2 @ c2
    return y1 * np.conj(y2) / nu


def ppo_from_outputs(batch: SnapshotBatch, w1: TaperedWeights,
                     w2: TaperedWeights, u_grid) -> PpoEstimate:
    """Reference periodogram via the explicit double sum over sensor pairs.

    Mathematically identical to :func:`ppo`; kept as the independent slow
    route for verification.
    """
    u = check_u_grid(u_grid)
    values = ppo_per_trial(batch, w1, w2, u).mean(axis=0)
    return PpoEstimate(u=u, values=values, trials_averaged=batch.trials)


class ProductPeriodogram(TransformerMixin, BaseEstimator):
    """Averaged product periodogram with a scikit-learn estimator surface.

    Parameters
    ----------
    array : ProductArray or None
        Sensor layout.  ``None`` treats every input column as an occupied
        cell of a dense ULA paired with itself.
    taper : str or (str, str)
        Taper family for both subarrays, or one family per subarray.
    n_grid : int
        Number of uniform direction-cosine samples on [-1, 1).

    ``fit`` expects a complex matrix ``X`` of shape (n_snapshots, n_cells)
    holding the field at every grid cell of the union aperture; columns at
    unoccupied cells are ignored by the masks.  After fitting,
    ``spectrum_`` holds the averaged estimate and ``acf_`` the matching
    autocorrelation estimate.  ``transform`` returns per-snapshot
    periodogram rows evaluated on the fitted grid.
    """

    def __init__(self, array: ProductArray | None = None,
                 taper="uniform", n_grid: int = 4096):
        self.array = array
        self.taper = taper
        self.n_grid = n_grid

    def _resolve(self, n_cells: int):
        arr = self.array if self.array is not None else make_ula(n_cells)
        if isinstance(self.taper, (tuple, list)):
            fam_a, fam_b = self.taper
        else:
            fam_a = fam_b = self.taper
        w1 = make_taper(arr.subarray_a, fam_a)
        w2 = make_taper(arr.subarray_b, fam_b)
        return arr, w1, w2

    def fit(self, X, y=None):
        X = check_snapshot_matrix(X)
        arr, w1, w2 = self._resolve(X.shape[1])
        batch = batch_from_field(arr, X)
        self.array_ = arr
        self.weights_a_, self.weights_b_ = w1, w2
        self.u_grid_ = fourier.standard_grid(int(self.n_grid))
        self.acf_ = acf_estimate(batch, w1, w2)
        self.spectrum_ = ppo(batch, w1, w2, self.u_grid_)
        self.n_snapshots_ = batch.trials
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "spectrum_")
        X = check_snapshot_matrix(X)
        batch = batch_from_field(self.array_, X)
        nu = normalization_nu(self.weights_a_, self.weights_b_)
        rows = _acf_rows(batch, self.weights_a_, self.weights_b_, nu)
        return fourier.evaluate_lags(rows, -(self.weights_b_.extent - 1),
                                     self.u_grid_)
