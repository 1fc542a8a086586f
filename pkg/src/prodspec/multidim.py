"""Product periodogram on up-to-3-D grid arrays.

Everything mirrors the line-array case with vector indices: sensors occupy
cells of a cuboid half-wavelength lattice, tapers are complex tensors that
vanish off the occupancy, and the normalization ``gamma`` is the inner
product of the two taper tensors over their overlapping box.  Degenerate
axes (extent 1) reduce every quantity to its 1-D counterpart, which the
tests lean on heavily.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from . import fourier
from .tapers import TaperedWeights
from .validation import NumericalError, check_snapshot_matrix

__all__ = [
    "GridArray3",
    "Weighting3",
    "Acf3",
    "from_weights",
    "gamma",
    "weighting3",
    "acf3",
    "ppo3",
    "ppo3_per_trial",
    "expected_acf3",
    "white_snapshots3",
]

_NU_RTOL = 1e-12


@dataclass(frozen=True)
class GridArray3:
    """Occupancy and taper tensors over a cuboid grid (x, y, z index order).

    The origin cell must be occupied and the taper must vanish wherever the
    occupancy does.  1-D subarrays embed as shape (1, 1, extent).
    """

    indicator: np.ndarray
    taper: np.ndarray

    def __post_init__(self):
        ind = np.asarray(self.indicator)
        if ind.ndim != 3:
            raise ValueError("indicator must be a 3-D tensor")
        if not np.isin(ind, (0, 1)).all():
            raise ValueError("indicator entries must be 0 or 1")
        ind = ind.astype(np.int64)
        if ind[0, 0, 0] != 1:
            raise ValueError("origin cell must be occupied")
        if not ind.any():
            raise ValueError("indicator marks no sensors")
        tap = np.asarray(self.taper, dtype=np.complex128)
        if tap.shape != ind.shape:
            raise ValueError("taper shape must match the indicator")
        if np.any(tap[ind == 0] != 0):
            raise ValueError("taper must be zero at unoccupied cells")
        if not tap.any():
            raise NumericalError("taper is identically zero on this geometry")
        ind.setflags(write=False)
        tap.setflags(write=False)
        object.__setattr__(self, "indicator", ind)
        object.__setattr__(self, "taper", tap)

    @classmethod
    def uniform(cls, indicator) -> "GridArray3":
        ind = np.asarray(indicator)
        return cls(ind, ind.astype(np.complex128))

    @property
    def extents(self):
        return self.indicator.shape


def from_weights(w: TaperedWeights) -> GridArray3:
    """Embed a 1-D tapered subarray along the z axis as a (1, 1, L) grid array."""
    return GridArray3(w.geometry.indicator[np.newaxis, np.newaxis, :],
                      w.values[np.newaxis, np.newaxis, :])


@dataclass(frozen=True)
class Weighting3:
    """Normalized 3-D taper cross-correlation; value 1 at the zero lag."""

    lag_start: tuple
    values: np.ndarray
    gamma: complex


@dataclass(frozen=True)
class Acf3:
    """Trial-averaged 3-D autocorrelation estimate on its lag box."""

    lag_start: tuple
    values: np.ndarray
    trials_averaged: int


def gamma(g1: GridArray3, g2: GridArray3) -> complex:
    """Inner product of the two taper tensors over the overlapping index box."""
    lo = [min(a, b) for a, b in zip(g1.extents, g2.extents)]
    t1 = g1.taper[:lo[0], :lo[1], :lo[2]]
    t2 = g2.taper[:lo[0], :lo[1], :lo[2]]
    g = complex(np.sum(t1 * np.conj(t2)))
    scale = float(np.linalg.norm(g1.taper) * np.linalg.norm(g2.taper))
    if abs(g) <= _NU_RTOL * scale:
        raise NumericalError(
            "taper tensors are orthogonal over the overlap; the product "
            "output is undefined")
    return g


def _xcorr3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Full linear cross-correlation ``sum_l a[l] b*[l - k]`` over 3 axes."""
    flipped = np.conj(b[..., ::-1, ::-1, ::-1])
    return fftconvolve(a, flipped, axes=(-3, -2, -1))


def _lag_start(g1: GridArray3, g2: GridArray3):
    return tuple(-(n - 1) for n in g2.extents)


def weighting3(g1: GridArray3, g2: GridArray3) -> Weighting3:
    """Cross-correlate the taper tensors and normalize the zero lag to 1."""
    g = gamma(g1, g2)
    raw = _xcorr3(g1.taper, g2.taper)
    values = raw / g
    zero = tuple(n - 1 for n in g2.extents)
    values[zero] = 1.0  # exact by definition; guard against rounding
    return Weighting3(lag_start=_lag_start(g1, g2), values=values, gamma=g)


def _check_snapshots3(x, g: GridArray3, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim == 3:
        x = x[np.newaxis]
    if x.ndim != 4 or x.shape[1:] != g.extents:
        raise ValueError(
            f"{name} must have shape (trials,) + {g.extents}, got {x.shape}")
    return x


def acf3(x1, x2, g1: GridArray3, g2: GridArray3) -> Acf3:
    """Trial-averaged 3-D autocorrelation estimate of the tapered snapshots."""
    x1 = _check_snapshots3(x1, g1, "x1")
    x2 = _check_snapshots3(x2, g2, "x2")
    if x1.shape[0] != x2.shape[0]:
        raise ValueError("x1 and x2 must hold the same number of trials")
    g = gamma(g1, g2)
    rows = _xcorr3(x1 * g1.taper, x2 * g2.taper) / g
    return Acf3(lag_start=_lag_start(g1, g2), values=rows.mean(axis=0),
                trials_averaged=x1.shape[0])


def ppo3(x1, x2, g1: GridArray3, g2: GridArray3, u_points) -> np.ndarray:
    """Averaged multivariate periodogram at direction-cosine triples.

    Computed as the 3-D transform of the autocorrelation estimate;
    ``u_points`` is (n_points, 3) and one complex value is returned per
    point.
    """
    acf = acf3(x1, x2, g1, g2)
    return fourier.dtft3(acf.values, acf.lag_start, u_points)


def ppo3_per_trial(x1, x2, g1: GridArray3, g2: GridArray3, u_points) -> np.ndarray:
    """Single-snapshot periodogram rows via the direct output product."""
    x1 = _check_snapshots3(x1, g1, "x1")
    x2 = _check_snapshots3(x2, g2, "x2")
    g = gamma(g1, g2)
    u_points = np.atleast_2d(np.asarray(u_points, dtype=np.float64))
    out = np.empty((x1.shape[0], u_points.shape[0]), dtype=np.complex128)
    for j, u in enumerate(u_points):
        y1 = np.einsum("txyz,xyz->t", x1, g1.taper * _steer(g1.extents, u))
        y2 = np.einsum("txyz,xyz->t", x2, g2.taper * _steer(g2.extents, u))
        out[:, j] = y1 * np.conj(y2) / g
    return out


def _steer(extents, u) -> np.ndarray:
    axes = [np.exp(-1j * np.pi * u[d] * np.arange(extents[d])) for d in range(3)]
    return np.einsum("x,y,z->xyz", *axes)


def expected_acf3(true_acf, wc: Weighting3) -> np.ndarray:
    """Expected autocorrelation estimate: the true lag tensor weighted cellwise."""
    r = np.asarray(true_acf, dtype=np.complex128)
    if r.shape != wc.values.shape:
        raise ValueError("true ACF tensor must match the weighting lag box")
    return r * wc.values


def white_snapshots3(g1: GridArray3, g2: GridArray3, sigma2: float,
                     trials: int, seed):
    """Shared-field white Gaussian snapshots for both grid arrays.

    One field over the union box is drawn per trial and masked by each
    occupancy, so shared cells agree between the two snapshot tensors.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    shape = tuple(max(a, b) for a, b in zip(g1.extents, g2.extents))
    z = rng.standard_normal((trials,) + shape + (2,))
    fld = (z[..., 0] + 1j * z[..., 1]) * np.sqrt(sigma2 / 2.0)
    x1 = fld[:, :g1.extents[0], :g1.extents[1], :g1.extents[2]] * g1.indicator
    x2 = fld[:, :g2.extents[0], :g2.extents[1], :g2.extents[2]] * g2.indicator
    return x1, x2
