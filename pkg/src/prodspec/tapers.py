"""Tapers on sparse apertures and the lag-domain weighting they induce.

A taper assigns one complex weight per grid cell of a subarray; cells
without a sensor are pinned to zero.  Window envelopes are evaluated over
the full aperture (physical index), then masked by the occupancy, so a
sparse subarray sees the same envelope shape as a dense one spanning the
same aperture.

The normalized cross-correlation of the two tapers is the weighting
function applied to the implicit autocorrelation estimate of the product
processor; its transform is the smoothing kernel of the expected spectrum
and doubles as the array beampattern for metric purposes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fourier import dtft, evaluate_lags
from .geometry import SubarraySpec
from .validation import NumericalError, check_u_grid

__all__ = [
    "TAPER_FAMILIES",
    "TaperedWeights",
    "WeightingFunction",
    "Spectrum",
    "BeamMetrics",
    "window_samples",
    "make_taper",
    "normalization_nu",
    "taper_cross_correlation",
    "weighting_function",
    "spectrum_of",
    "beam_metrics",
    "count_local_maxima",
]

TAPER_FAMILIES = ("uniform", "hann", "hamming")

# Degeneracy threshold for the taper inner product, relative to the taper norms.
_NU_RTOL = 1e-12


@dataclass(frozen=True)
class TaperedWeights:
    """Complex per-cell weights for one subarray, zero at missing sensors."""

    values: np.ndarray
    geometry: SubarraySpec

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.ndim != 1 or vals.size != self.geometry.extent:
            raise ValueError("taper length must equal the subarray extent")
        if np.any(vals[self.geometry.indicator == 0] != 0):
            raise ValueError("taper must be zero at unoccupied grid cells")
        if not np.any(vals):
            raise NumericalError("taper is identically zero on this geometry")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def extent(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class WeightingFunction:
    """Normalized taper cross-correlation over lags ``-(N_e-1) .. M_e-1``.

    ``values[lags == 0]`` is 1 by construction: the normalization constant
    ``nu`` is the lag-zero cross-correlation itself.
    """

    lags: np.ndarray
    values: np.ndarray
    nu: complex

    @property
    def lag_start(self) -> int:
        return int(self.lags[0])

    def value_at(self, k: int) -> complex:
        i = int(k) - self.lag_start
        if i < 0 or i >= self.lags.size:
            return 0.0 + 0.0j
        return complex(self.values[i])


@dataclass(frozen=True)
class Spectrum:
    """Samples of a function of direction cosine ``u`` on an ascending grid."""

    u: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        u = check_u_grid(self.u)
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != u.shape:
            raise ValueError("values must match the u grid")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "values", vals)


def window_samples(family: str, extent: int) -> np.ndarray:
    """Symmetric window envelope over ``extent`` grid cells."""
    if family == "uniform":
        return np.ones(extent)
    if family == "hann":
        return np.hanning(extent)
    if family == "hamming":
        return np.hamming(extent)
    raise ValueError(f"unknown taper family {family!r}; expected one of {TAPER_FAMILIES}")


def make_taper(sub: SubarraySpec, family: str = "uniform",
               samples=None) -> TaperedWeights:
    """Evaluate a window over the subarray aperture and mask missing sensors.

    ``family`` picks a built-in envelope; ``family="custom"`` uses the given
    ``samples`` (one complex value per grid cell).  A window whose support
    misses every sensor (e.g. a zero-endpoint window on a two-sensor array)
    is rejected, since the product processor has nothing left to normalize.
    """
    if family == "custom":
        if samples is None:
            raise ValueError("custom taper requires samples")
        env = np.asarray(samples, dtype=np.complex128)
        if env.size != sub.extent:
            raise ValueError(
                f"custom samples length {env.size} != subarray extent {sub.extent}")
    else:
        env = window_samples(family, sub.extent).astype(np.complex128)
    return TaperedWeights(env * sub.indicator, sub)


def _nu_scale(w1: TaperedWeights, w2: TaperedWeights) -> float:
    return float(np.linalg.norm(w1.values) * np.linalg.norm(w2.values))


def _check_nu(nu: complex, scale: float) -> complex:
    if abs(nu) <= _NU_RTOL * scale:
        raise NumericalError(
            "taper inner product is zero: the two tapers share no effective "
            "support, so the product output is undefined")
    return nu


def normalization_nu(w1: TaperedWeights, w2: TaperedWeights) -> complex:
    """Inner product of the two tapers over the shared index range.

    Zero-padding the shorter taper makes the sum independent of which extent
    bounds it, so only the overlap contributes.
    """
    m = min(w1.extent, w2.extent)
    nu = complex(np.sum(w1.values[:m] * np.conj(w2.values[:m])))
    return _check_nu(nu, _nu_scale(w1, w2))


def taper_cross_correlation(w1: TaperedWeights, w2: TaperedWeights):
    """Unnormalized lag cross-correlation ``sum_l w1[l] w2*[l-k]``.

    Returns ``(lags, values)`` on ``-(N_e-1) .. M_e-1``.  For uniform unit
    tapers the values are the integer difference-coarray pair counts.
    """
    vals = np.correlate(w1.values, w2.values, mode="full")
    lags = np.arange(-(w2.extent - 1), w1.extent)
    return lags, vals


def weighting_function(w1: TaperedWeights, w2: TaperedWeights) -> WeightingFunction:
    """Cross-correlate the tapers and normalize so the lag-zero value is 1."""
    lags, raw = taper_cross_correlation(w1, w2)
    nu = _check_nu(complex(raw[w2.extent - 1]), _nu_scale(w1, w2))
    if nu.imag == 0 and not raw.imag.any():
        # real tapers: real division is correctly rounded, complex is not
        values = (raw.real / nu.real).astype(np.complex128)
    else:
        values = raw / nu
    values[w2.extent - 1] = 1.0  # exact by definition; guard against rounding
    return WeightingFunction(lags=lags, values=values, nu=nu)


def spectrum_of(obj, u_grid) -> Spectrum:
    """Transform a taper or lag sequence onto a direction-cosine grid.

    Accepts a :class:`TaperedWeights` (lags start at 0), a
    :class:`WeightingFunction`, or a plain ``(values, lag_start)`` pair.
    Uniform grids over [-1, 1) are evaluated with a zero-padded FFT,
    anything else by direct summation.
    """
    u = check_u_grid(u_grid)
    if isinstance(obj, TaperedWeights):
        values, lag_start = obj.values, 0
    elif isinstance(obj, WeightingFunction):
        values, lag_start = obj.values, obj.lag_start
    else:
        values, lag_start = obj
        values = np.asarray(values, dtype=np.complex128)
        lag_start = int(lag_start)
    return Spectrum(u, evaluate_lags(values, lag_start, u))


@dataclass(frozen=True)
class BeamMetrics:
    """Null-to-null main lobe width and peak sidelobe level of a pattern."""

    mlw_null_to_null: float
    psl_db: float


def _local_minima(power: np.ndarray) -> np.ndarray:
    interior = (power[1:-1] < power[:-2]) & (power[1:-1] <= power[2:])
    return np.flatnonzero(interior) + 1


def _null_index(power, minima, peak_idx, side, rise_ratio) -> int:
    """First genuine inter-lobe valley on one side of the peak.

    A candidate minimum counts as a null when the pattern climbs back up by
    the given ratio before the next minimum; sampling right next to a true
    zero leaves a shallow sample, so depth relative to the peak is no use,
    while flank ripple never shows a real rebound.  If nothing rebounds the
    deepest minimum on that side is used.
    """
    if side > 0:
        cand = minima[minima > peak_idx]
    else:
        cand = minima[minima < peak_idx][::-1]
    if cand.size == 0:
        raise NumericalError(
            "no pattern null found on one side of the main lobe; the grid is "
            "too coarse or the pattern has no sidelobe structure")
    for j, i in enumerate(cand):
        nxt = cand[j + 1] if j + 1 < cand.size else (power.size if side > 0 else -1)
        lo, hi = (i + 1, nxt) if side > 0 else (nxt + 1, i)
        rebound = power[lo:hi].max() if hi > lo else 0.0
        if rebound >= power[i] * rise_ratio:
            return int(i)
    return int(cand[np.argmin(power[cand])])


def beam_metrics(spec: Spectrum, valley_db: float = 3.0) -> BeamMetrics:
    """Extract main-lobe width and peak sidelobe level from a sampled pattern.

    The pattern magnitude is treated as power.  The main-lobe nulls are the
    first local minima on each side of the peak that form genuine valleys
    (the pattern rebounds by at least ``valley_db`` before the next
    minimum); the sidelobe search covers everything outside the
    null-to-null interval.
    """
    power = np.abs(spec.values)
    peak_idx = int(np.argmax(power))
    peak = power[peak_idx]
    if peak <= 0:
        raise NumericalError("pattern is identically zero")
    minima = _local_minima(power)
    rise_ratio = 10.0 ** (valley_db / 10.0)
    left = _null_index(power, minima, peak_idx, -1, rise_ratio)
    right = _null_index(power, minima, peak_idx, +1, rise_ratio)
    if right - left < 8:
        raise NumericalError(
            f"main lobe spans only {right - left} samples; refine the grid")
    side = np.concatenate([power[:left], power[right + 1:]])
    if side.size == 0:
        raise NumericalError("grid does not extend past the main lobe")
    return BeamMetrics(
        mlw_null_to_null=float(spec.u[right] - spec.u[left]),
        psl_db=float(10.0 * np.log10(side.max() / peak)),
    )


def count_local_maxima(spec: Spectrum, u_min: float, u_max: float,
                       rel_floor: float = 1e-3) -> int:
    """Count local maxima of ``|values|`` with ``u`` in ``[u_min, u_max]``.

    Maxima below ``rel_floor`` times the band peak are ignored so that
    numerical ripple on a flat floor does not register as structure.
    """
    power = np.abs(spec.values)
    sel = (spec.u >= u_min) & (spec.u <= u_max)
    idx = np.flatnonzero(sel)
    if idx.size < 3:
        raise ValueError("band selects fewer than 3 samples")
    p = power[idx]
    interior = (p[1:-1] > p[:-2]) & (p[1:-1] >= p[2:]) & (p[1:-1] >= rel_floor * p.max())
    return int(np.count_nonzero(interior))
