"""Closed-form first and second moments of the product periodogram.

The expected estimate is the true autocorrelation weighted lag by lag by
the taper cross-correlation, i.e. the true spatial PSD smeared by the
transform of the weighting function (a periodic convolution in direction
cosine).  For spatially white circular Gaussian noise, the covariance
between periodogram values separated by ``du`` factors into the transforms
of the squared taper magnitudes; the variance follows at ``du = 0``.

A direct quadruple-sum evaluation of the second moment over all sensor
index tuples is kept as the independent oracle for the closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import fourier
from .tapers import Spectrum, TaperedWeights, WeightingFunction, normalization_nu
from .validation import check_u_grid

__all__ = [
    "CovarianceCurve",
    "true_acf",
    "discretized_acf",
    "expected_ppo",
    "ppo_covariance",
    "ppo_variance",
    "second_moment_oracle",
]

# Guard for the quadruple-sum oracle: at most this many (m, n) sensor pairs.
ORACLE_MAX_PAIRS = 10_000


@dataclass(frozen=True)
class CovarianceCurve:
    """White-noise periodogram covariance as a function of grid separation.

    Hermitian in ``delta_u``; the value at zero separation is the (real,
    non-negative) periodogram variance.
    """

    delta_u: np.ndarray
    values: np.ndarray
    variance_at_zero: float


def true_acf(sources, sigma2: float, lags) -> np.ndarray:
    """True spatial autocorrelation of plane-wave sources in a white floor.

    ``r[k] = sum_i power_i exp(j pi u_i k) + sigma2 * delta[k]`` sampled on
    the given integer lags.
    """
    lags = np.asarray(lags, dtype=np.int64)
    r = np.zeros(lags.size, dtype=np.complex128)
    for src in sources:
        r += src.power * np.exp(1j * np.pi * src.u * lags)
    r[lags == 0] += sigma2
    return r


def discretized_acf(psd: Spectrum, lags) -> np.ndarray:
    """Autocorrelation of the plane-wave synthesis of a sampled PSD.

    Matches :func:`prodspec.signals.colored_field` exactly: the Riemann sum
    ``sum_q psd(u_q) du/2 exp(j pi u_q k)`` over the PSD grid, which is the
    true ACF of the synthesized field.
    """
    lags = np.asarray(lags, dtype=np.int64)
    du = np.diff(psd.u)
    if not np.allclose(du, du[0], rtol=1e-9, atol=0.0):
        raise ValueError("discretized ACF requires a uniform PSD grid")
    weights = np.real(psd.values) * du[0] / 2.0
    return np.exp(1j * np.pi * np.outer(lags, psd.u)) @ weights.astype(np.complex128)


def expected_ppo(true_acf_or_psd, wc: WeightingFunction, u_grid) -> Spectrum:
    """Expected periodogram for a known true spectrum.

    Two input forms are accepted.  A lag array (aligned with ``wc.lags``)
    is transformed directly as ``sum_k wc[k] r[k] exp(-j pi u k)``.  A
    :class:`Spectrum` is convolved periodically with the transform of the
    weighting function; this form requires both to live on the same uniform
    grid with at least four grid points per lag of support.
    """
    u = check_u_grid(u_grid)
    if isinstance(true_acf_or_psd, Spectrum):
        psd = true_acf_or_psd
        if psd.u.size != u.size or not np.allclose(psd.u, u, rtol=0.0, atol=1e-12):
            raise ValueError("PSD must be sampled on the evaluation grid")
        if not fourier.is_standard_grid(u):
            raise ValueError("the convolution form requires a uniform [-1, 1) grid")
        if u.size < 4 * wc.lags.size:
            raise ValueError(
                f"grid of {u.size} points is too coarse for a lag support of "
                f"{wc.lags.size} (need >= {4 * wc.lags.size})")
        wc_vals = fourier.dtft_standard_grid(wc.values, wc.lag_start, u.size)
        return Spectrum(u, fourier.periodic_convolve(psd.values, wc_vals))
    r = np.asarray(true_acf_or_psd, dtype=np.complex128)
    if r.shape != wc.lags.shape:
        raise ValueError(
            f"ACF support {r.shape} does not match the weighting-function "
            f"lags {wc.lags.shape}")
    return Spectrum(u, fourier.evaluate_lags(wc.values * r, wc.lag_start, u))


def _abs2_transform(w: TaperedWeights, delta_u) -> np.ndarray:
    return fourier.dtft(np.abs(w.values) ** 2, 0, delta_u)


def ppo_covariance(w1: TaperedWeights, w2: TaperedWeights, sigma2: float,
                   delta_u) -> CovarianceCurve:
    """White-noise covariance of the periodogram at the given grid separations.

    Evaluated in the lag domain: the periodic self-convolution of each taper
    transform is the transform of the squared taper magnitude, so the curve
    is ``sigma2^2 / |nu|^2`` times the product of those two transforms (the
    second conjugated).
    """
    if sigma2 < 0:
        raise ValueError("noise variance must be non-negative")
    delta_u = np.atleast_1d(np.asarray(delta_u, dtype=np.float64))
    nu = normalization_nu(w1, w2)
    s1 = _abs2_transform(w1, delta_u)
    s2 = _abs2_transform(w2, delta_u)
    values = (sigma2 ** 2 / abs(nu) ** 2) * s1 * np.conj(s2)
    return CovarianceCurve(delta_u=delta_u, values=values,
                           variance_at_zero=ppo_variance(w1, w2, sigma2))


def ppo_variance(w1: TaperedWeights, w2: TaperedWeights, sigma2: float) -> float:
    """Periodogram variance under white noise: the covariance at zero separation.

    Equals ``sigma2^2`` exactly whenever the two tapered subarrays are
    identical, since both magnitude sums then coincide with ``nu``.
    """
    if sigma2 < 0:
        raise ValueError("noise variance must be non-negative")
    nu = normalization_nu(w1, w2)
    e1 = float(np.sum(np.abs(w1.values) ** 2))
    e2 = float(np.sum(np.abs(w2.values) ** 2))
    return sigma2 ** 2 / abs(nu) ** 2 * e1 * e2


def second_moment_oracle(w1: TaperedWeights, w2: TaperedWeights, sigma2: float,
                         u1: float, u2: float) -> complex:
    """Second moment ``E{P(u1) P*(u2)}`` by honest enumeration, white noise.

    Sums over every sensor index tuple ``(k, l, m, n)``, applying the
    circular Gaussian fourth-moment rule
    ``E{x_k x_l* x_m* x_n} = sigma2^2 (d[k-l] d[m-n] + d[k-m] d[l-n])`` term
    by term.  Complexity is quadratic in the number of sensor pairs, so the
    extents are guarded; use :func:`ppo_covariance` for real sizes.
    """
    me, ne = w1.extent, w2.extent
    if me * ne > ORACLE_MAX_PAIRS:
        raise ValueError(
            f"oracle enumeration of {me * ne} sensor pairs exceeds the "
            f"{ORACLE_MAX_PAIRS} guard; use ppo_covariance instead")
    nu = normalization_nu(w1, w2)
    a1, a2 = w1.values, w2.values
    l_idx = np.arange(ne)
    m_idx = np.arange(me)
    n_idx = np.arange(ne)
    # delta factors broadcast over (l, m, n) for each k
    d_nm = (n_idx[np.newaxis, :] == m_idx[:, np.newaxis])          # (m, n)
    phase_l = np.exp(1j * np.pi * u1 * l_idx)
    phase_m = np.exp(1j * np.pi * u2 * m_idx)
    phase_n = np.exp(-1j * np.pi * u2 * n_idx)
    total = 0.0 + 0.0j
    for k in range(me):
        d_kl = (k == l_idx)                                        # (l,)
        d_km = (k == m_idx)                                        # (m,)
        d_ln = (l_idx[:, np.newaxis] == n_idx[np.newaxis, :])      # (l, n)
        # both pairings can fire at once (k=l=m=n), so sum as floats, not bools
        fourth = ((d_kl[:, np.newaxis, np.newaxis] & d_nm[np.newaxis, :, :])
                  .astype(np.float64)
                  + (d_km[np.newaxis, :, np.newaxis] & d_ln[:, np.newaxis, :])
                  .astype(np.float64))
        coeff = (a1[k] * np.exp(-1j * np.pi * u1 * k)) \
            * np.conj(a2)[:, np.newaxis, np.newaxis] * phase_l[:, np.newaxis, np.newaxis] \
            * np.conj(a1)[np.newaxis, :, np.newaxis] * phase_m[np.newaxis, :, np.newaxis] \
            * a2[np.newaxis, np.newaxis, :] * phase_n[np.newaxis, np.newaxis, :]
        total += np.sum(coeff * fourth)
    return complex(sigma2 ** 2 * total / (nu * np.conj(nu)))
