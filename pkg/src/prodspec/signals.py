"""Snapshot synthesis: plane-wave sources plus white or spatially colored noise.

Both subarrays observe the same physical field.  Each trial draws one field
over the union aperture and masks it with the two occupancy vectors, so
shared sensors carry identical values in both snapshot matrices; this is
what the product processor's second-moment results assume.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .geometry import ProductArray
from .tapers import Spectrum
from .validation import check_direction_cosine, check_snapshot_matrix

__all__ = [
    "SourceSpec",
    "NoiseSpec",
    "SnapshotBatch",
    "array_manifold",
    "generate_snapshots",
    "batch_from_field",
    "colored_field",
]

AMPLITUDE_MODELS = ("gaussian", "deterministic")


@dataclass(frozen=True)
class SourceSpec:
    """One far-field plane wave: direction cosine, mean power, amplitude model.

    ``gaussian`` draws a circularly symmetric complex amplitude of the given
    power per trial; ``deterministic`` uses the constant ``sqrt(power)``,
    which is handy for exact-value tests.
    """

    u: float
    power: float = 1.0
    amplitude: str = "gaussian"

    def __post_init__(self):
        check_direction_cosine(self.u)
        if self.power < 0:
            raise ValueError("source power must be non-negative")
        if self.amplitude not in AMPLITUDE_MODELS:
            raise ValueError(f"amplitude model must be one of {AMPLITUDE_MODELS}")


@dataclass(frozen=True)
class NoiseSpec:
    """Ambient noise: spatially white of the given variance, or colored.

    When ``psd`` is set the field is synthesized from that spatial power
    spectral density and ``variance`` is ignored; any white floor belongs in
    the PSD itself.
    """

    variance: float = 1.0
    psd: Optional[Spectrum] = None

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError("noise variance must be non-negative")
        if self.psd is not None:
            p = np.real(self.psd.values)
            if np.any(p < 0):
                raise ValueError("colored PSD must be non-negative on its grid")


@dataclass(frozen=True)
class SnapshotBatch:
    """Per-trial complex snapshots for both subarrays.

    Rows are trials.  Entries at unoccupied grid cells are exactly zero and
    shared cells agree between ``x1`` and ``x2`` row by row.
    """

    x1: np.ndarray
    x2: np.ndarray
    seed: object = None

    @property
    def trials(self) -> int:
        return int(self.x1.shape[0])

    @property
    def extent_a(self) -> int:
        return int(self.x1.shape[1])

    @property
    def extent_b(self) -> int:
        return int(self.x2.shape[1])


def array_manifold(extent: int, u: float) -> np.ndarray:
    """Plane-wave phase vector ``exp(j pi u m)`` over ``m = 0 .. extent-1``."""
    check_direction_cosine(u)
    return np.exp(1j * np.pi * u * np.arange(extent))


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Unit-variance circular complex Gaussians, chunk-stable draw order."""
    z = rng.standard_normal(shape + (2,))
    return (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)


def colored_field(psd: Spectrum, extent: int, trials: int, seed) -> np.ndarray:
    """Zero-mean Gaussian field whose spatial PSD is the sampled ``psd``.

    The field is a sum of plane waves at the PSD grid points with
    independent circular Gaussian amplitudes of variance
    ``psd(u_q) * du / 2``, so its autocorrelation is the discretized inverse
    transform of the PSD.  The grid must be uniform with at least
    ``4 * extent`` points to keep lag aliasing away from the array support.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    u = psd.u
    q = u.size
    if q < 4 * extent:
        raise ValueError(
            f"PSD grid too coarse: {q} points for extent {extent} (need >= {4 * extent})")
    du = np.diff(u)
    if not np.allclose(du, du[0], rtol=1e-9, atol=0.0):
        raise ValueError("colored synthesis requires a uniform PSD grid")
    p = np.real(psd.values)
    if np.any(p < 0):
        raise ValueError("colored PSD must be non-negative")
    if not np.any(p > 0):
        raise ValueError("colored PSD is identically zero")
    amps = _complex_normal(rng, (trials, q)) * np.sqrt(p * du[0] / 2.0)
    waves = np.exp(1j * np.pi * np.outer(u, np.arange(extent)))
    return amps @ waves


def generate_snapshots(arr: ProductArray, sources: Sequence[SourceSpec],
                       noise: NoiseSpec, trials: int, seed) -> SnapshotBatch:
    """Draw ``trials`` i.i.d. snapshots of sources-plus-noise for both subarrays.

    One field of length ``max(extent_a, extent_b)`` is drawn per trial and
    masked by each occupancy vector, so the same source amplitudes and the
    same noise values appear wherever the subarrays share a sensor.
    Identical seeds give bit-identical batches.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    length = max(arr.extent_a, arr.extent_b)
    fld = np.zeros((trials, length), dtype=np.complex128)
    for src in sources:
        if src.amplitude == "gaussian":
            amp = _complex_normal(rng, (trials,)) * np.sqrt(src.power)
        else:
            amp = np.full(trials, np.sqrt(src.power), dtype=np.complex128)
        fld += np.outer(amp, array_manifold(length, src.u))
    if noise.psd is not None:
        fld += colored_field(noise.psd, length, trials, rng)
    elif noise.variance > 0:
        fld += _complex_normal(rng, (trials, length)) * np.sqrt(noise.variance)
    return batch_from_field(arr, fld, seed=seed)


def batch_from_field(arr: ProductArray, field_matrix, seed=None) -> SnapshotBatch:
    """Mask a (trials, n_cells) field matrix into a snapshot batch.

    The field must span at least the longer subarray extent; extra trailing
    cells are rejected rather than silently dropped.
    """
    fld = check_snapshot_matrix(field_matrix, name="field")
    length = max(arr.extent_a, arr.extent_b)
    if fld.shape[1] != length:
        raise ValueError(
            f"field has {fld.shape[1]} cells but the array spans {length}")
    x1 = fld[:, :arr.extent_a] * arr.subarray_a.indicator
    x2 = fld[:, :arr.extent_b] * arr.subarray_b.indicator
    return SnapshotBatch(x1=x1, x2=x2, seed=seed)
