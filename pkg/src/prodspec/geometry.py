"""Product-array geometries on a uniform half-wavelength grid.

A product array pairs two line subarrays that populate one shared aperture
grid.  Positions are dimensionless indices in multiples of half a
wavelength, so an extent of ``M`` covers an aperture of ``M - 1`` such
units.  Constructors cover the standard designs: coprime pairs of sparse
uniform subarrays, nested dense/sparse pairs, the plain ULA read as a
product array with itself, and arbitrary identical-subarray NULAs.  The
difference coarray counts sensor pairs at every spatial lag and governs
which autocorrelation lags the array can measure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .validation import check_indicator

__all__ = [
    "SubarraySpec",
    "ProductArray",
    "DifferenceCoarray",
    "make_coprime",
    "make_nested",
    "make_ula",
    "make_nula",
    "difference_coarray",
]


@dataclass(frozen=True)
class SubarraySpec:
    """One line subarray over a contiguous index grid.

    ``indicator`` holds a one wherever a sensor sits.  Its length is the
    subarray extent; the first and last cells are always occupied, so the
    extent pins the aperture exactly.
    """

    indicator: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "indicator", check_indicator(self.indicator))

    @classmethod
    def from_positions(cls, positions) -> "SubarraySpec":
        """Build from a collection of occupied grid indices (must include 0)."""
        pos = np.unique(np.asarray(list(positions), dtype=np.int64))
        if pos.size == 0:
            raise ValueError("position set is empty")
        if pos[0] < 0:
            raise ValueError("positions must be non-negative grid indices")
        if pos[0] != 0:
            raise ValueError("position set must contain the origin index 0")
        ind = np.zeros(int(pos[-1]) + 1, dtype=np.int64)
        ind[pos] = 1
        return cls(ind)

    @property
    def extent(self) -> int:
        return int(self.indicator.size)

    @property
    def aperture(self) -> int:
        return self.extent - 1

    @property
    def positions(self) -> np.ndarray:
        return np.flatnonzero(self.indicator)

    @property
    def n_sensors(self) -> int:
        return int(self.indicator.sum())


@dataclass(frozen=True)
class ProductArray:
    """Two subarrays sharing one aperture grid, multiplied at the output stage."""

    subarray_a: SubarraySpec
    subarray_b: SubarraySpec
    label: str = ""

    @property
    def extent_a(self) -> int:
        return self.subarray_a.extent

    @property
    def extent_b(self) -> int:
        return self.subarray_b.extent

    @property
    def positions_a(self) -> np.ndarray:
        return self.subarray_a.positions

    @property
    def positions_b(self) -> np.ndarray:
        return self.subarray_b.positions

    @property
    def shared_positions(self) -> np.ndarray:
        """Grid indices occupied in both subarrays (never empty: both hold 0)."""
        return np.intersect1d(self.positions_a, self.positions_b)

    @property
    def n_shared(self) -> int:
        return int(self.shared_positions.size)

    @property
    def n_sensors(self) -> int:
        """Number of distinct physical sensors across both subarrays."""
        return int(np.union1d(self.positions_a, self.positions_b).size)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "extent_a": self.extent_a,
            "extent_b": self.extent_b,
            "positions_a": [int(p) for p in self.positions_a],
            "positions_b": [int(p) for p in self.positions_b],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProductArray":
        sub_a = SubarraySpec.from_positions(d["positions_a"])
        sub_b = SubarraySpec.from_positions(d["positions_b"])
        if "extent_a" in d and sub_a.extent != int(d["extent_a"]):
            raise ValueError("extent_a inconsistent with positions_a")
        if "extent_b" in d and sub_b.extent != int(d["extent_b"]):
            raise ValueError("extent_b inconsistent with positions_b")
        return cls(sub_a, sub_b, label=str(d.get("label", "")))


def make_coprime(usf_a: int, usf_b: int, count_a: int, count_b: int,
                 label: str = "coprime") -> ProductArray:
    """Coprime product array: two sparse uniform subarrays with coprime spacings.

    Subarray A occupies ``{0, usf_a, ..., (count_a - 1) * usf_a}`` and B the
    analogous set with ``usf_b``.  The spacings must be coprime so that the
    only coincident sensors fall on multiples of ``usf_a * usf_b``.
    """
    for name, v in (("usf_a", usf_a), ("usf_b", usf_b),
                    ("count_a", count_a), ("count_b", count_b)):
        if int(v) < 1:
            raise ValueError(f"{name} must be a positive integer, got {v}")
    if gcd(usf_a, usf_b) != 1:
        raise ValueError(
            f"undersampling factors must be coprime; gcd({usf_a}, {usf_b}) = "
            f"{gcd(usf_a, usf_b)}")
    sub_a = SubarraySpec.from_positions(np.arange(count_a) * usf_a)
    sub_b = SubarraySpec.from_positions(np.arange(count_b) * usf_b)
    return ProductArray(sub_a, sub_b, label=label)


def make_nested(count_dense: int, count_sparse: int, usf_sparse: int,
                label: str = "nested") -> ProductArray:
    """Nested product array: a dense ULA paired with a sparse uniform subarray.

    Subarray A is a contiguous ULA of ``count_dense`` sensors; Subarray B
    holds ``count_sparse`` sensors spaced ``usf_sparse`` cells apart,
    anchored at the origin so the two subarrays share the first sensor.
    """
    if count_dense < 1 or count_sparse < 1:
        raise ValueError("sensor counts must be positive")
    if usf_sparse < 2:
        raise ValueError(
            f"sparse spacing must be at least 2 for a nested design, got {usf_sparse}")
    sub_a = SubarraySpec.from_positions(np.arange(count_dense))
    sub_b = SubarraySpec.from_positions(np.arange(count_sparse) * usf_sparse)
    return ProductArray(sub_a, sub_b, label=label)


def make_ula(count: int, label: str = "ula") -> ProductArray:
    """Standard ULA read as a product array of two identical dense subarrays."""
    if count < 1:
        raise ValueError("sensor count must be positive")
    sub = SubarraySpec.from_positions(np.arange(count))
    return ProductArray(sub, sub, label=label)


def make_nula(positions, label: str = "nula") -> ProductArray:
    """Non-uniform line array: both subarrays carry the same arbitrary layout."""
    sub = SubarraySpec.from_positions(positions)
    return ProductArray(sub, sub, label=label)


@dataclass(frozen=True)
class DifferenceCoarray:
    """Pair counts per spatial lag ``k = m - n`` between the two subarrays."""

    lags: np.ndarray
    weights: np.ndarray

    def weight_at(self, k: int) -> int:
        i = int(k) - int(self.lags[0])
        if i < 0 or i >= self.lags.size:
            return 0
        return int(self.weights[i])


def difference_coarray(arr: ProductArray) -> DifferenceCoarray:
    """Count sensor pairs ``(m, n)`` with ``m`` in A, ``n`` in B and ``m - n = k``.

    The counts live on lags ``-(extent_b - 1) .. extent_a - 1`` and equal the
    unnormalized cross-correlation of the two occupancy vectors; under
    uniform unit tapers they are exactly the unnormalized lag weighting of
    the product processor.
    """
    ka = arr.subarray_a.indicator
    kb = arr.subarray_b.indicator
    weights = np.correlate(ka, kb, mode="full")
    lags = np.arange(-(arr.extent_b - 1), arr.extent_a)
    return DifferenceCoarray(lags=lags, weights=weights)
