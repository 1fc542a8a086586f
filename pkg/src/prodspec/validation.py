"""Input validation helpers shared across the package."""

import numpy as np

__all__ = [
    "NumericalError",
    "ConfigError",
    "check_indicator",
    "check_snapshot_matrix",
    "check_u_grid",
    "check_direction_cosine",
]


class NumericalError(ValueError):
    """A computation is undefined for the given inputs.

    Raised for degenerate normalizations (orthogonal tapers), identically
    zero tapers, patterns without detectable nulls, and similar conditions
    that are mathematical dead ends rather than malformed arguments.
    """


class ConfigError(ValueError):
    """A scenario or geometry config is malformed or names an unknown preset."""


def check_indicator(occupancy) -> np.ndarray:
    """Validate a sensor occupancy vector and return it as a read-only int array.

    The vector marks occupied half-wavelength grid cells with ones.  The
    first and last entries must be one: the origin sensor anchors the array
    and the trailing sensor pins the extent to the aperture.
    """
    ind = np.asarray(occupancy)
    if ind.ndim != 1 or ind.size == 0:
        raise ValueError("occupancy must be a non-empty 1-D sequence")
    if not np.isin(ind, (0, 1)).all():
        raise ValueError("occupancy entries must be 0 or 1")
    ind = ind.astype(np.int64)
    if ind[0] != 1:
        raise ValueError("first grid cell must hold a sensor (array anchored at index 0)")
    if ind[-1] != 1:
        raise ValueError("last grid cell must hold a sensor (extent must equal the aperture)")
    ind.setflags(write=False)
    return ind


def check_snapshot_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce snapshot data to a 2-D complex matrix (n_snapshots, n_cells)."""
    X = np.asarray(X)
    if X.ndim == 1:
        X = X[np.newaxis, :]
    if X.ndim != 2 or X.shape[1] == 0:
        raise ValueError(f"{name} must be a 2-D (n_snapshots, n_cells) matrix")
    X = np.ascontiguousarray(X, dtype=np.complex128)
    if not np.isfinite(X.view(np.float64)).all():
        raise ValueError(f"{name} contains non-finite entries")
    return X


def check_u_grid(u) -> np.ndarray:
    """Validate a direction-cosine sample grid: 1-D, ascending, inside [-1, 1]."""
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 1 or u.size == 0:
        raise ValueError("u grid must be a non-empty 1-D array")
    if u.size > 1 and not (np.diff(u) > 0).all():
        raise ValueError("u grid must be strictly ascending")
    if u[0] < -1.0 or u[-1] > 1.0:
        raise ValueError("u grid must lie within [-1, 1]")
    return u


def check_direction_cosine(u) -> float:
    u = float(u)
    if not -1.0 <= u <= 1.0:
        raise ValueError(f"direction cosine {u} outside [-1, 1]")
    return u
