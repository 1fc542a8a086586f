"""Discrete-space Fourier evaluation on direction-cosine grids.

Lag sequences sampled on the half-wavelength grid transform as
``W(u) = sum_k x[k] exp(-j pi u k)``; with the grid unit fixed at half a
wavelength the transform is periodic in ``u`` with period 2, so the natural
evaluation domain is ``[-1, 1)``.  Uniform grids over that interval admit an
FFT fast path; everything else falls back to direct summation.
"""

import numpy as np

from .validation import check_u_grid

__all__ = [
    "standard_grid",
    "closed_grid",
    "is_standard_grid",
    "dtft",
    "dtft_standard_grid",
    "evaluate_lags",
    "dtft3",
    "periodic_convolve",
]


def standard_grid(n: int) -> np.ndarray:
    """`n` uniform direction-cosine samples on [-1, 1), endpoint excluded."""
    if n < 1:
        raise ValueError("grid size must be positive")
    return -1.0 + 2.0 * np.arange(n) / n


def closed_grid(n: int) -> np.ndarray:
    """`n` uniform samples on the closed interval [-1, 1] (for quadrature)."""
    if n < 2:
        raise ValueError("closed grid needs at least 2 points")
    return np.linspace(-1.0, 1.0, n)


def is_standard_grid(u: np.ndarray) -> bool:
    n = u.size
    if n < 1:
        return False
    return bool(np.allclose(u, standard_grid(n), rtol=0.0, atol=1e-12))


def dtft(values, lag_start: int, u) -> np.ndarray:
    """Direct evaluation of ``sum_k x[k] exp(-j pi u k)`` at arbitrary points.

    ``values`` may be 1-D (one sequence) or 2-D (one sequence per row, the
    transform applied along the last axis); lags run from ``lag_start``
    upward.
    """
    values = np.asarray(values, dtype=np.complex128)
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    k = lag_start + np.arange(values.shape[-1])
    phases = np.exp(-1j * np.pi * np.outer(k, u))
    return values @ phases


def dtft_standard_grid(values, lag_start: int, n: int) -> np.ndarray:
    """FFT evaluation of the transform on ``standard_grid(n)``.

    Requires the lag support to fit within one period (``len(values) <= n``).
    """
    values = np.asarray(values, dtype=np.complex128)
    m = values.shape[-1]
    if m > n:
        raise ValueError(f"lag support {m} exceeds grid size {n}")
    k = lag_start + np.arange(m)
    # exp(-j pi u_g k) = (-1)^k exp(-2j pi g k / n) on u_g = -1 + 2g/n
    signs = 1.0 - 2.0 * (np.abs(k) % 2)
    buf = np.zeros(values.shape[:-1] + (n,), dtype=np.complex128)
    buf[..., np.mod(k, n)] = values * signs
    return np.fft.fft(buf, axis=-1)


def evaluate_lags(values, lag_start: int, u) -> np.ndarray:
    """Transform a lag sequence onto ``u``, using the FFT when the grid allows."""
    u = check_u_grid(u)
    values = np.asarray(values, dtype=np.complex128)
    if values.shape[-1] <= u.size and is_standard_grid(u):
        return dtft_standard_grid(values, lag_start, u.size)
    return dtft(values, lag_start, u)


def dtft3(tensor, lag_start, u_points) -> np.ndarray:
    """Transform a 3-D lag tensor at direction-cosine triples.

    ``u_points`` has shape (n_points, 3); the result is
    ``sum_k x[k] exp(-j pi (u_x k_x + u_y k_y + u_z k_z))`` per point.
    """
    tensor = np.asarray(tensor, dtype=np.complex128)
    u_points = np.atleast_2d(np.asarray(u_points, dtype=np.float64))
    if u_points.shape[1] != 3 or tensor.ndim != 3:
        raise ValueError("need a 3-D lag tensor and (n_points, 3) directions")
    phases = []
    for axis in range(3):
        k = lag_start[axis] + np.arange(tensor.shape[axis])
        phases.append(np.exp(-1j * np.pi * np.outer(u_points[:, axis], k)))
    return np.einsum("px,py,pz,xyz->p", phases[0], phases[1], phases[2], tensor)


def periodic_convolve(f_vals: np.ndarray, g_vals: np.ndarray) -> np.ndarray:
    """Periodic convolution ``(1/2) integral f(v) g(u - v) dv`` on a standard grid.

    Both sequences must be sampled on the same ``standard_grid(n)``; the
    period-2 wraparound and the 1/2 normalization of the direction-cosine
    Fourier pair are built in.
    """
    f_vals = np.asarray(f_vals, dtype=np.complex128)
    g_vals = np.asarray(g_vals, dtype=np.complex128)
    n = f_vals.size
    if g_vals.size != n:
        raise ValueError("sequences must share one grid")
    if n % 2:
        raise ValueError("periodic convolution needs an even grid size")
    # g(u_j - u_i) = g_shifted[(j - i) mod n] with a half-period index shift
    g_shifted = np.roll(g_vals, -(n // 2))
    out = np.fft.ifft(np.fft.fft(f_vals) * np.fft.fft(g_shifted))
    return out / n
