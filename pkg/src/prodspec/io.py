"""CSV and JSON export helpers.

All writers format floats with Python's shortest-roundtrip ``repr`` so that
repeated runs of the same scenario produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from typing import Optional

import numpy as np

from .estimator import AcfEstimate, PpoEstimate
from .geometry import ProductArray
from .moments import CovarianceCurve
from .tapers import Spectrum, TaperedWeights

__all__ = [
    "power_db",
    "write_spectrum_csv",
    "write_multi_spectrum_csv",
    "write_taper_csv",
    "write_acf_csv",
    "write_ppo_csv",
    "write_covariance_csv",
    "write_lag3_csv",
    "write_geometry_json",
]

_DB_FLOOR = 1e-300


def power_db(values: np.ndarray) -> np.ndarray:
    """Magnitude of power-domain samples in dB, floored to avoid -inf."""
    return 10.0 * np.log10(np.maximum(np.abs(values), _DB_FLOOR))


def _rows_to_csv(f, header, rows):
    w = csv.writer(f, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v
                    for v in row])


def write_spectrum_csv(f, spec: Spectrum, trials: Optional[int] = None) -> None:
    """Columns (u, re, im, power_db), plus a trials column when given."""
    db = power_db(spec.values)
    header = ["u", "re", "im", "power_db"] + (["trials"] if trials is not None else [])
    rows = []
    for i in range(spec.u.size):
        row = [float(spec.u[i]), float(spec.values[i].real),
               float(spec.values[i].imag), float(db[i])]
        if trials is not None:
            row.append(trials)
        rows.append(row)
    _rows_to_csv(f, header, rows)


def write_multi_spectrum_csv(f, u: np.ndarray, curves: dict,
                             reference: Optional[np.ndarray] = None,
                             reference_name: str = "true_psd") -> None:
    """Several labelled curves on one grid: (re, im, power_db) per label."""
    header = ["u"]
    if reference is not None:
        header += [f"{reference_name}_db"]
    for label in curves:
        header += [f"{label}_re", f"{label}_im", f"{label}_db"]
    dbs = {label: power_db(v) for label, v in curves.items()}
    ref_db = power_db(reference) if reference is not None else None
    rows = []
    for i in range(u.size):
        row = [float(u[i])]
        if ref_db is not None:
            row.append(float(ref_db[i]))
        for label, v in curves.items():
            row += [float(v[i].real), float(v[i].imag), float(dbs[label][i])]
        rows.append(row)
    _rows_to_csv(f, header, rows)


def write_taper_csv(f, w: TaperedWeights) -> None:
    """Columns (index, re, im) over the full subarray extent."""
    rows = [[i, float(w.values[i].real), float(w.values[i].imag)]
            for i in range(w.extent)]
    _rows_to_csv(f, ["index", "re", "im"], rows)


def write_acf_csv(f, acf: AcfEstimate) -> None:
    """Columns (k, re, im) over the lag support."""
    rows = [[int(acf.lags[i]), float(acf.values[i].real), float(acf.values[i].imag)]
            for i in range(acf.lags.size)]
    _rows_to_csv(f, ["k", "re", "im"], rows)


def write_ppo_csv(f, est: PpoEstimate) -> None:
    """Columns (u, re, im, power_db, trials)."""
    write_spectrum_csv(f, Spectrum(est.u, est.values), trials=est.trials_averaged)


def write_covariance_csv(f, curve: CovarianceCurve) -> None:
    """Columns (delta_u, re, im)."""
    rows = [[float(curve.delta_u[i]), float(curve.values[i].real),
             float(curve.values[i].imag)] for i in range(curve.delta_u.size)]
    _rows_to_csv(f, ["delta_u", "re", "im"], rows)


def write_lag3_csv(f, lag_start, values: np.ndarray) -> None:
    """Flattened 3-D lag tensor as (kx, ky, kz, re, im), x index fastest."""
    rows = []
    nx, ny, nz = values.shape
    for kz in range(nz):
        for ky in range(ny):
            for kx in range(nx):
                v = values[kx, ky, kz]
                rows.append([lag_start[0] + kx, lag_start[1] + ky,
                             lag_start[2] + kz, float(v.real), float(v.imag)])
    _rows_to_csv(f, ["kx", "ky", "kz", "re", "im"], rows)


def write_geometry_json(f, arr: ProductArray) -> None:
    json.dump(arr.to_dict(), f, indent=2, sort_keys=True)
    f.write("\n")
