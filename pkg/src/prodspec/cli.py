"""Command-line surface: geometry dumps, beampatterns, expected spectra, MC checks.

Scenario configs are JSON.  A handful of named presets ship with the
package (``prodspec expected --scenario fig2`` etc.); arbitrary scenarios
load from a path.  Exit codes: 0 success, 1 usage or config error,
2 numerical failure, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

import numpy as np

from . import fourier, io, montecarlo
from .geometry import ProductArray, make_coprime, make_nested, make_nula, make_ula
from .moments import expected_ppo, true_acf, discretized_acf
from .signals import NoiseSpec, SourceSpec
from .tapers import Spectrum, beam_metrics, make_taper, spectrum_of, weighting_function
from .validation import ConfigError, NumericalError

__all__ = ["main", "run", "load_scenario", "build_geometry", "geometry_preset",
           "psd_from_config", "expected_curves"]

GEOMETRY_PRESETS = ("fig1a", "fig1b", "fig1c", "fig1d")
SCENARIO_PRESETS = ("fig2", "fig3", "fig5", "verify_ula28", "verify_coprime28")


def geometry_preset(name: str) -> ProductArray:
    """The four bundled 28-sensor reference geometries."""
    if name == "fig1a":
        return make_coprime(3, 2, 14, 21, label="fig1a")
    if name == "fig1b":
        return make_nested(14, 21, 2, label="fig1b")
    if name == "fig1c":
        return make_ula(28, label="fig1c")
    if name == "fig1d":
        cp = make_coprime(3, 2, 14, 21)
        union = np.union1d(cp.positions_a, cp.positions_b)
        return make_nula(union, label="fig1d")
    raise ConfigError(f"unknown geometry preset {name!r}; expected one of "
                      f"{GEOMETRY_PRESETS}")


def build_geometry(cfg: dict) -> ProductArray:
    """Construct a geometry from a config dict.

    Accepts the constructor form ``{"kind": "coprime", ...}`` and the dump
    form ``{"positions_a": [...], "positions_b": [...]}``.
    """
    if "positions_a" in cfg and "positions_b" in cfg:
        try:
            return ProductArray.from_dict(cfg)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"bad geometry dump: {exc}") from exc
    kind = cfg.get("kind")
    try:
        if kind == "preset":
            return geometry_preset(cfg["name"])
        if kind == "coprime":
            return make_coprime(cfg["usf_a"], cfg["usf_b"],
                                cfg["count_a"], cfg["count_b"],
                                label=cfg.get("label", "coprime"))
        if kind == "nested":
            return make_nested(cfg["count_dense"], cfg["count_sparse"],
                               cfg["usf_sparse"], label=cfg.get("label", "nested"))
        if kind == "ula":
            return make_ula(cfg["count"], label=cfg.get("label", "ula"))
        if kind == "nula":
            return make_nula(cfg["positions"], label=cfg.get("label", "nula"))
    except KeyError as exc:
        raise ConfigError(f"geometry config missing field {exc}") from exc
    raise ConfigError(f"unknown geometry kind {kind!r}")


def load_scenario(name_or_path: str) -> dict:
    """Load a scenario preset by name or an arbitrary JSON file by path."""
    if name_or_path in SCENARIO_PRESETS:
        text = (resources.files("prodspec") / "scenarios"
                / f"{name_or_path}.json").read_text()
    else:
        try:
            with open(name_or_path) as f:
                text = f.read()
        except OSError as exc:
            raise ConfigError(f"cannot read scenario {name_or_path!r}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed scenario JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("scenario must be a JSON object")
    return cfg


def _taper_pair(arr: ProductArray, taper_cfg):
    if isinstance(taper_cfg, (list, tuple)):
        fam_a, fam_b = taper_cfg
    else:
        fam_a = fam_b = taper_cfg or "uniform"
    return make_taper(arr.subarray_a, fam_a), make_taper(arr.subarray_b, fam_b)


def _parse_sources(cfg) -> list:
    out = []
    for s in cfg or []:
        try:
            out.append(SourceSpec(u=float(s["u"]), power=float(s.get("power", 1.0)),
                                  amplitude=s.get("amplitude", "gaussian")))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad source entry {s!r}: {exc}") from exc
    return out


def psd_from_config(cfg: dict, u: np.ndarray) -> Spectrum:
    """Sample a bumps-plus-floor PSD config on a grid.

    Each bump is a Gaussian profile given by ``center``, ``width_3db`` (full
    width at half the peak) and ``peak``.
    """
    vals = np.full(u.size, float(cfg.get("floor", 0.0)))
    for bump in cfg.get("bumps", []):
        try:
            center = float(bump["center"])
            width = float(bump["width_3db"])
            peak = float(bump.get("peak", 1.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad PSD bump {bump!r}: {exc}") from exc
        s = width / (2.0 * np.sqrt(2.0 * np.log(2.0)))
        vals += peak * np.exp(-((u - center) ** 2) / (2.0 * s ** 2))
    if np.any(vals < 0):
        raise ConfigError("PSD config produces negative values")
    return Spectrum(u, vals)


def _parse_noise(cfg, u: np.ndarray) -> NoiseSpec:
    cfg = cfg or {}
    if "psd" in cfg:
        return NoiseSpec(variance=float(cfg.get("variance", 1.0)),
                         psd=psd_from_config(cfg["psd"], u))
    return NoiseSpec(variance=float(cfg.get("variance", 1.0)))


def _scenario_arrays(cfg: dict):
    entries = cfg.get("arrays")
    if not entries:
        raise ConfigError("scenario defines no arrays")
    out = []
    for entry in entries:
        arr = build_geometry(entry.get("geometry", entry))
        label = entry.get("label") or arr.label or f"array{len(out)}"
        w1, w2 = _taper_pair(arr, entry.get("taper"))
        out.append((label, arr, w1, w2))
    return out


def expected_curves(cfg: dict, n_grid: int):
    """Expected periodogram of every scenario array on a common grid.

    Returns ``(u, curves, reference)`` where ``curves`` maps labels to
    complex expected values and ``reference`` is the true PSD when the
    scenario noise is colored (else None).
    """
    u = fourier.standard_grid(n_grid)
    sources = _parse_sources(cfg.get("sources"))
    noise = _parse_noise(cfg.get("noise"), u)
    curves = {}
    for label, arr, w1, w2 in _scenario_arrays(cfg):
        wc = weighting_function(w1, w2)
        sigma2 = 0.0 if noise.psd is not None else noise.variance
        r = true_acf(sources, sigma2, wc.lags)
        if noise.psd is not None:
            r = r + discretized_acf(noise.psd, wc.lags)
        curves[label] = expected_ppo(r, wc, u).values
    reference = np.asarray(noise.psd.values) if noise.psd is not None else None
    return u, curves, reference


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def cmd_geometry(args) -> int:
    if args.scenario in GEOMETRY_PRESETS:
        arr = geometry_preset(args.scenario)
    else:
        cfg = load_scenario(args.scenario)
        arr = build_geometry(cfg)
    f = _open_out(args.out)
    try:
        io.write_geometry_json(f, arr)
    finally:
        if f is not sys.stdout:
            f.close()
    print(f"{arr.label or 'geometry'}: {arr.n_sensors} sensors "
          f"({arr.subarray_a.n_sensors} + {arr.subarray_b.n_sensors}, "
          f"{arr.n_shared} shared), apertures "
          f"{arr.subarray_a.aperture}/{arr.subarray_b.aperture}",
          file=sys.stderr)
    return 0


def cmd_beampattern(args) -> int:
    if args.scenario in GEOMETRY_PRESETS:
        arr = geometry_preset(args.scenario)
        taper = args.taper or "uniform"
    else:
        cfg = load_scenario(args.scenario)
        if "arrays" in cfg:
            label, arr, _, _ = _scenario_arrays(cfg)[0]
            taper = args.taper or cfg["arrays"][0].get("taper", "uniform")
        else:
            arr = build_geometry(cfg)
            taper = args.taper or "uniform"
    w1, w2 = _taper_pair(arr, taper)
    wc = weighting_function(w1, w2)
    spec = spectrum_of(wc, fourier.standard_grid(args.grid))
    f = _open_out(args.out)
    try:
        io.write_spectrum_csv(f, spec)
    finally:
        if f is not sys.stdout:
            f.close()
    metrics = beam_metrics(spec)
    print(f"{arr.label or 'array'} [{taper}]: "
          f"MLW(null-to-null)={metrics.mlw_null_to_null:.6g} "
          f"PSL={metrics.psl_db:.2f} dB", file=sys.stderr)
    return 0


def cmd_expected(args) -> int:
    cfg = load_scenario(args.scenario)
    n_grid = args.grid or int(cfg.get("grid", 4096))
    u, curves, reference = expected_curves(cfg, n_grid)
    f = _open_out(args.out)
    try:
        io.write_multi_spectrum_csv(f, u, curves, reference=reference)
    finally:
        if f is not sys.stdout:
            f.close()
    return 0


def cmd_verify(args) -> int:
    cfg = load_scenario(args.scenario)
    trials = args.trials or int(cfg.get("trials", 100_000))
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    checks = cfg.get("checks")
    if not checks:
        raise ConfigError("verify scenario defines no checks")
    u = fourier.standard_grid(args.grid or int(cfg.get("grid", 256)))
    sources = _parse_sources(cfg.get("sources"))
    noise = _parse_noise(cfg.get("noise"), fourier.standard_grid(4096))
    reports = []
    for label, arr, w1, w2 in _scenario_arrays(cfg):
        if "mean" in checks:
            c = checks["mean"]
            reports.append(montecarlo.run_mean_check(
                arr, w1, w2, noise, sources,
                trials=int(c.get("trials", trials)), seed=seed,
                u_grid=fourier.standard_grid(int(c.get("grid", 256))),
                z=float(c.get("z", 4.0)),
                min_pass_fraction=float(c.get("min_pass_fraction", 0.99)),
                label=label))
        if "cov" in checks:
            c = checks["cov"]
            reports.append(montecarlo.run_cov_check(
                arr, w1, w2, sigma2=noise.variance,
                trials=int(c.get("trials", trials)), seed=seed,
                u_pairs=c.get("pairs", [[0.0, 0.0]]),
                z=float(c.get("z", 5.0)),
                n_boot=int(c.get("n_boot", 200)),
                theory_scale=float(c.get("theory_scale", 1.0)),
                label=label))
        if "averaging" in checks:
            c = checks["averaging"]
            reports.append(montecarlo.run_averaging_check(
                arr, w1, w2, sigma2=noise.variance,
                k_list=c.get("k_list", [1, 4, 16]),
                trials=int(c.get("trials", 20_000)), seed=seed,
                u=float(c.get("u", 0.25)),
                slope_tol=float(c.get("slope_tol", 0.05)), label=label))
    for rep in reports:
        print(rep.table())
    if args.out:
        with open(args.out, "w") as f:
            json.dump([rep.to_dict() for rep in reports], f, indent=2,
                      sort_keys=True)
            f.write("\n")
    return 0 if all(rep.passed for rep in reports) else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prodspec",
        description="Tapered product-processing spectral estimation for "
                    "sparse line arrays")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grid_default=None):
        p.add_argument("--scenario", required=True,
                       help="preset name or path to a JSON config")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--grid", type=int, default=grid_default,
                       help="number of direction-cosine samples")
        p.add_argument("--trials", type=int, help="Monte-Carlo trial count")
        p.add_argument("--seed", type=int, help="base RNG seed")
        p.add_argument("--format", choices=["csv"], default="csv",
                       help="tabular output format")

    p = sub.add_parser("geometry", help="dump a geometry as JSON")
    common(p)
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("beampattern",
                       help="weighting-function spectrum CSV plus MLW/PSL")
    common(p, grid_default=4096)
    p.add_argument("--taper", help="taper family for both subarrays")
    p.set_defaults(func=cmd_beampattern)

    p = sub.add_parser("expected", help="expected periodogram curves as CSV")
    common(p)
    p.set_defaults(func=cmd_expected)

    p = sub.add_parser("verify", help="run Monte-Carlo checks against theory")
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if not exc.code else 1
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, ValueError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
