"""Command-line front end: configuration, orchestration, and report I/O.

One JSON config drives one subcommand per invocation.  Unknown config keys
are rejected, every defaulted knob is echoed into the output metadata, and
each output file carries the sha256 of the resolved config and of its own
payload so reruns are verifiably byte-identical.
"""

from __future__ import annotations

import argparse
import copy
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import dispersion as disp
from .acceptance import run_acceptance
from .errors import FitDomainError, ParameterError, SlabDecayError
from .stokes1d import Grid1D, evolve, fit_decay_rate, surface_state, zero_state
from .symbols import SlabParams, Symbol, load_symbol_table
from .synthesis import (InitialDataSpec, dispersion_rate, synthesize_plane,
                        synthesize_torus, theoretical_envelope)

EXIT_OK = 0
EXIT_ACCEPTANCE = 1
EXIT_USAGE = 2

DEFAULT_CONFIG = {
    "symbol": {"family": "fractional", "g": 1.0, "sigma": 1.0, "r": 1.0,
               "alpha": 1.0, "theta": 0.25, "table_path": None},
    "slab": {"ell": 1.0, "dim": 3},
    "seed": 7,
    "output_dir": "out",
    "tolerances": {"root_rtol": 1e-12, "min_fit_quality": 0.0},
    "dispersion": {"moduli": [0.01, 0.1, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0],
                   "crossover": 1.0},
    "evolve": {"xi_mod": 8.0, "n_cells": 256, "T": 5.0, "dt": None,
               "c_beta": 1e-2, "initial_h": 1.0, "fit_window": None},
    "synthesize": {
        "domain": "torus",
        "data": {"family": "sobolev_h", "s": 2.0, "lambda": 2.0,
                 "cutoff": 1.0, "eps": 0.1, "velocity_mode": "zero"},
        "lattice_radius": 12, "tail_radius": None, "bins_per_decade": 64,
        "evolve_radius": 32.0, "T": 2.0, "dt": None, "law": "auto",
        "fit_window": None,
        "quad": {"c0": 1.0, "k_min_factor": 1e-3, "nodes_per_decade": 24,
                 "k_max": None},
    },
    "verify": {"only": None},
}


def _merge_strict(defaults, user, path=""):
    """Defaults overlaid with user values; unknown keys rejected with a path."""
    out = copy.deepcopy(defaults)
    for key, val in user.items():
        here = f"{path}.{key}" if path else key
        if key not in defaults:
            raise ParameterError(f"unknown config key: {here}")
        if isinstance(defaults[key], dict) and isinstance(val, dict):
            out[key] = _merge_strict(defaults[key], val, here)
        else:
            out[key] = val
    return out


def load_config(path: str | None) -> dict:
    if path is None:
        return copy.deepcopy(DEFAULT_CONFIG)
    text = Path(path).read_text()
    try:
        user = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParameterError(f"config is not valid JSON: {err}") from err
    if not isinstance(user, dict):
        raise ParameterError("config root must be a JSON object")
    return _merge_strict(DEFAULT_CONFIG, user)


def build_slab(cfg: dict) -> SlabParams:
    sc = cfg["symbol"]
    table = None
    if sc["table_path"]:
        table = load_symbol_table(sc["table_path"])
    sym = Symbol(family=sc["family"], g=sc["g"], sigma=sc["sigma"], r=sc["r"],
                 alpha=sc["alpha"], theta=sc["theta"], table=table)
    return SlabParams(ell=cfg["slab"]["ell"], dim=cfg["slab"]["dim"], symbol=sym)


def _config_hash(cfg: dict) -> str:
    return hashlib.sha256(
        json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (np.floating,)):
        return repr(float(value))
    return str(value)


def write_csv(path: Path, header: list, rows: list, cfg: dict) -> None:
    body_lines = [",".join(header)]
    body_lines += [",".join(_fmt(v) for v in row) for row in rows]
    body = "\n".join(body_lines) + "\n"
    content_hash = hashlib.sha256(body.encode()).hexdigest()
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(f"# config_sha256: {_config_hash(cfg)}\n")
        fh.write(f"# content_sha256: {content_hash}\n")
        fh.write(body)


def write_json(path: Path, doc: dict, cfg: dict) -> None:
    doc = dict(doc)
    doc["resolved_config"] = cfg
    payload = json.dumps(doc, sort_keys=True, indent=2, default=_json_default)
    doc["content_sha256"] = hashlib.sha256(payload.encode()).hexdigest()
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(json.dumps(doc, sort_keys=True, indent=2, default=_json_default))
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if hasattr(obj, "__dict__"):
        return vars(obj)
    raise TypeError(f"not JSON serializable: {type(obj)}")


def cmd_dispersion(cfg: dict, out_dir: Path, jobs: int | None) -> int:
    slab = build_slab(cfg)
    moduli = cfg["dispersion"]["moduli"]
    rows = disp.sweep_dispersion(slab, moduli, crossover=cfg["dispersion"]["crossover"])
    csv_rows, summary_rows = [], []
    mu0 = slab.mu(0.0)
    for k, res in rows:
        if isinstance(res, Exception):
            csv_rows.append([k, "error", "", "", "", "", "",
                             f"{type(res).__name__}: {res}"])
            summary_rows.append({"xi_mod": k, "error": str(res)})
            continue
        kappa = res.kappa if res.kappa is not None else ""
        csv_rows.append([
            k, res.method, res.rho.real, res.rho.imag,
            kappa.real if kappa != "" else "", kappa.imag if kappa != "" else "",
            abs(res.det_residual), "",
        ])
        mu = slab.mu(k)
        entry = {"xi_mod": k, "method": res.method, "rho_re": res.rho.real}
        if res.method == "bracket":
            entry["rho_xi_over_mu"] = res.rho.real * k / mu
            entry["in_bracket"] = bool(
                disp.KAPPA_MINUS - 1e-12 <= entry["rho_xi_over_mu"]
                <= disp.KAPPA_PLUS + 1e-12)
        if res.method == "low_freq":
            entry["kappa_re"] = res.kappa.real
            entry["kappa_error_vs_limit"] = abs(res.kappa - mu0 * slab.ell ** 3 / 3.0)
        summary_rows.append(entry)
    write_csv(out_dir / "dispersion.csv",
              ["xi_mod", "method", "rho_re", "rho_im", "kappa_re", "kappa_im",
               "det_residual", "error"], csv_rows, cfg)
    lf = [e for e in summary_rows if e.get("method") == "low_freq"]
    lf.sort(key=lambda e: e["xi_mod"], reverse=True)
    errs = [e["kappa_error_vs_limit"] for e in lf]
    write_json(out_dir / "dispersion_summary.json", {
        "rows": summary_rows,
        "bracket_all_inside": all(e.get("in_bracket", True) for e in summary_rows),
        "kappa_trend_decreasing": all(b < a for a, b in zip(errs, errs[1:])),
    }, cfg)
    return EXIT_OK


def cmd_evolve(cfg: dict, out_dir: Path, jobs: int | None) -> int:
    slab = build_slab(cfg)
    ec = cfg["evolve"]
    k = float(ec["xi_mod"])
    grid = Grid1D(int(ec["n_cells"]), slab.ell)
    rate_est = dispersion_rate(slab, k) if k > 0 else math.pi ** 2 / 2.0
    dt = ec["dt"]
    if dt is None:
        dt = 0.05 / max(abs(rate_est or 1.0), 1.0)
    if ec["initial_h"] == 0.0:
        initial = zero_state(grid)
    else:
        initial = surface_state(grid, ec["initial_h"])
    curve, _ = evolve(slab, k, initial, T=float(ec["T"]), dt=float(dt),
                      c_beta=float(ec["c_beta"]), grid=grid)
    rows = list(zip(curve.times, curve.values,
                    curve.meta["dissipation"], curve.meta["lyapunov"]))
    write_csv(out_dir / "evolve.csv", ["t", "E", "D", "lyapunov"], rows, cfg)
    summary = {"xi_mod": k, "dt": dt, "n_cells": grid.n_cells,
               "mu": curve.meta["mu"], "projected": curve.meta["projected"],
               "envelope": theoretical_envelope(slab, k)}
    window = tuple(ec["fit_window"]) if ec["fit_window"] else \
        (0.25 * float(ec["T"]), float(ec["T"]))
    try:
        rate, quality = fit_decay_rate(curve, window)
        summary["fit"] = {"rate": rate, "quality": quality, "window": window}
        if rate_est:
            summary["dispersion_cross_check"] = {
                "rate_2re_rho": rate_est,
                "rel_difference": abs(rate - rate_est) / abs(rate_est)}
    except FitDomainError as err:
        summary["fit_error"] = str(err)
    write_json(out_dir / "evolve_summary.json", summary, cfg)
    return EXIT_OK


def cmd_synthesize(cfg: dict, out_dir: Path, jobs: int | None) -> int:
    slab = build_slab(cfg)
    sc = cfg["synthesize"]
    dc = sc["data"]
    data = InitialDataSpec(family=dc["family"], s=dc["s"], lam=dc["lambda"],
                           cutoff=dc["cutoff"], eps=dc["eps"],
                           velocity_mode=dc["velocity_mode"])
    window = tuple(sc["fit_window"]) if sc["fit_window"] else None
    dt = sc["dt"] if sc["dt"] is not None else math.inf
    if sc["domain"] == "torus":
        result = synthesize_torus(
            slab, data, lattice_radius=int(sc["lattice_radius"]),
            T=float(sc["T"]), dt=dt, tail_radius=sc["tail_radius"],
            bins_per_decade=int(sc["bins_per_decade"]),
            evolve_radius=float(sc["evolve_radius"]), law=sc["law"],
            fit_window=window, jobs=jobs)
    elif sc["domain"] == "plane":
        quad = {key: val for key, val in sc["quad"].items() if val is not None}
        result = synthesize_plane(
            slab, data, quad, T=float(sc["T"]), dt=dt, law=sc["law"],
            fit_window=window, evolve_radius=float(sc["evolve_radius"]),
            jobs=jobs)
    else:
        raise ParameterError(f"unknown synthesize domain {sc['domain']!r}")
    rows = list(zip(result.curve.times, result.curve.values))
    write_csv(out_dir / "synthesis.csv", ["t", "E"], rows, cfg)
    fit = None
    if result.fit is not None:
        fit = {"law": result.fit.law, "exponent": result.fit.exponent,
               "quality": result.fit.quality, "alpha": result.fit.alpha,
               "window": list(result.fit.window)}
    envelopes = {str(k): theoretical_envelope(slab, k)
                 for k in sorted(result.per_mode_cache)[:16]}
    write_json(out_dir / "synthesis_report.json", {
        "fit": fit, "curve_meta": result.curve.meta,
        "calibration": result.meta.get("calibration", {}),
        "envelope_samples": envelopes,
    }, cfg)
    return EXIT_OK


def cmd_verify(cfg: dict, out_dir: Path, jobs: int | None, seed: int) -> int:
    only = cfg["verify"]["only"]
    results = run_acceptance(jobs=jobs, seed=seed,
                             only=[int(c) for c in only] if only else None)
    doc = {"criteria": [{"id": r.cid, "name": r.name, "passed": r.passed,
                         "details": r.details} for r in results],
           "all_passed": all(r.passed for r in results)}
    write_json(out_dir / "verify_report.json", doc, cfg)
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.cid:2d} {r.name}")
    return EXIT_OK if doc["all_passed"] else EXIT_ACCEPTANCE


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="slabdecay",
        description="Decay-rate laboratory for the free-boundary Stokes slab")
    parser.add_argument("command",
                        choices=["dispersion", "evolve", "synthesize",
                                 "verify", "sweep"])
    parser.add_argument("--config", default=None, help="JSON config path")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--jobs", type=int, default=None,
                        help="worker processes for per-frequency tasks")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for randomized checks")
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code not in (0, None) else 0
    try:
        cfg = load_config(args.config)
        out_dir = Path(args.out if args.out is not None else cfg["output_dir"])
        seed = args.seed if args.seed is not None else int(cfg["seed"])
        cfg["seed"] = seed
        if args.out is not None:
            cfg["output_dir"] = str(out_dir)
        command = "dispersion" if args.command == "sweep" else args.command
        if command == "dispersion":
            return cmd_dispersion(cfg, out_dir, args.jobs)
        if command == "evolve":
            return cmd_evolve(cfg, out_dir, args.jobs)
        if command == "synthesize":
            return cmd_synthesize(cfg, out_dir, args.jobs)
        return cmd_verify(cfg, out_dir, args.jobs, seed)
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, SlabDecayError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
