"""Command-line front end.

Subcommands: ``bound`` (closed-form lower bound), ``simulate`` (Monte Carlo
error budget), ``sweep`` (flux sweep with fitted scaling slope, CSV) and
``verify`` (the oracle suite).

Exit codes are a stable contract: 0 success, 1 verification failure,
2 invalid arguments, 3 regime violation, 4 insufficient record length.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from .bounds import waveform_lower_bound
from .errors import InsufficientRecordError, RegimeViolationError
from .estimator import Mode
from .simulate import SimulationConfig, run_simulation, sweep_flux
from .spectrum import PowerLawSpectrum
from .verify import run_verification_suite

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_ARGS = 2
EXIT_REGIME = 3
EXIT_INSUFFICIENT = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _json_dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _default_jobs() -> int:
    env = os.environ.get("WAVEBOUND_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise CliError(f"WAVEBOUND_JOBS must be an integer, got {env!r}",
                           EXIT_BAD_ARGS) from exc
    return os.cpu_count() or 1


def _load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config file {path}: {exc}", EXIT_BAD_ARGS)
    if not isinstance(data, dict):
        raise CliError("config file must hold a JSON object", EXIT_BAD_ARGS)
    return data


def _merge_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> dict:
    """File values fill in anything the command line left at its default."""
    effective = vars(args).copy()
    effective.pop("func", None)
    config_path = effective.pop("config", None)
    if config_path:
        file_values = _load_config_file(config_path)
        specified = {a.dest for a in parser._actions
                     if hasattr(args, a.dest)
                     and getattr(args, a.dest) != a.default}
        for key, value in file_values.items():
            if key not in effective:
                raise CliError(f"unknown config key {key!r}", EXIT_BAD_ARGS)
            if key not in specified:
                effective[key] = value
    return effective


def _spectrum_from(cfg: dict) -> PowerLawSpectrum:
    try:
        return PowerLawSpectrum(p=float(cfg["p"]), kappa=float(cfg["kappa"]),
                                gamma=float(cfg["gamma"]))
    except (ValueError, TypeError) as exc:
        raise CliError(f"invalid spectrum parameters: {exc}", EXIT_BAD_ARGS)


def cmd_bound(cfg: dict) -> int:
    spec = _spectrum_from(cfg)
    flux = float(cfg["flux"])
    try:
        report = waveform_lower_bound(spec, flux)
    except RegimeViolationError as exc:
        raise CliError(str(exc), EXIT_REGIME)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_BAD_ARGS)
    gamma_ratio = spec.gamma * report.t_star / (6.0 / spec.p3) ** (1.0 / spec.p)
    payload = {
        "effective_config": cfg,
        "tau0": report.tau0,
        "tauF": report.tauF,
        "branch": report.branch.value,
        "z_value": report.z_value,
        "t_star": report.t_star,
        "scaling_bound": report.scaling_bound,
        "scaling_exponent": 2.0 * (spec.p - 1.0) / (spec.p + 1.0),
        "regime": {"gamma_t_star_over_limit": gamma_ratio},
    }
    _emit(_json_dumps(payload), cfg.get("output_path"))
    return EXIT_OK


def _simulation_config(cfg: dict) -> SimulationConfig:
    spec = _spectrum_from(cfg)
    try:
        return SimulationConfig(
            spec=spec,
            flux=float(cfg["flux"]),
            trials=int(cfg["trials"]),
            seed=int(cfg["seed"]),
            mode=Mode(cfg["mode"]),
            truncation=int(cfg["truncation"]),
            period=None if cfg.get("period") is None else float(cfg["period"]),
            pulses=None if cfg.get("pulses") is None else int(cfg["pulses"]),
            noiseless=bool(cfg.get("noiseless", False)),
            jobs=int(cfg["jobs"]),
        )
    except InsufficientRecordError as exc:
        raise CliError(str(exc), EXIT_INSUFFICIENT)
    except (ValueError, TypeError) as exc:
        raise CliError(f"invalid simulation parameters: {exc}", EXIT_BAD_ARGS)


def cmd_simulate(cfg: dict) -> int:
    sim_cfg = _simulation_config(cfg)
    try:
        report = run_simulation(sim_cfg)
    except InsufficientRecordError as exc:
        raise CliError(str(exc), EXIT_INSUFFICIENT)
    payload = {"effective_config": cfg}
    payload.update(report.as_dict())
    _emit(_json_dumps(payload), cfg.get("output_path"))
    return EXIT_OK


def cmd_sweep(cfg: dict) -> int:
    fluxes = cfg.get("fluxes") or []
    if len(fluxes) < 2:
        raise CliError("sweep needs at least two flux values", EXIT_BAD_ARGS)
    base = _simulation_config({**cfg, "flux": fluxes[0]})
    try:
        result = sweep_flux(base, [float(f) for f in fluxes])
    except InsufficientRecordError as exc:
        raise CliError(str(exc), EXIT_INSUFFICIENT)
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["flux", "lower_bound", "predicted_total",
                     "simulated_mse", "ci_halfwidth"])
    for row in result.rows():
        writer.writerow([repr(row["flux"]), repr(row["lower_bound"]),
                         repr(row["predicted_total"]), repr(row["simulated_mse"]),
                         repr(row["ci_halfwidth"])])
    writer.writerow(["slope", "", "", repr(result.slope), ""])
    _emit(buffer.getvalue(), cfg.get("output_path"))
    return EXIT_OK


def cmd_verify(cfg: dict) -> int:
    only = cfg.get("only") or None
    try:
        results = run_verification_suite(only=only)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_BAD_ARGS)
    if cfg.get("format") == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(["name", "computed", "reference", "tolerance", "passed"])
        for r in results:
            writer.writerow([r.name, repr(r.computed), repr(r.reference),
                             repr(r.tolerance), str(r.passed).lower()])
        text = buffer.getvalue()
    else:
        text = _json_dumps([r.as_dict() for r in results])
    _emit(text, cfg.get("output_path"))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED


def _add_spectrum_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--p", type=float, default=2.0,
                     help="spectral exponent (> 1)")
    sub.add_argument("--kappa", type=float, default=1.0,
                     help="spectral amplitude scale (1/time)")
    sub.add_argument("--gamma", type=float, default=0.01,
                     help="low-frequency cutoff (1/time)")


def _add_common_output(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--output-path", dest="output_path", default=None,
                     help="write the report here instead of stdout")
    sub.add_argument("--config", default=None,
                     help="JSON file with defaults; explicit flags win")


def _add_simulation_args(sub: argparse.ArgumentParser) -> None:
    _add_spectrum_args(sub)
    sub.add_argument("--flux", type=float, default=1e3,
                     help="mean photon flux")
    sub.add_argument("--trials", type=int, default=100)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--mode", choices=[m.value for m in Mode],
                     default=Mode.PERIODIC.value)
    sub.add_argument("--truncation", type=int, default=512,
                     help="interpolation half-window, in samples")
    sub.add_argument("--period", type=float, default=None,
                     help="pulse period (default: closed-form optimum)")
    sub.add_argument("--pulses", type=int, default=None,
                     help="record length in pulses (default: margins + 192)")
    sub.add_argument("--noiseless", action="store_true",
                     help="suppress measurement noise (aliasing-only runs)")
    sub.add_argument("--jobs", type=int, default=None,
                     help="worker threads (default: WAVEBOUND_JOBS or CPU count)")
    _add_common_output(sub)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavebound",
        description="Lower bounds and Monte Carlo error budgets for phase "
                    "waveform estimation with power-law priors.")
    subs = parser.add_subparsers(dest="command", required=True)

    b = subs.add_parser("bound", help="evaluate the closed-form lower bound")
    _add_spectrum_args(b)
    b.add_argument("--flux", type=float, default=1e3)
    _add_common_output(b)
    b.set_defaults(func=cmd_bound)

    s = subs.add_parser("simulate", help="Monte Carlo error budget")
    _add_simulation_args(s)
    s.set_defaults(func=cmd_simulate)

    w = subs.add_parser("sweep", help="flux sweep with fitted scaling slope")
    _add_simulation_args(w)
    w.add_argument("--fluxes", type=float, nargs="+", required=True,
                   help="flux values to sweep (two or more)")
    w.set_defaults(func=cmd_sweep)

    v = subs.add_parser("verify", help="run the oracle verification suite")
    v.add_argument("--format", choices=["json", "csv"], default="json")
    v.add_argument("--only", action="append", default=None,
                   help="run only this named check (repeatable)")
    _add_common_output(v)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, matching the contract already
        return int(exc.code or 0)
    try:
        cfg = _merge_config(args, parser)
        if "jobs" in cfg and cfg["jobs"] is None:
            cfg["jobs"] = _default_jobs()
        return args.func(cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
