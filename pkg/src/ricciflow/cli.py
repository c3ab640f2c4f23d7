"""Command-line front end: run, sweep, and verify.

Configs use INI syntax (configparser).  `run` integrates one trajectory
and writes a per-sample CSV and a summary JSON; `sweep` integrates a grid
or random family of initial conditions and writes one JSON with per-run
summaries; `verify` runs the randomized self-check suite.

Exit codes: 0 success, 1 configuration or I/O error, 2 verification
failure.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import itertools
import json
import multiprocessing
import sys

import numpy as np

from .flow import IntegrateOptions, Trajectory, integrate, monitors, identity_residuals
from .metric import Case, InvalidMetricError, MetricParams
from .verify import run_verification

CSV_COLUMNS = ("t", "alpha", "beta", "gamma", "mu", "nu", "eps", "x", "scal", "lambda_min")


class ConfigError(Exception):
    pass


def _get_case(section, option="case") -> Case:
    raw = section.get(option)
    if raw is None:
        raise ConfigError(f"missing option '{option}'")
    try:
        return Case(raw.strip().lower())
    except ValueError:
        raise ConfigError(f"unknown case '{raw}' (expected so3r3 or sl2c)") from None


def _get_float(section, option, default=None) -> float:
    raw = section.get(option)
    if raw is None:
        if default is None:
            raise ConfigError(f"missing option '{option}'")
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"option '{option}' is not a number: {raw!r}") from None


def _integrator_options(cfg, default_stride: float) -> IntegrateOptions:
    sec = cfg["integrator"] if cfg.has_section("integrator") else {}
    try:
        return IntegrateOptions(
            horizon=_get_float(sec, "horizon", 1000.0),
            rtol=_get_float(sec, "rtol", 1e-9),
            atol=_get_float(sec, "atol", 1e-12),
            extinction_tol=_get_float(sec, "extinction_tol", 1e-8),
            sample_stride=_get_float(sec, "sample_stride", default_stride),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _read_config(path: str) -> configparser.ConfigParser:
    cfg = configparser.ConfigParser()
    try:
        with open(path) as fh:
            cfg.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    return cfg


def _trajectory_summary(traj: Trajectory) -> dict:
    rep = monitors(traj)
    first = traj.samples[0]
    last = traj.samples[-1]
    return {
        "case": traj.case.value,
        "initial": {
            "alpha": first.alpha, "beta": first.beta, "gamma": first.gamma,
            "mu": first.mu, "nu": first.nu,
        },
        "final": {
            "t": last.t, "alpha": last.alpha, "beta": last.beta,
            "gamma": last.gamma, "mu": last.mu, "nu": last.nu,
        },
        "termination": {
            "kind": traj.termination.kind.value,
            "t_extinct": traj.termination.t_extinct,
            "detail": traj.termination.detail,
        },
        "t_scal_threshold": traj.t_scal_threshold,
        "monitors": {
            name: {"passed": v.passed, "worst": v.worst, "note": v.note}
            for name, v in rep.verdicts.items()
        },
        "trends": {
            "x_final": rep.x_final, "x_drift": rep.x_drift,
            "eps_final": rep.eps_final, "eps_drift": rep.eps_drift,
        },
        "identity_residuals": identity_residuals(traj),
        "n_samples": len(traj.samples),
    }


def _write_csv(path: str, traj: Trajectory) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for s in traj.samples:
            w.writerow(
                "%.17g" % getattr(s, col) for col in CSV_COLUMNS
            )


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_run(args) -> int:
    cfg = _read_config(args.config)
    if not cfg.has_section("flow"):
        raise ConfigError("config needs a [flow] section")
    flow = cfg["flow"]
    case = _get_case(flow)
    try:
        m0 = MetricParams(
            case,
            _get_float(flow, "alpha"),
            _get_float(flow, "beta"),
            _get_float(flow, "gamma"),
            _get_float(flow, "mu", 0.0),
            _get_float(flow, "nu", 0.0),
        )
    except InvalidMetricError as exc:
        raise ConfigError(f"invalid initial metric: {exc}") from None
    opts = _integrator_options(cfg, default_stride=1e-3)
    threshold = 1.0
    if cfg.has_section("monitor"):
        threshold = _get_float(cfg["monitor"], "scal_threshold", 1.0)

    traj = integrate(m0, opts, scal_threshold=threshold)
    summary = _trajectory_summary(traj)
    summary["scal_threshold"] = threshold

    if args.out_csv:
        _write_csv(args.out_csv, traj)
    if args.out_json:
        _write_json(args.out_json, summary)
    term = summary["termination"]
    line = f"{case.value}: {term['kind']}"
    if term["t_extinct"] is not None:
        line += f" at t = {term['t_extinct']:.9g}"
    if summary["t_scal_threshold"] is not None:
        line += f", scal crossed {threshold:g} at t = {summary['t_scal_threshold']:.9g}"
    print(line)
    return 0


def _parse_axis(name: str, spec: str) -> list[float]:
    """Grid axis spec: a number, 'lin:lo:hi:n', or 'log:lo:hi:n'."""
    parts = spec.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        kind, lo, hi, n = parts[0], float(parts[1]), float(parts[2]), int(parts[3])
        if n < 1:
            raise ValueError
        if kind == "lin":
            return list(np.linspace(lo, hi, n))
        if kind == "log":
            if lo <= 0 or hi <= 0:
                raise ValueError
            return list(np.geomspace(lo, hi, n))
        raise ValueError
    except (ValueError, IndexError):
        raise ConfigError(
            f"bad axis spec for '{name}': {spec!r} (expected a number, "
            f"'lin:lo:hi:n', or 'log:lo:hi:n')"
        ) from None


def _parse_range(name: str, spec: str) -> tuple[float, float]:
    parts = spec.split(":")
    try:
        if len(parts) == 1:
            v = float(parts[0])
            return v, v
        lo, hi = float(parts[0]), float(parts[1])
        if hi < lo:
            raise ValueError
        return lo, hi
    except (ValueError, IndexError):
        raise ConfigError(f"bad range spec for '{name}': {spec!r} (expected 'lo:hi')") from None


def _sweep_initials(cfg) -> tuple[Case, list[MetricParams], dict]:
    if not cfg.has_section("sweep"):
        raise ConfigError("config needs a [sweep] section")
    sweep = cfg["sweep"]
    case = _get_case(sweep)
    mode = sweep.get("mode", "grid").strip().lower()
    meta = {"case": case.value, "mode": mode}
    grid = cfg["grid"] if cfg.has_section("grid") else {}
    names = ("alpha", "beta", "gamma", "mu", "nu")
    defaults = {"mu": "0", "nu": "0"}
    initials = []
    if mode == "grid":
        axes = []
        for name in names:
            spec = grid.get(name, defaults.get(name))
            if spec is None:
                raise ConfigError(f"missing grid axis '{name}'")
            axes.append(_parse_axis(name, spec))
        skipped = 0
        for combo in itertools.product(*axes):
            try:
                initials.append(MetricParams(case, *combo))
            except InvalidMetricError:
                skipped += 1
        meta["skipped_invalid"] = skipped
    elif mode == "random":
        seed = int(_get_float(sweep, "seed", 0.0))
        samples = int(_get_float(sweep, "samples"))
        if samples < 1:
            raise ConfigError("random sweep needs samples >= 1")
        rng = np.random.default_rng(seed)
        ranges = {
            name: _parse_range(name, grid.get(name, defaults.get(name, "0.5:2")))
            for name in names
        }
        meta.update(seed=seed, samples=samples)
        attempts = 0
        while len(initials) < samples:
            attempts += 1
            if attempts > 100 * samples:
                raise ConfigError("random sweep ranges almost never satisfy beta*gamma > tau")
            vals = [rng.uniform(lo, hi) for lo, hi in ranges.values()]
            try:
                initials.append(MetricParams(case, *vals))
            except InvalidMetricError:
                continue
    else:
        raise ConfigError(f"unknown sweep mode '{mode}' (expected grid or random)")
    if not initials:
        raise ConfigError("sweep produced no valid initial metrics")
    return case, initials, meta


def _sweep_one(job) -> dict:
    m0, opts, threshold = job
    traj = integrate(m0, opts, scal_threshold=threshold)
    return _trajectory_summary(traj)


def cmd_sweep(args) -> int:
    cfg = _read_config(args.config)
    case, initials, meta = _sweep_initials(cfg)
    opts = _integrator_options(cfg, default_stride=0.05)
    threshold = 1.0
    if cfg.has_section("monitor"):
        threshold = _get_float(cfg["monitor"], "scal_threshold", 1.0)

    jobs = [(m0, opts, threshold) for m0 in initials]
    if args.parallel and len(jobs) > 1:
        with multiprocessing.Pool() as pool:
            runs = pool.map(_sweep_one, jobs)
    else:
        runs = [_sweep_one(j) for j in jobs]

    kinds = {}
    for r in runs:
        k = r["termination"]["kind"]
        kinds[k] = kinds.get(k, 0) + 1
    payload = {
        "sweep": meta,
        "scal_threshold": threshold,
        "n_runs": len(runs),
        "termination_counts": kinds,
        "runs": runs,
    }
    if args.out_json:
        _write_json(args.out_json, payload)
    print(f"{case.value} sweep: {len(runs)} runs, terminations {kinds}")
    return 0


def cmd_verify(args) -> int:
    report = run_verification(samples=args.samples, seed=args.seed)
    print(report.format())
    if args.out_json:
        _write_json(args.out_json, report.to_dict())
    return 0 if report.passed else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ricciflow",
        description="Homogeneous Ricci flow on two five-dimensional geometries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate a single trajectory")
    p_run.add_argument("--config", required=True, help="INI config with [flow]")
    p_run.add_argument("--out-csv", help="per-sample CSV output path")
    p_run.add_argument("--out-json", help="summary JSON output path")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="integrate a family of initial conditions")
    p_sweep.add_argument("--config", required=True, help="INI config with [sweep]")
    p_sweep.add_argument("--out-json", help="sweep JSON output path")
    p_sweep.add_argument("--parallel", action="store_true", help="use a process pool")
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run the randomized self-check suite")
    p_verify.add_argument("--samples", type=int, default=1000)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--out-json", help="report JSON output path")
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
