"""Command line front-end for skysplit.

Subcommands evaluate coverage and rate for one configuration, sweep a
parameter (optionally over a second axis), run the optimizers, run the
Monte Carlo oracle, or validate the analysis against it. Data goes to
CSV, reports and manifests to JSON; logs go to stderr.
"""

# Skysplit - cli.py
# Copyright (C) 2026 The Skysplit Contributors

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
import time
import tomllib
from concurrent.futures import ThreadPoolExecutor
from datetime import UTC, datetime
from enum import StrEnum
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Any

import attrs

from src import __version__, config
from src.coverage import coverage_report
from src.errors import ConfigurationError, DomainError, SkysplitError
from src.montecarlo import estimate_coverage, estimate_vse
from src.netmodel import (
    UNDETECTABLE,
    AntennaPattern,
    Environment,
    NetworkConfig,
    Objective,
    SweepParameter,
    SweepSpec,
    TierRadio,
    UavPlacement,
    db_to_linear,
    with_parameter,
)
from src.optimize import Variable, maximize_objective, objective_value
from src.skysplit_logger import setup_logger

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 4

MIN_VALIDATE_TRIALS = 1000

COVERAGE_OBJECTIVES = (Objective.P_U, Objective.P_G, Objective.P_COV)
SCALAR_OBJECTIVES = (*COVERAGE_OBJECTIVES, Objective.V_U)

UNITS = {
    "p_u": "probability",
    "p_g": "probability",
    "p_cov": "probability",
    "V_u": "nats/sec/Hz/m^3",
    "h_o": "m",
    "lambda_u": "1/m^2",
    "lambda_ratio": "lambda_u / lambda_g",
}

_TIER_KEYS = ("tx_power", "alpha", "psi_los", "psi_nlos", "n_antennas")
_SECTIONS: dict[str, tuple[str, ...]] = {
    "ground": _TIER_KEYS,
    "uav": _TIER_KEYS,
    "pattern": ("theta0", "phi0", "delta_m", "delta_s"),
    "placement": ("h_o", "nu", "h_max"),
    "env": ("c1", "c2"),
}
_TOP_KEYS = ("lambda_g", "lambda_u", "beta", "noise_uav")


class Mode(StrEnum):
    """Which engines a run uses."""

    ANALYTIC = "analytic"
    MONTECARLO = "montecarlo"
    BOTH = "both"


# --- Configuration ---


def _number(raw: object, key: str) -> float:
    if isinstance(raw, str) and raw.strip().lower() in {"inf", "+inf"}:
        return UNDETECTABLE
    if isinstance(raw, bool) or not isinstance(raw, int | float):
        raise ConfigurationError(f"{key} must be a number, got {raw!r}")
    return float(raw)


def _field(section: Mapping[str, Any], key: str, where: str) -> float:
    if key in section:
        return _number(section[key], f"{where}{key}")
    db_key = f"{key}_db"
    if db_key in section:
        value = _number(section[db_key], f"{where}{db_key}")
        return value if math.isinf(value) else db_to_linear(value)
    raise ConfigurationError(f"missing configuration key '{where}{key}'")


def _check_unknown(section: Mapping[str, Any], known: Sequence[str], where: str) -> None:
    allowed = set(known) | {f"{k}_db" for k in known}
    for key in section:
        if key not in allowed:
            raise ConfigurationError(f"unknown configuration key '{where}{key}'")


def config_from_mapping(raw: Mapping[str, Any]) -> NetworkConfig:
    """Build a validated NetworkConfig from a parsed TOML document."""
    top = {k: v for k, v in raw.items() if not isinstance(v, dict)}
    _check_unknown(top, _TOP_KEYS, "")
    sections: dict[str, dict[str, float]] = {}
    for name, keys in _SECTIONS.items():
        section = raw.get(name)
        if not isinstance(section, dict):
            raise ConfigurationError(f"missing configuration table '[{name}]'")
        _check_unknown(section, keys, f"{name}.")
        sections[name] = {key: _field(section, key, f"{name}.") for key in keys}
    for name in raw:
        if isinstance(raw[name], dict) and name not in _SECTIONS:
            raise ConfigurationError(f"unknown configuration table '[{name}]'")

    return NetworkConfig(
        lambda_g=_field(top, "lambda_g", ""),
        lambda_u=_field(top, "lambda_u", ""),
        beta=_field(top, "beta", ""),
        noise_uav=_number(top.get("noise_uav", 0.0), "noise_uav"),
        ground=TierRadio(**sections["ground"]),
        uav=TierRadio(**sections["uav"]),
        pattern=AntennaPattern(**sections["pattern"]),
        placement=UavPlacement(**sections["placement"]),
        env=Environment(**sections["env"]),
    )


def _parse_value(text: str) -> object:
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def apply_overrides(
    raw: dict[str, Any],
    overrides: Sequence[str],
) -> dict[str, Any]:
    """Apply 'key=value' or 'section.key=value' assignments."""
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError(f"override must look like key=value: {item!r}")
        *path, leaf = key.strip().split(".")
        target = raw
        for part in path:
            target = target.setdefault(part, {})
            if not isinstance(target, dict):
                raise ConfigurationError(f"override path {key!r} is not a table")
        # a plain key replaces its dB twin and vice versa
        stem = leaf.removesuffix("_db")
        target.pop(stem, None)
        target.pop(f"{stem}_db", None)
        target[leaf] = _parse_value(value.strip())
    return raw


def load_config(
    path: str | Path | None = None,
    overrides: Sequence[str] = (),
) -> NetworkConfig:
    """Read a TOML configuration; None loads the bundled reference network."""
    if path is None:
        resource = resources.files("src") / "configs" / "reference.toml"
        with resource.open("rb") as f:
            raw = tomllib.load(f)
    else:
        try:
            with open(path, "rb") as f:
                raw = tomllib.load(f)
        except tomllib.TOMLDecodeError as e:
            raise ConfigurationError(f"{path}: {e}") from e
    return config_from_mapping(apply_overrides(raw, overrides))


def config_snapshot(cfg: NetworkConfig) -> dict[str, Any]:
    """Plain-dict view of a configuration for manifests."""
    return attrs.asdict(cfg)


# --- Output ---


def _jsonable(value: object) -> object:
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_jsonable(v) for v in value]
    if attrs.has(type(value)):
        return _jsonable(attrs.asdict(value, recurse=False))
    return value


def to_json(value: object) -> str:
    """Deterministic JSON: sorted keys, non-finite floats as strings."""
    return json.dumps(_jsonable(value), sort_keys=True, indent=2) + "\n"


def write_atomic(path: Path, text: str) -> None:
    """Write text to path through a temporary file and a rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    logger.info("wrote %s", path)


@attrs.define
class RunManifest:
    """Provenance of one output file."""

    command: str
    config: dict[str, Any]
    seed: int | None = None
    version: str = __version__
    created: str = attrs.field(
        factory=lambda: datetime.now(UTC).isoformat(timespec="seconds"),
    )
    timings: list[dict[str, Any]] = attrs.field(factory=list)
    warnings: list[str] = attrs.field(factory=list)
    units: dict[str, str] = attrs.field(factory=lambda: dict(UNITS))

    def manifest_path(self, out: Path) -> Path:
        """Sibling path of the manifest for an output file."""
        return out.with_name(f"{out.name}.manifest.json")


class _WarningCollector(logging.Handler):
    """Keep every WARNING-or-worse message for the manifest."""

    def __init__(self) -> None:
        super().__init__(level=logging.WARNING)
        self.messages: list[str] = []

    def emit(self, record: logging.LogRecord) -> None:
        self.messages.append(record.getMessage())


def emit(
    text: str,
    out: Path | None,
    manifest: RunManifest,
) -> None:
    """Send output to stdout, or to out plus its manifest."""
    if out is None:
        sys.stdout.write(text)
        return
    write_atomic(out, text)
    write_atomic(manifest.manifest_path(out), to_json(manifest))


# --- Grids ---


def parse_grid(text: str) -> tuple[float, ...]:
    """'a,b,c' or an inclusive 'start:stop:step' range."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if not step > 0 or stop < start:
            raise DomainError(f"empty or backwards range {text!r}")
        count = math.floor((stop - start) / step + 1e-9) + 1
        return tuple(start + i * step for i in range(count))
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as e:
        raise DomainError(f"bad grid {text!r}: {e}") from e


def _objectives(objective: Objective) -> tuple[Objective, ...]:
    return SCALAR_OBJECTIVES if objective is Objective.ALL else (objective,)


# --- Evaluation ---


def _analytic_values(
    cfg: NetworkConfig,
    objectives: Sequence[Objective],
    massive: bool,
) -> dict[str, float]:
    return {str(obj): objective_value(cfg, obj, massive) for obj in objectives}


def _montecarlo_values(
    cfg: NetworkConfig,
    objectives: Sequence[Objective],
    args: argparse.Namespace,
) -> dict[str, float]:
    out: dict[str, float] = {}
    kwargs = {
        "trials": args.trials,
        "radius": args.radius,
        "seed": args.seed,
        "unit_serving_gain": args.massive,
        "threads": args.threads,
    }
    if any(obj is not Objective.V_U for obj in objectives):
        estimate = estimate_coverage(cfg, **kwargs)
        for obj in objectives:
            if obj is not Objective.V_U:
                part = getattr(estimate, str(obj))
                out[f"{obj}_mc"] = part.mean
                out[f"{obj}_mc_hw"] = part.half_width_95
    if Objective.V_U in objectives:
        rate = estimate_vse(cfg, **kwargs)
        out["V_u_mc"] = rate.mean
        out["V_u_mc_hw"] = rate.half_width_95
    return out


def _analytic_config(cfg: NetworkConfig, manifest: RunManifest) -> NetworkConfig:
    if cfg.uav.nlos_detectable:
        note = (
            f"analysis assumes undetectable NLoS UAV links; psi_nlos "
            f"{cfg.uav.psi_nlos:g} replaced by inf"
        )
        if note not in manifest.warnings:
            manifest.warnings.append(note)
        return cfg.analytic_view()
    return cfg


def _montecarlo_config(
    cfg: NetworkConfig,
    args: argparse.Namespace,
) -> NetworkConfig:
    return cfg.analytic_view() if args.match_analysis else cfg


def evaluate_point(
    cfg: NetworkConfig,
    objectives: Sequence[Objective],
    args: argparse.Namespace,
    manifest: RunManifest,
) -> dict[str, float]:
    """Every requested value at one configuration, per mode."""
    mode = Mode(args.mode)
    values: dict[str, float] = {}
    if mode in (Mode.ANALYTIC, Mode.BOTH):
        values |= _analytic_values(
            _analytic_config(cfg, manifest),
            objectives,
            args.massive,
        )
    if mode in (Mode.MONTECARLO, Mode.BOTH):
        values |= _montecarlo_values(
            _montecarlo_config(cfg, args),
            objectives,
            args,
        )
    return values


def run_single(
    cfg: NetworkConfig,
    objectives: Sequence[Objective],
    args: argparse.Namespace,
    manifest: RunManifest,
) -> str:
    """JSON report of one configuration."""
    started = time.perf_counter()
    values = evaluate_point(cfg, objectives, args, manifest)
    manifest.timings.append({"point": "single", "seconds": time.perf_counter() - started})
    return to_json({"massive": args.massive, "mode": args.mode, "values": values})


def _sweep_points(
    cfg: NetworkConfig,
    spec: SweepSpec,
    second: SweepSpec | None,
) -> list[tuple[tuple[float, ...], NetworkConfig]]:
    points = []
    for v1 in spec.grid:
        first = with_parameter(cfg, spec.parameter, v1)
        if second is None:
            points.append(((v1,), first))
            continue
        for v2 in second.grid:
            points.append(((v1, v2), with_parameter(first, second.parameter, v2)))
    return points


def run_sweep(
    cfg: NetworkConfig,
    spec: SweepSpec,
    args: argparse.Namespace,
    manifest: RunManifest,
    second: SweepSpec | None = None,
) -> str:
    """CSV with one row per grid point, in grid order; failures in status."""
    objectives = _objectives(spec.objective)
    mode = Mode(args.mode)
    points = _sweep_points(cfg, spec, second)
    logger.info("sweep over %d points (%s)", len(points), mode)

    def run(point: tuple[tuple[float, ...], NetworkConfig]) -> tuple[dict[str, float], str, float]:
        coords, point_cfg = point
        started = time.perf_counter()
        try:
            values = evaluate_point(point_cfg, objectives, args, manifest)
            status = "ok"
        except SkysplitError as e:
            logger.warning("sweep point %s failed: %s", coords, e)
            values, status = {}, f"{type(e).__name__}: {e}"
        if any(not math.isfinite(v) for v in values.values()):
            status = "non-finite value"
        return values, status, time.perf_counter() - started

    # Monte Carlo parallelizes its own trials.
    workers = 1 if mode is not Mode.ANALYTIC else config.worker_count(args.threads)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(run, points))

    columns = [str(spec.parameter)]
    if second is not None:
        columns.append(str(second.parameter))
    for obj in objectives:
        if mode in (Mode.ANALYTIC, Mode.BOTH):
            columns.append(str(obj))
        if mode in (Mode.MONTECARLO, Mode.BOTH):
            columns += [f"{obj}_mc", f"{obj}_mc_hw"]
    columns.append("status")

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for (coords, _), (values, status, seconds) in zip(points, results, strict=True):
        row: list[object] = [repr(c) for c in coords]
        row += [
            repr(values[c]) if c in values else ""
            for c in columns[len(coords) : -1]
        ]
        row.append(status)
        writer.writerow(row)
        manifest.timings.append({"point": list(coords), "seconds": seconds})
    logger.info("sweep complete")
    return buffer.getvalue()


def run_optimize(
    cfg: NetworkConfig,
    variable: Variable,
    bounds: tuple[float, float],
    objective: Objective,
    args: argparse.Namespace,
    manifest: RunManifest,
) -> str:
    """JSON with the maximizer, its value and the evaluation count."""
    cfg = _analytic_config(cfg, manifest)
    started = time.perf_counter()
    result = maximize_objective(
        cfg,
        variable,
        objective,
        bounds[0],
        bounds[1],
        massive=args.massive,
        tol=args.tol,
    )
    manifest.timings.append({"point": "search", "seconds": time.perf_counter() - started})
    return to_json(
        {
            "argmax": result.argmax,
            "bracket": list(result.bracket),
            "evaluations": result.evaluations,
            "massive": args.massive,
            "multimodal": result.multimodal,
            "objective": str(objective),
            "value": result.value,
            "variable": str(variable),
        },
    )


def run_validate(
    cfg: NetworkConfig,
    args: argparse.Namespace,
    manifest: RunManifest,
) -> tuple[str, bool]:
    """Analytic against Monte Carlo for p_u, p_g, p_cov and V_u."""
    if args.trials is None or args.trials < MIN_VALIDATE_TRIALS:
        raise DomainError(
            f"validate needs --trials >= {MIN_VALIDATE_TRIALS}, got {args.trials}",
        )
    cfg = _analytic_config(cfg, manifest)
    kwargs = {
        "trials": args.trials,
        "radius": args.radius,
        "seed": args.seed,
        "unit_serving_gain": args.massive,
        "threads": args.threads,
    }
    coverage_mc = estimate_coverage(cfg, **kwargs)
    rate_mc = estimate_vse(cfg, **kwargs)
    estimates = {
        "p_u": coverage_mc.p_u,
        "p_g": coverage_mc.p_g,
        "p_cov": coverage_mc.p_cov,
        "V_u": rate_mc,
    }

    metrics: dict[str, dict[str, object]] = {}
    passed = True
    for obj in SCALAR_OBJECTIVES:
        name = str(obj)
        estimate = estimates[name]
        entry: dict[str, object] = {
            "mc_mean": estimate.mean,
            "mc_half_width": estimate.half_width_95,
        }
        try:
            analytic = objective_value(cfg, obj, args.massive)
        except SkysplitError as e:
            entry |= {"error": f"{type(e).__name__}: {e}", "pass": False}
            passed = False
            metrics[name] = entry
            continue
        gap = abs(analytic - estimate.mean)
        if obj is Objective.V_U:
            tolerance = max(0.1 * abs(analytic), 3 * estimate.half_width_95)
        else:
            tolerance = max(0.02, 3 * estimate.half_width_95)
        ok = gap <= tolerance
        passed &= ok
        entry |= {"analytic": analytic, "gap": gap, "tolerance": tolerance, "pass": ok}
        metrics[name] = entry

    independence_gap = abs(
        coverage_mc.p_cov.mean - coverage_mc.p_u.mean * coverage_mc.p_g.mean,
    )
    try:
        notes = list(coverage_report(cfg).notes)
    except SkysplitError as e:
        notes = [f"coverage report failed: {e}"]
    report = {
        "independence_gap": independence_gap,
        "massive": args.massive,
        "metrics": metrics,
        "notes": notes,
        "pass": passed,
        "radius": coverage_mc.radius,
        "seed": args.seed,
        "trials": args.trials,
    }
    logger.info("validation complete: %s", "pass" if passed else "FAILED")
    return to_json(report), passed


# --- Entry point ---


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--mode",
        choices=[m.value for m in Mode],
        default=Mode.ANALYTIC.value,
        help="Analytic expressions, Monte Carlo, or both.",
    )
    parser.add_argument("--trials", type=int, default=None, help="Monte Carlo trials.")
    parser.add_argument("--seed", type=int, default=0, help="Root seed.")
    parser.add_argument(
        "--radius",
        type=float,
        default=None,
        help="Simulation disc radius in meters (default from intensities).",
    )
    parser.add_argument(
        "--massive",
        action="store_true",
        help="Massive-array limits (unit serving gain in Monte Carlo).",
    )
    parser.add_argument(
        "--match-analysis",
        action="store_true",
        help="Monte Carlo with undetectable NLoS UAV links.",
    )


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(prog="skysplit", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", type=Path, default=None, help="TOML network file.")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a configuration key, e.g. placement.h_o=15.",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Worker threads (default: hardware concurrency).",
    )
    parser.add_argument("--tol", type=float, default=None, help="Optimizer tolerance.")
    parser.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
    )
    parser.add_argument("--out", type=Path, default=None, help="Output file.")
    commands = parser.add_subparsers(dest="command", required=True)

    objective_choices = [o.value for o in Objective]
    coverage = commands.add_parser(
        "coverage",
        help="Coverage probabilities of one configuration.",
    )
    _add_run_options(coverage)
    coverage.add_argument(
        "--objective",
        choices=[o.value for o in (*COVERAGE_OBJECTIVES, Objective.ALL)],
        default=Objective.ALL.value,
    )
    vse = commands.add_parser(
        "vse",
        help="Volume spectral efficiency of one configuration.",
    )
    _add_run_options(vse)
    montecarlo = commands.add_parser(
        "montecarlo",
        help="Monte Carlo estimates of one configuration.",
    )
    _add_run_options(montecarlo)
    montecarlo.add_argument(
        "--objective",
        choices=objective_choices,
        default=Objective.ALL.value,
    )

    sweep = commands.add_parser("sweep", help="Sweep one or two parameters to CSV.")
    _add_run_options(sweep)
    parameters = [p.value for p in SweepParameter]
    sweep.add_argument("--param", choices=parameters, required=True)
    sweep.add_argument("--grid", required=True, help="'a,b,c' or 'start:stop:step'.")
    sweep.add_argument("--param2", choices=parameters, default=None)
    sweep.add_argument("--grid2", default=None)
    sweep.add_argument("--objective", choices=objective_choices, default="all")

    opt = commands.add_parser("optimize", help="Maximize over h_o or lambda_u.")
    _add_run_options(opt)
    opt.add_argument("--variable", choices=[v.value for v in Variable], required=True)
    opt.add_argument(
        "--bounds",
        type=float,
        nargs=2,
        metavar=("LO", "HI"),
        required=True,
    )
    opt.add_argument(
        "--objective",
        choices=[o.value for o in SCALAR_OBJECTIVES],
        default=Objective.P_U.value,
    )

    validate = commands.add_parser("validate", help="Analysis against Monte Carlo.")
    _add_run_options(validate)
    return parser


def _dispatch(
    args: argparse.Namespace,
    cfg: NetworkConfig,
    manifest: RunManifest,
) -> tuple[str, int]:
    match args.command:
        case "coverage":
            objective = Objective(args.objective)
            objectives = (
                COVERAGE_OBJECTIVES if objective is Objective.ALL else (objective,)
            )
            return run_single(cfg, objectives, args, manifest), EXIT_OK
        case "vse":
            return run_single(cfg, (Objective.V_U,), args, manifest), EXIT_OK
        case "montecarlo":
            args.mode = Mode.MONTECARLO.value
            objectives = _objectives(Objective(args.objective))
            return run_single(cfg, objectives, args, manifest), EXIT_OK
        case "sweep":
            spec = SweepSpec(
                parameter=args.param,
                grid=parse_grid(args.grid),
                objective=args.objective,
            )
            second = None
            if args.param2 is not None:
                if args.grid2 is None:
                    raise DomainError("--param2 needs --grid2")
                second = SweepSpec(
                    parameter=args.param2,
                    grid=parse_grid(args.grid2),
                    objective=args.objective,
                )
            return run_sweep(cfg, spec, args, manifest, second), EXIT_OK
        case "optimize":
            text = run_optimize(
                cfg,
                Variable(args.variable),
                (args.bounds[0], args.bounds[1]),
                Objective(args.objective),
                args,
                manifest,
            )
            return text, EXIT_OK
        case "validate":
            text, passed = run_validate(cfg, args, manifest)
            return text, EXIT_OK if passed else EXIT_VALIDATION_FAILED
    raise DomainError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    """Run the command line and return the process exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logger(getattr(logging, args.log_level))

    collector = _WarningCollector()
    logging.getLogger().addHandler(collector)
    try:
        cfg = load_config(args.config, args.overrides)
        manifest = RunManifest(
            command=" ".join(["skysplit", *(argv if argv is not None else sys.argv[1:])]),
            config=config_snapshot(cfg),
            seed=args.seed,
        )
        logger.info("starting %s", args.command)
        text, status = _dispatch(args, cfg, manifest)
        manifest.warnings.extend(collector.messages)
        emit(text, args.out, manifest)
        return status
    except SkysplitError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return e.exit_code
    except OSError as e:
        logger.error("I/O failed: %s", e)
        return 1
    finally:
        logging.getLogger().removeHandler(collector)


if __name__ == "__main__":
    sys.exit(main())
