"""Command-line runner: load a scenario file, run an experiment, write CSV.

Commands
    sweep-two-user   deterministic two-user geometry sweep (EE per strategy)
    campaign         averaged multi-user Monte Carlo campaign
    uop-sweep        outage probability over a grid of power caps

Every run writes one CSV of result records plus a JSON summary echoing the
fully resolved configuration and seed, so each row can be reproduced. Exit
codes: 0 success, 1 usage error, 2 scenario parse/validation error, 3 I/O
error.

Scenario files are plain ``key = value`` text; ``#`` starts a comment and
lists are comma-separated. Unknown keys are rejected. See the README for
the full key table.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
from enum import Enum
from pathlib import Path

from .allocation import PowerLimits, Strategy
from .channel import NoiseModel, OpticalFrontEnd
from .simulation import (
    CampaignSummary,
    ScenarioConfig,
    ScenarioValidationError,
    run_campaign,
    run_uop_sweep,
    two_user_sweep,
)

__all__ = ["ScenarioParseError", "load_scenario", "run", "main", "console_entry"]

TOOL_VERSION = "0.1.0"

CSV_COLUMNS = (
    "scenario_id",
    "sweep_parameter",
    "sweep_value",
    "strategy",
    "pairing",
    "mean_ee",
    "mean_total_power",
    "mean_uop_dl",
    "mean_uop_ul",
    "trials",
    "seed",
    "version",
)


class ScenarioParseError(Exception):
    """The scenario file is not well-formed; message carries line numbers."""


_INT_KEYS = {"num_users", "trials", "seed"}
_FLOAT_KEYS = {
    "l_min",
    "l_max",
    "r_max",
    "semi_angle_deg",
    "responsivity",
    "area_m2",
    "fov_half_angle_deg",
    "filter_gain",
    "refractive_index",
    "noise_psd",
    "bandwidth_hz",
    "p_max_dl",
    "p_max_ul",
    "sweep_rate",
}
_FLOAT_LIST_KEYS = {"qos_set", "sweep_values", "uop_sweep_grid"}
_STR_LIST_KEYS = {"strategies", "pairing"}
_STR_KEYS = {"scenario_id", "sweep_mode", "uop_sweep_link", "qos_pairing_key"}
_BOOL_KEYS = {"ee_served_only", "qos_coupled_links"}
_ALL_KEYS = (
    _INT_KEYS | _FLOAT_KEYS | _FLOAT_LIST_KEYS | _STR_LIST_KEYS | _STR_KEYS | _BOOL_KEYS
)


def _parse_scalar(field: str, text: str, line_no: int):
    if field in _INT_KEYS:
        try:
            return int(text)
        except ValueError:
            raise ScenarioParseError(
                f"line {line_no}: field {field!r}: not an integer: {text!r}"
            ) from None
    if field in _FLOAT_KEYS:
        try:
            return float(text)  # accepts 'inf' for the power caps
        except ValueError:
            raise ScenarioParseError(
                f"line {line_no}: field {field!r}: not a number: {text!r}"
            ) from None
    if field in _BOOL_KEYS:
        lowered = text.lower()
        if lowered in ("true", "yes", "1"):
            return True
        if lowered in ("false", "no", "0"):
            return False
        raise ScenarioParseError(
            f"line {line_no}: field {field!r}: not a boolean: {text!r}"
        )
    return text


def _parse_value(field: str, text: str, line_no: int):
    if field in _FLOAT_LIST_KEYS:
        items = [s.strip() for s in text.split(",") if s.strip()]
        values = []
        for item in items:
            try:
                values.append(float(item))
            except ValueError:
                raise ScenarioParseError(
                    f"line {line_no}: field {field!r}: not a number: {item!r}"
                ) from None
        return tuple(values)
    if field in _STR_LIST_KEYS:
        return tuple(s.strip().lower() for s in text.split(",") if s.strip())
    return _parse_scalar(field, text, line_no)


def _parse_file(path: Path) -> dict:
    raw: dict[str, object] = {}
    problems: list[str] = []
    text = path.read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            problems.append(f"line {line_no}: expected 'key = value', got {stripped!r}")
            continue
        key, _, value = stripped.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if key not in _ALL_KEYS:
            problems.append(f"line {line_no}: unknown field {key!r}")
            continue
        if key in raw:
            problems.append(f"line {line_no}: duplicate field {key!r}")
            continue
        if not value:
            problems.append(f"line {line_no}: field {key!r}: empty value")
            continue
        try:
            raw[key] = _parse_value(key, value, line_no)
        except ScenarioParseError as err:
            problems.append(str(err))
    if problems:
        raise ScenarioParseError("\n".join(problems))
    return raw


def _strategies_from_tokens(tokens) -> tuple[Strategy, ...]:
    values = []
    for token in tokens:
        try:
            values.append(Strategy(token))
        except ValueError:
            valid = ", ".join(s.value for s in Strategy)
            raise ScenarioValidationError(
                [f"unknown strategy {token!r}, expected one of: {valid}"]
            ) from None
    return tuple(values)


def load_scenario(path) -> ScenarioConfig:
    """Parse and validate a scenario file into a fully resolved config.

    Omitted physical parameters take the reference defaults; ``num_users``
    and ``trials`` are required. Raises :class:`ScenarioParseError` for
    malformed text and :class:`ScenarioValidationError` (listing every
    violated invariant) for bad values.
    """
    path = Path(path)
    raw = _parse_file(path)

    problems = [f"required field missing: {key}" for key in ("num_users", "trials")
                if key not in raw]
    if problems:
        raise ScenarioValidationError(problems)

    front_kwargs = {}
    for key, attr in (
        ("semi_angle_deg", "semi_angle_deg"),
        ("responsivity", "responsivity"),
        ("area_m2", "area"),
        ("fov_half_angle_deg", "fov_half_angle_deg"),
        ("filter_gain", "filter_gain"),
        ("refractive_index", "refractive_index"),
    ):
        if key in raw:
            front_kwargs[attr] = raw[key]
    noise_kwargs = {}
    if "noise_psd" in raw:
        noise_kwargs["psd"] = raw["noise_psd"]
    if "bandwidth_hz" in raw:
        noise_kwargs["bandwidth"] = raw["bandwidth_hz"]
    limit_kwargs = {}
    if "p_max_dl" in raw:
        limit_kwargs["max_total_dl"] = raw["p_max_dl"]
    if "p_max_ul" in raw:
        limit_kwargs["max_per_user_ul"] = raw["p_max_ul"]

    try:
        front_end = OpticalFrontEnd(**front_kwargs)
        noise = NoiseModel(**noise_kwargs)
        limits = PowerLimits(**limit_kwargs)
    except ValueError as err:
        raise ScenarioValidationError([str(err)]) from None

    config_kwargs = {
        "num_users": raw["num_users"],
        "trials": raw["trials"],
        "scenario_id": raw.get("scenario_id", path.stem),
        "front_end": front_end,
        "noise": noise,
        "limits": limits,
    }
    for key, attr in (
        ("seed", "seed"),
        ("qos_set", "qos_set"),
        ("l_min", "l_min"),
        ("l_max", "l_max"),
        ("r_max", "r_max"),
        ("pairing", "pairings"),
        ("qos_pairing_key", "qos_pairing_key"),
        ("qos_coupled_links", "qos_coupled_links"),
        ("ee_served_only", "ee_served_only"),
        ("sweep_mode", "sweep_mode"),
        ("sweep_values", "sweep_values"),
        ("sweep_rate", "sweep_rate"),
        ("uop_sweep_link", "uop_sweep_link"),
        ("uop_sweep_grid", "uop_sweep_grid"),
    ):
        if key in raw:
            config_kwargs[attr] = raw[key]
    if "strategies" in raw:
        config_kwargs["strategies"] = _strategies_from_tokens(raw["strategies"])
    return ScenarioConfig(**config_kwargs)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if not math.isfinite(value):
            return ""
        return repr(value)
    return str(value)


def _summary_rows(summaries: list[CampaignSummary]) -> list[list[str]]:
    rows = []
    for summary in summaries:
        for (strategy, pairing), cell in summary.cells.items():
            rows.append([
                _format_cell(summary.scenario_id),
                _format_cell(summary.sweep_parameter),
                _format_cell(summary.sweep_value),
                _format_cell(strategy),
                _format_cell(pairing),
                _format_cell(cell.mean_ee),
                _format_cell(cell.mean_total_power),
                _format_cell(cell.mean_uop_dl),
                _format_cell(cell.mean_uop_ul),
                _format_cell(summary.trials),
                _format_cell(summary.seed),
                TOOL_VERSION,
            ])
    return rows


def _jsonable(value):
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else "-inf"
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _summary_path(out_path: Path) -> Path:
    if out_path.suffix == ".csv":
        return out_path.with_suffix(".summary.json")
    return Path(str(out_path) + ".summary.json")


def run(command: str, config: ScenarioConfig, out_path, *, workers: int = 1) -> Path:
    """Execute one command and persist the CSV plus the JSON run summary.

    Returns the path of the written CSV.
    """
    if command == "sweep-two-user":
        summaries = two_user_sweep(config)
    elif command == "campaign":
        summaries = [run_campaign(config, workers=workers)]
    elif command == "uop-sweep":
        summaries = run_uop_sweep(config, workers=workers)
    else:
        raise ValueError(f"unknown command {command!r}")

    out_path = Path(out_path)
    with open(out_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        writer.writerows(_summary_rows(summaries))

    summary_doc = {
        "command": command,
        "scenario_id": config.scenario_id,
        "config": _jsonable(dataclasses.asdict(config)),
        "seed": config.seed,
        "trials": config.trials,
        "workers": workers,
        "rng": "numpy PCG64, per-trial streams from SeedSequence([seed, trial_index])",
        "output_csv": out_path.name,
        "version": TOOL_VERSION,
    }
    with open(_summary_path(out_path), "w", encoding="utf-8") as handle:
        json.dump(summary_doc, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return out_path


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1 (argparse's default would be 2, which this tool
    # reserves for scenario validation failures)
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lifi-noma", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, blurb in (
        ("sweep-two-user", "deterministic two-user geometry sweep"),
        ("campaign", "averaged multi-user Monte Carlo campaign"),
        ("uop-sweep", "outage probability over a grid of power caps"),
    ):
        cmd = sub.add_parser(name, help=blurb)
        cmd.add_argument("--scenario", required=True, help="scenario file path")
        cmd.add_argument("--out", required=True, help="output CSV path")
        cmd.add_argument("--trials", type=int, help="override the trial count")
        cmd.add_argument("--seed", type=int, help="override the RNG seed")
        cmd.add_argument("--strategies", nargs="+", metavar="NAME",
                         help="override strategies (opa ngdpa grpa oma)")
        cmd.add_argument("--pairing", nargs="+", metavar="NAME",
                         help="override pairing methods (channel qos adaptive)")
        cmd.add_argument("--workers", type=int, default=1,
                         help="parallel trial workers (results are identical)")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    try:
        config = load_scenario(args.scenario)
        overrides = {}
        if args.trials is not None:
            overrides["trials"] = args.trials
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.strategies is not None:
            overrides["strategies"] = _strategies_from_tokens(
                t.lower() for t in args.strategies
            )
        if args.pairing is not None:
            overrides["pairings"] = tuple(t.lower() for t in args.pairing)
        if overrides:
            config = dataclasses.replace(config, **overrides)
        out = run(args.command, config, args.out, workers=args.workers)
    except (ScenarioParseError, ScenarioValidationError) as err:
        print(f"scenario error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 3
    print(f"wrote {out} and {_summary_path(out).name}")
    return 0


def console_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_entry()
