"""Command-line surface: probs, optimize, sweep, nogo, lhv.

Every command is a deterministic function of its flags (including --seed)
and emits a single JSON document or a CSV table, suitable for regression
harnesses and plotting.  Exit codes: 0 success, 2 usage or flag validation,
3 internal numerical-consistency failure, 4 domain rejection.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict
from typing import Any

from .cabello_engine import (
    Settings,
    cabello_probs,
    check_conditions,
    nogo_sweep,
)
from .lhv import PAIR_LABELS, local_bound_check, quantum_violation, sample_probs
from .optimizer import QUARTER_PI, maximize_gap
from .quantum_core import (
    Direction,
    DomainError,
    NumericalConsistencyError,
    SchmidtState,
    joint_probability_oracle,
)

__all__ = ["main", "build_parser"]

_OBSERVABLES = ("f", "d", "g", "e")
HALF_PI_GRID = 0.5 * math.pi


class UsageError(Exception):
    """Flag combinations the parser grammar cannot express."""


def _add_output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=("json", "csv"), default="json", help="output format"
    )
    parser.add_argument("--out", default=None, help="write output to this path")


def _add_state_args(parser: argparse.ArgumentParser, required: bool) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--beta", type=float, help="Schmidt angle in radians")
    group.add_argument("--cos-beta", type=float, help="cosine of the Schmidt angle")
    parser.add_argument(
        "--gamma", type=float, default=0.0, help="Schmidt phase (default 0)"
    )


def _add_angle_args(parser: argparse.ArgumentParser) -> None:
    for name in _OBSERVABLES:
        parser.add_argument(f"--theta-{name}", type=float, default=None)
        parser.add_argument(f"--phi-{name}", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cabello",
        description=(
            "Nonlocality without inequalities for two-qubit pure states: "
            "joint probabilities, gap maximization, the maximal-state no-go, "
            "and local-hidden-variable bounds."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("probs", help="the four joint probabilities for given settings")
    _add_state_args(p, required=True)
    _add_angle_args(p)
    p.add_argument("--tol", type=float, default=None, help="condition-check tolerance")
    p.add_argument("--degrees", action="store_true", help="angles are in degrees")
    _add_output_args(p)

    p = sub.add_parser("optimize", help="maximize the gap q4 - q1 for one state")
    _add_state_args(p, required=True)
    p.add_argument("--branch", type=int, choices=(-1, 1), default=-1)
    p.add_argument("--grid", type=int, default=400, help="coarse grid size per axis")
    p.add_argument("--tol", type=float, default=1e-10, help="refinement tolerance")
    p.add_argument("--degrees", action="store_true", help="angles are in degrees")
    _add_output_args(p)

    p = sub.add_parser("sweep", help="per-state maxima over a grid of states")
    p.add_argument("--grid", type=int, default=99, help="number of interior grid points")
    p.add_argument(
        "--grid-space",
        choices=("cos-beta", "beta"),
        default="cos-beta",
        help="uniform spacing in cos(beta) or in beta",
    )
    p.add_argument("--branch", type=int, choices=(-1, 1), default=-1)
    p.add_argument("--opt-grid", type=int, default=400, help="per-state grid size")
    p.add_argument("--tol", type=float, default=1e-10, help="refinement tolerance")
    _add_output_args(p)

    p = sub.add_parser("nogo", help="randomized maximal-state no-go verification")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-12, help="gap tolerance")
    _add_output_args(p)

    p = sub.add_parser("lhv", help="deterministic-strategy bound and sampling")
    _add_state_args(p, required=False)
    _add_angle_args(p)
    p.add_argument("--trials", type=int, default=None, help="Monte Carlo trials per pair")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degrees", action="store_true", help="angles are in degrees")
    _add_output_args(p)
    return parser


def _angle(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def _resolve_state(args: argparse.Namespace) -> SchmidtState:
    degrees = getattr(args, "degrees", False)
    if args.cos_beta is not None:
        if not -1.0 <= args.cos_beta <= 1.0:
            raise UsageError(f"--cos-beta must lie in [-1, 1], got {args.cos_beta!r}")
        beta = math.acos(args.cos_beta)
    else:
        beta = _angle(args.beta, degrees)
    return SchmidtState(beta=beta, gamma=_angle(args.gamma, degrees))


def _resolve_settings(args: argparse.Namespace) -> Settings:
    degrees = getattr(args, "degrees", False)
    directions = {}
    for name in _OBSERVABLES:
        theta = getattr(args, f"theta_{name}")
        if theta is None:
            raise UsageError(
                "all four measurement angles are required: "
                + " ".join(f"--theta-{n}" for n in _OBSERVABLES)
            )
        directions[name] = Direction(
            theta=_angle(theta, degrees),
            phi=_angle(getattr(args, f"phi_{name}"), degrees),
        )
    return Settings(**directions)


def _state_payload(state: SchmidtState) -> dict[str, float]:
    return {
        "beta": state.beta,
        "cos_beta": math.cos(state.beta),
        "gamma": state.gamma,
    }


def _settings_payload(settings: Settings) -> dict[str, dict[str, float]]:
    return {
        name: {"theta": d.theta, "phi": d.phi}
        for name, d in (
            ("f", settings.f),
            ("d", settings.d),
            ("g", settings.g),
            ("e", settings.e),
        )
    }


def _cmd_probs(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    state = _resolve_state(args)
    settings = _resolve_settings(args)
    probs = cabello_probs(state, settings)
    patterns = (
        (settings.f, +1, settings.g, +1),
        (settings.d, +1, settings.g, -1),
        (settings.f, -1, settings.e, +1),
        (settings.d, +1, settings.e, +1),
    )
    oracle = [joint_probability_oracle(state, a, oa, b, ob) for a, oa, b, ob in patterns]
    closed = (probs.q1, probs.q2, probs.q3, probs.q4)
    verdict = check_conditions(probs, tol=args.tol)
    payload = {
        "command": "probs",
        "state": _state_payload(state),
        "settings": _settings_payload(settings),
        "probs": {f"q{i + 1}": closed[i] for i in range(4)},
        "oracle_delta": {f"q{i + 1}": abs(closed[i] - oracle[i]) for i in range(4)},
        "gap": probs.gap,
        "verdict": {"holds": verdict.holds, "reason": verdict.reason},
    }
    return payload, 0


def _cmd_optimize(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    state = _resolve_state(args)
    record = maximize_gap(
        state.beta, grid_size=args.grid, refine_tol=args.tol, branch=args.branch
    )
    payload: dict[str, Any] = {"command": "optimize", **asdict(record)}
    payload["cos_beta"] = math.cos(record.beta)
    if abs(state.beta - QUARTER_PI) <= 1e-12:
        payload["note"] = (
            "maximally entangled state: the gap vanishes for every "
            "constraint-satisfying setting"
        )
    return payload, 0


_SWEEP_COLUMNS = (
    "beta",
    "cos_beta",
    "cabello_gap",
    "hardy_value",
    "theta_d_star",
    "theta_e_star",
    "stationarity_residual",
    "symmetric_optimum",
    "error",
)


def _cmd_sweep(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    n = args.grid
    if n < 2:
        raise UsageError(f"--grid must be >= 2, got {n!r}")
    if args.grid_space == "cos-beta":
        grid = [(i / (n + 1), math.acos(i / (n + 1))) for i in range(1, n + 1)]
    else:
        grid = [
            (math.cos(i * HALF_PI_GRID / (n + 1)), i * HALF_PI_GRID / (n + 1))
            for i in range(1, n + 1)
        ]
    rows: list[dict[str, Any]] = []
    failures = 0
    for cos_beta, beta in grid:
        row: dict[str, Any] = {"beta": beta, "cos_beta": cos_beta}
        try:
            record = maximize_gap(
                beta, grid_size=args.opt_grid, refine_tol=args.tol, branch=args.branch
            )
            row.update(
                cabello_gap=record.gap_star,
                hardy_value=record.hardy_star,
                theta_d_star=record.theta_d_star,
                theta_e_star=record.theta_e_star,
                stationarity_residual=record.stationarity_residual,
                symmetric_optimum=record.symmetric_optimum,
                error=None,
            )
        except DomainError as exc:
            failures += 1
            row.update(
                cabello_gap=None,
                hardy_value=None,
                theta_d_star=None,
                theta_e_star=None,
                stationarity_residual=None,
                symmetric_optimum=None,
                error=str(exc),
            )
        rows.append(row)
    payload = {
        "command": "sweep",
        "grid_space": args.grid_space,
        "points": n,
        "branch": args.branch,
        "records": rows,
    }
    return payload, (4 if failures else 0)


def _cmd_nogo(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    if args.trials < 1:
        raise UsageError(f"--trials must be >= 1, got {args.trials!r}")
    report = nogo_sweep(trials=args.trials, seed=args.seed, tolerance=args.tol)
    payload = {
        "command": "nogo",
        "trials": report.trials,
        "seed": report.seed,
        "tolerance": report.tolerance,
        "max_abs_gap": report.max_abs_gap,
        "max_q2": report.max_q2,
        "max_q3": report.max_q3,
        "all_within_tolerance": report.all_within,
    }
    return payload, 0


def _cmd_lhv(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    report = local_bound_check()
    payload: dict[str, Any] = {
        "command": "lhv",
        "local_bound": {
            "all_hold": report.all_hold,
            "rows": [
                {
                    "f": r.strategy.f,
                    "d": r.strategy.d,
                    "g": r.strategy.g,
                    "e": r.strategy.e,
                    "lhs": r.lhs,
                    "rhs": r.rhs,
                    "holds": r.holds,
                }
                for r in report.rows
            ],
        },
    }
    if args.beta is not None or args.cos_beta is not None:
        state = _resolve_state(args)
        settings = _resolve_settings(args)
        payload["state"] = _state_payload(state)
        payload["settings"] = _settings_payload(settings)
        payload["violation"] = quantum_violation(state, settings)
        if args.trials is not None:
            if args.trials < 1:
                raise UsageError(f"--trials must be >= 1, got {args.trials!r}")
            stats = sample_probs(state, settings, args.trials, args.seed)
            q_hat = stats.q_hat
            payload["sample"] = {
                "trials_per_pair": stats.trials_per_pair,
                "seed": stats.seed,
                "counts": {
                    PAIR_LABELS[k]: list(stats.counts[k]) for k in range(4)
                },
                "q_hat": {f"q{i + 1}": v for i, v in enumerate(
                    (q_hat.q1, q_hat.q2, q_hat.q3, q_hat.q4)
                )},
                "gap_hat": q_hat.q4 - q_hat.q1,
            }
    elif args.trials is not None:
        raise UsageError("--trials requires a state and settings to sample from")
    return payload, 0


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, str]]:
    if isinstance(obj, dict):
        rows: list[tuple[str, str]] = []
        for key in sorted(obj):
            rows.extend(_flatten(obj[key], f"{prefix}{key}."))
        return rows
    if isinstance(obj, (list, tuple)):
        rows = []
        for i, item in enumerate(obj):
            rows.extend(_flatten(item, f"{prefix}{i}."))
        return rows
    return [(prefix[:-1], _format_cell(obj))]


def _render(payload: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if payload.get("command") == "sweep":
        writer.writerow(_SWEEP_COLUMNS)
        for row in payload["records"]:
            writer.writerow(_format_cell(row[c]) for c in _SWEEP_COLUMNS)
    else:
        writer.writerow(("key", "value"))
        writer.writerows(_flatten(payload))
    return buffer.getvalue()


_COMMANDS = {
    "probs": _cmd_probs,
    "optimize": _cmd_optimize,
    "sweep": _cmd_sweep,
    "nogo": _cmd_nogo,
    "lhv": _cmd_lhv,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload, exit_code = _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 4
    except NumericalConsistencyError as exc:
        print(f"numerical-consistency error: {exc}", file=sys.stderr)
        return 3
    text = _render(payload, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return exit_code


if __name__ == "__main__":
    raise SystemExit(main())
