"""Command-line interface.

Subcommands: ``solve``, ``spectrum``, ``critical``, ``limit-check`` and
``wavefunction``.  Every subcommand accepts ``--config FILE`` with
``key = value`` lines (keys are the long option names, dashes or
underscores); flags on the command line override the file.

Exit codes: 0 ok, 1 limit check failed, 2 usage / invalid parameters,
3 numerical failure, 4 invalid critical-potential bracket, 5 requested
energy is not an eigenvalue.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import BracketInvalid, InvalidParameter, KGWellError, NotAnEigenvalue
from .matching import match_coefficients, wavefunction_eval
from .oracle import cusp_limit_check, shooting_eigenvalues, square_well_eigenvalues
from .potential import PotentialParams, potential_value
from .spectrum import (
    ScanConfig,
    critical_potential,
    find_bound_states,
    find_roots,
    kg_norm,
    nearest_root,
    sweep_v0,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICS = 3
EXIT_BRACKET = 4
EXIT_NOT_EIGENVALUE = 5

LIMIT_TOLERANCE = {"square": 1e-3, "cusp": 1e-6}
# the merged state has N ~ 0, so its norm is certified in absolute terms
CRITICAL_NORM_ABS_ERR = 1e-10


@dataclass(frozen=True)
class RunConfig:
    params: PotentialParams | None
    scan: ScanConfig
    output_path: Path | None
    output_format: str = "csv"


def fmt(value) -> str:
    """12 significant digits, locale independent."""
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def rounded(value: float) -> float:
    return float(format(value, ".12g"))


def read_config(path: str) -> dict[str, str]:
    values = {}
    for number, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameter(f"{path}:{number}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def worker_count() -> int:
    raw = os.environ.get("KGWELL_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InvalidParameter(f"KGWELL_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise InvalidParameter("KGWELL_THREADS must be >= 0")
    return (os.cpu_count() or 1) if n == 0 else n


# ---------------------------------------------------------------------------
# output


def emit(rows: list[dict], columns: list[str], cfg: RunConfig) -> None:
    if cfg.output_format == "json":
        records = [{k: rounded(v) if isinstance(v, float) else v for k, v in row.items()} for row in rows]
        text = json.dumps(records, indent=1) + "\n"
    else:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(row[c]) for c in columns])
        text = buffer.getvalue()
    if cfg.output_path is None:
        sys.stdout.write(text)
    else:
        cfg.output_path.write_text(text)


# ---------------------------------------------------------------------------
# subcommands


def _params(args) -> PotentialParams:
    return PotentialParams(args.v0, args.a, args.x0)


def cmd_solve(args, cfg: RunConfig) -> int:
    p = cfg.params
    states = find_bound_states(p, cfg.scan)
    rows = [
        {"e": float(s.e), "n": float(s.norm), "kind": s.kind.value, "v0": p.v0, "a": p.a, "x0": p.x0}
        for s in states
    ]
    columns = ["e", "n", "kind"]
    emit(rows, columns, cfg)
    return EXIT_OK


def cmd_spectrum(args, cfg: RunConfig) -> int:
    workers = worker_count()
    curve = sweep_v0(
        args.a,
        args.x0,
        args.v0_min,
        args.v0_max,
        args.steps,
        cfg.scan,
        warm_start=workers <= 1,
        refine_coalescence=not args.no_refine,
        workers=workers,
    )
    rows = []
    for point in curve.points:
        for state, branch in zip(point.states, point.branch_ids):
            rows.append(
                {
                    "v0": point.v0,
                    "branch_id": branch,
                    "e": float(state.e),
                    "n": float(state.norm),
                    "kind": state.kind.value,
                    "a": args.a,
                    "x0": args.x0,
                }
            )
    emit(rows, ["v0", "branch_id", "e", "n"], cfg)
    return EXIT_OK


def cmd_critical(args, cfg: RunConfig) -> int:
    v_cr, e_cr = critical_potential(args.a, args.x0, args.lo, args.hi, cfg.scan)
    try:
        state = match_coefficients(float(e_cr), PotentialParams(v_cr, args.a, args.x0), tol=1e-6)
        abs_n = abs(kg_norm(state, abs_err=CRITICAL_NORM_ABS_ERR))
    except KGWellError:
        abs_n = math.nan
    emit([{"v_cr": v_cr, "e_cr": float(e_cr), "abs_n": abs_n, "a": args.a, "x0": args.x0}],
         ["v_cr", "e_cr", "abs_n"], cfg)
    return EXIT_OK


def cmd_limit_check(args, cfg: RunConfig) -> int:
    if args.mode == "square":
        if args.width is None or args.width <= 0:
            raise InvalidParameter("--width > 0 is required in square mode")
        analytic = [float(e) for e in find_roots(PotentialParams(args.v0, args.a, -args.width), cfg.scan)]
        reference = square_well_eigenvalues(args.v0, args.width, cfg.scan)
    else:
        analytic = cusp_limit_check(args.v0, args.a, cfg.scan)
        oracle_scan = ScanConfig(cfg.scan.e_min, cfg.scan.e_max, args.oracle_points, cfg.scan.refine_tol)
        reference = shooting_eigenvalues(PotentialParams(args.v0, args.a, 0.0), oracle_scan)
    tol = LIMIT_TOLERANCE[args.mode]
    rows = []
    worst = 0.0 if len(analytic) == len(reference) else math.inf
    for i in range(max(len(analytic), len(reference))):
        lhs = analytic[i] if i < len(analytic) else math.nan
        rhs = reference[i] if i < len(reference) else math.nan
        dev = abs(lhs - rhs)
        if not math.isnan(dev):
            worst = max(worst, dev)
        rows.append({"index": i, "analytic": lhs, "reference": rhs, "deviation": dev})
    emit(rows, ["index", "analytic", "reference", "deviation"], cfg)
    passed = worst < tol
    print(
        f"{args.mode}: {len(analytic)} analytic vs {len(reference)} reference eigenvalues, "
        f"max deviation {fmt(worst)} (tolerance {fmt(tol)}): {'pass' if passed else 'FAIL'}",
        file=sys.stderr,
    )
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_wavefunction(args, cfg: RunConfig) -> int:
    p = cfg.params
    state = match_coefficients(nearest_root(p, args.e, args.e_tol), p)
    x_min = args.x_min if args.x_min is not None else p.x0 - 10.0
    x_max = args.x_max if args.x_max is not None else 10.0
    if not x_min < x_max or args.points < 2:
        raise InvalidParameter("need x_min < x_max and points >= 2")
    rows = []
    for i in range(args.points):
        x = x_min + (x_max - x_min) * i / (args.points - 1)
        phi = wavefunction_eval(state, x)
        rows.append({"x": x, "re_phi": phi.real, "im_phi": phi.imag,
                     "abs_phi2": abs(phi) ** 2, "v": potential_value(p, x)})
    emit(rows, ["x", "re_phi", "im_phi", "abs_phi2", "v"], cfg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _add_scan_flags(parser):
    scan = ScanConfig()
    parser.add_argument("--e-min", type=float, default=scan.e_min)
    parser.add_argument("--e-max", type=float, default=scan.e_max)
    parser.add_argument("--grid-points", type=int, default=scan.grid_points)
    parser.add_argument("--refine-tol", type=float, default=scan.refine_tol)


def _add_output_flags(parser):
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", type=Path, default=None, help="output file (default: standard output)")
    parser.add_argument("--config", default=None, help="file of 'key = value' defaults")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgwell",
        description="Klein-Gordon bound states in the smooth potential well.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="bound states, norms and particle/antiparticle kind")
    solve.add_argument("--v0", type=float, required=True)
    solve.add_argument("--a", type=float, required=True)
    solve.add_argument("--x0", type=float, required=True)
    solve.set_defaults(handler=cmd_solve, needs_params=True)

    spectrum = sub.add_parser("spectrum", help="bound states over a range of depths")
    spectrum.add_argument("--a", type=float, required=True)
    spectrum.add_argument("--x0", type=float, required=True)
    spectrum.add_argument("--v0-min", type=float, required=True)
    spectrum.add_argument("--v0-max", type=float, required=True)
    spectrum.add_argument("--steps", type=int, required=True)
    spectrum.add_argument("--no-refine", action="store_true",
                          help="do not insert extra depths approaching a coalescence")
    spectrum.set_defaults(handler=cmd_spectrum, needs_params=False)

    critical = sub.add_parser("critical", help="depth at which the deep particle/antiparticle pair merges")
    critical.add_argument("--a", type=float, required=True)
    critical.add_argument("--x0", type=float, required=True)
    critical.add_argument("--lo", type=float, default=None,
                          help="depth with a nodeless state (omit both to search upward from 1)")
    critical.add_argument("--hi", type=float, default=None, help="depth without one")
    critical.set_defaults(handler=cmd_critical, needs_params=False)

    limit = sub.add_parser("limit-check", help="square-well and cusp-well limits")
    limit.add_argument("--mode", choices=("square", "cusp"), required=True)
    limit.add_argument("--v0", type=float, required=True)
    limit.add_argument("--width", type=float, default=None)
    limit.add_argument("--a", type=float, default=None,
                       help="smoothness (square mode default 1e-3, cusp mode default 0.5)")
    limit.add_argument("--oracle-points", type=int, default=400)
    limit.set_defaults(handler=cmd_limit_check, needs_params=False)

    wave = sub.add_parser("wavefunction", help="export an eigenfunction profile")
    wave.add_argument("--v0", type=float, required=True)
    wave.add_argument("--a", type=float, required=True)
    wave.add_argument("--x0", type=float, required=True)
    wave.add_argument("--e", type=float, required=True)
    wave.add_argument("--e-tol", type=float, default=1e-6,
                      help="search radius for the eigenvalue around --e")
    wave.add_argument("--x-min", type=float, default=None)
    wave.add_argument("--x-max", type=float, default=None)
    wave.add_argument("--points", type=int, default=401)
    wave.set_defaults(handler=cmd_wavefunction, needs_params=True)

    for p in (solve, spectrum, critical, limit, wave):
        _add_scan_flags(p)
        _add_output_flags(p)
    return parser


def _parse(argv):
    parser = build_parser()
    # the file must be read before the full parse, which enforces required flags
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--config", default=None)
    early, _ = pre.parse_known_args(argv)
    choices = parser._subparsers._group_actions[0].choices
    if early.config and early.command in choices:
        try:
            overrides = read_config(early.config)
        except OSError as exc:
            parser.error(f"cannot read config file: {exc}")
        except InvalidParameter as exc:
            parser.error(str(exc))
        subparser = choices[early.command]
        known = {action.dest: action for action in subparser._actions}
        defaults = {}
        for key, raw in overrides.items():
            if key not in known or key in ("config", "help"):
                parser.error(f"unknown config key {key!r} for {early.command}")
            action = known[key]
            try:
                if isinstance(action, argparse._StoreTrueAction):
                    defaults[key] = raw.lower() in ("1", "true", "yes", "on")
                else:
                    defaults[key] = action.type(raw) if action.type else raw
            except ValueError:
                parser.error(f"bad value {raw!r} for config key {key!r}")
            if action.choices is not None and defaults[key] not in action.choices:
                parser.error(f"bad value {raw!r} for config key {key!r}")
            action.required = False
        subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    try:
        args = _parse(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if args.command == "limit-check" and args.a is None:
            args.a = 1e-3 if args.mode == "square" else 0.5
        scan = ScanConfig(args.e_min, args.e_max, args.grid_points, args.refine_tol)
        params = _params(args) if args.needs_params else None
        if args.command in ("spectrum", "critical"):
            PotentialParams(1.0, args.a, args.x0)
        cfg = RunConfig(params=params, scan=scan, output_path=args.out, output_format=args.format)
        return args.handler(args, cfg)
    except InvalidParameter as exc:
        print(f"kgwell: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BracketInvalid as exc:
        print(f"kgwell: invalid bracket: {exc}", file=sys.stderr)
        return EXIT_BRACKET
    except NotAnEigenvalue as exc:
        print(f"kgwell: not an eigenvalue: {exc}", file=sys.stderr)
        return EXIT_NOT_EIGENVALUE
    except KGWellError as exc:
        print(f"kgwell: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICS


if __name__ == "__main__":
    sys.exit(main())
