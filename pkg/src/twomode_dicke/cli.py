"""Command-line driver: parameter-plane sweeps, slices and oracle comparison.

Couplings on the command line and in all output are expressed in units of the
critical coupling lambda_c = sqrt(omega * omega0); energies are in units of
omega.  Output is deterministic: grid rows are row-major in lambda_x, then
lambda_y, regardless of how many workers computed them.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

import numpy as np

from . import gaussian_info, model, oracle
from .errors import (
    ConfigError,
    GoldstoneLineError,
    NearSingularError,
    NonPhysicalError,
    NonPositiveDefiniteError,
    NotPureError,
    NumericalFailureError,
)

#: Values with magnitude above this are emitted as the literal token "inf".
INF_THRESHOLD = 1e6

#: Quantity groups selectable with --quantities, in stable output order.
GROUP_COLUMNS = {
    "gaps": ["nu_1", "nu_2", "nu_3"],
    "energy": ["e_gs"],
    "mi": [
        "s_x", "s_y", "s_j", "s_xy", "s_xj", "s_yj",
        "mi_xy_j", "mi_xj_y", "mi_yj_x", "mi_x_y", "mi_x_j", "mi_y_j",
    ],
    "eof": ["eof_x_j", "eof_y_j", "eof_x_y"],
    "tripartite": ["tri_x_yj", "tri_j_yx"],
}
GROUP_ORDER = ["gaps", "energy", "mi", "eof", "tripartite"]

_LEAD_COLUMNS = ["lambda_x", "lambda_y", "goldstone_offset"]
_TAIL_COLUMNS = ["diverged", "error"]

_ORACLE_COLUMNS = [
    "lambda_x", "lambda_y", "j", "e0_per_spin", "e_gs_analytic",
    "abs_de", "cm_max_dev", "converged", "diverged", "error",
]


def schema() -> dict:
    """The shipped JSON schema for sweep/slice/oracle-compare output."""
    text = resources.files("twomode_dicke").joinpath("schemas/sweep.schema.json").read_text()
    return json.loads(text)


def _parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"range must be min:max:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad range {text!r}: {exc}") from exc
    if count < 1 or lo < 0.0 or hi < lo:
        raise ConfigError(f"range {text!r} must satisfy 0 <= min <= max, count >= 1")
    return lo, hi, count


def _parse_quantities(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    if not names:
        raise ConfigError("--quantities must name at least one group")
    for name in names:
        if name != "all" and name not in GROUP_COLUMNS:
            raise ConfigError(
                f"unknown quantity {name!r}; choose from "
                f"{', '.join(list(GROUP_COLUMNS) + ['all'])}"
            )
    if "all" in names:
        return list(GROUP_ORDER)
    return [g for g in GROUP_ORDER if g in names]


def _grid(range_spec: tuple[float, float, int]) -> np.ndarray:
    lo, hi, count = range_spec
    if count == 1:
        return np.array([lo])
    return np.linspace(lo, hi, count)


def sweep_columns(groups: list[str]) -> list[str]:
    cols = list(_LEAD_COLUMNS)
    for g in GROUP_ORDER:
        if g in groups:
            cols.extend(GROUP_COLUMNS[g])
    cols.extend(_TAIL_COLUMNS)
    return cols


def evaluate_point(omega: float, omega0: float, lx_rel: float, ly_rel: float,
                   goldstone_epsilon: float, groups: tuple[str, ...]) -> dict:
    """One output row for a single (lambda_x, lambda_y) grid point.

    Couplings are in units of lambda_c.  Points on (or within
    goldstone_epsilon of) the degenerate line lambda_x = lambda_y > lambda_c
    are evaluated at lambda_y * (1 - goldstone_epsilon) and flagged.
    Failures of the covariance-matrix pipeline at exactly-critical points are
    reported as diverged rows, not errors.
    """
    row: dict = {"lambda_x": lx_rel, "lambda_y": ly_rel, "goldstone_offset": False,
                 "diverged": False, "error": None}
    for g in groups:
        for col in GROUP_COLUMNS[g]:
            row[col] = math.nan
    try:
        base = model.ModelParams(omega=omega, omega0=omega0)
        lc = base.lambda_c
        lx, ly = lx_rel * lc, ly_rel * lc
        if abs(lx - ly) <= goldstone_epsilon * lc and max(lx, ly) > lc:
            ly = ly * (1.0 - goldstone_epsilon)
            row["goldstone_offset"] = True
        p = base.with_couplings(lx, ly)

        if "gaps" in groups:
            nu = model.excitation_gaps(p).nu
            row["nu_1"], row["nu_2"], row["nu_3"] = nu
        if "energy" in groups:
            row["e_gs"] = model.ground_state_energy(p) / omega
        if any(g in groups for g in ("mi", "eof", "tripartite")):
            try:
                report = gaussian_info.correlation_report(model.ground_state_cm(p))
            except (NearSingularError, NonPositiveDefiniteError, NotPureError,
                    NonPhysicalError, NumericalFailureError, GoldstoneLineError):
                row["diverged"] = True
            else:
                values = report.to_dict()
                for g in ("mi", "eof", "tripartite"):
                    if g in groups:
                        for col in GROUP_COLUMNS[g]:
                            row[col] = values[col]
    except Exception as exc:  # recorded per-row; the sweep never aborts
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _evaluate_point_star(args) -> dict:
    return evaluate_point(*args)


def run_sweep(omega: float, omega0: float, x_range, y_range, groups: list[str],
              goldstone_epsilon: float, threads: int) -> list[dict]:
    tasks = [
        (omega, omega0, float(lx), float(ly), goldstone_epsilon, tuple(groups))
        for lx in _grid(x_range)
        for ly in _grid(y_range)
    ]
    if threads <= 1 or len(tasks) < 4:
        return [_evaluate_point_star(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        chunk = max(1, len(tasks) // (4 * threads))
        # executor.map preserves task order, which is already row-major.
        return list(pool.map(_evaluate_point_star, tasks, chunksize=chunk))


def run_oracle_compare(omega: float, omega0: float, lx_rel: float, ly_rel: float,
                       sizes: list[float], n_max: int) -> list[dict]:
    base = model.ModelParams(omega=omega, omega0=omega0)
    p = base.with_couplings(lx_rel * base.lambda_c, ly_rel * base.lambda_c)
    e_analytic = model.ground_state_energy(p) / omega
    rows = []
    for j in sizes:
        row = {
            "lambda_x": lx_rel, "lambda_y": ly_rel, "j": j,
            "e0_per_spin": math.nan, "e_gs_analytic": e_analytic,
            "abs_de": math.nan, "cm_max_dev": math.nan,
            "converged": None, "diverged": False, "error": None,
        }
        try:
            res = oracle.exact_ground_state(p, oracle.TruncationSpec(j=j, n_max=n_max))
            analytic_cm = model.ground_state_cm(p)
            row["e0_per_spin"] = res.energy_per_spin / omega
            row["abs_de"] = abs(res.energy_per_spin / omega - e_analytic)
            row["cm_max_dev"] = float(np.max(np.abs(res.cm.mat - analytic_cm.mat)))
            row["converged"] = res.converged
        except Exception as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        if value > INF_THRESHOLD:
            return "inf"
        if value < -INF_THRESHOLD:
            return "-inf"
        return format(value, ".17g")
    return str(value)


def _json_cell(value):
    if isinstance(value, float):
        if math.isnan(value):
            return None
        if value > INF_THRESHOLD:
            return "inf"
        if value < -INF_THRESHOLD:
            return "-inf"
    return value


def write_output(rows: list[dict], columns: list[str], fmt: str, out,
                 config_echo: dict) -> None:
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_cell(row.get(c)) for c in columns])
    else:
        doc = {
            "config": config_echo,
            "rows": [{c: _json_cell(row.get(c)) for c in columns} for row in rows],
        }
        json.dump(doc, out, indent=2)
        out.write("\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twomode-dicke",
        description="Parameter sweeps of the two-mode Dicke model "
                    "(couplings in units of lambda_c, energies in units of omega).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--config", help="JSON config file; CLI flags override its keys")
        sp.add_argument("--omega", type=float, default=1.0)
        sp.add_argument("--omega0", type=float, default=1.0)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", help="output path (default: stdout)")

    sweep = sub.add_parser("sweep", help="rectangular grid over (lambda_x, lambda_y)")
    add_common(sweep)
    sweep.add_argument("--x", default="0:2:101", help="lambda_x range min:max:count")
    sweep.add_argument("--y", default="0:2:101", help="lambda_y range min:max:count")
    sweep.add_argument("--quantities", default="all",
                       help="comma-separated subset of gaps,energy,mi,eof,tripartite,all")
    sweep.add_argument("--goldstone-epsilon", type=float, default=1e-6)
    sweep.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    sl = sub.add_parser("slice", help="1D slice at fixed lambda_y")
    add_common(sl)
    sl.add_argument("--x", default="0:2:101", help="lambda_x range min:max:count")
    sl.add_argument("--y", type=float, required=True, help="fixed lambda_y (units of lambda_c)")
    sl.add_argument("--quantities", default="all")
    sl.add_argument("--goldstone-epsilon", type=float, default=1e-6)
    sl.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    oc = sub.add_parser("oracle-compare", help="finite-size oracle vs analytic pipeline")
    add_common(oc)
    oc.add_argument("--lambda-x", type=float, required=True)
    oc.add_argument("--lambda-y", type=float, required=True)
    oc.add_argument("--j", default="5,10,20", help="comma-separated spin lengths")
    oc.add_argument("--n-max", type=int, default=10, help="Fock cutoff per boson")
    parser.command_parsers = {"sweep": sweep, "slice": sl, "oracle-compare": oc}
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                overrides = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {args.config}: {exc}") from exc
        if not isinstance(overrides, dict):
            raise ConfigError("config file must hold a JSON object")
        known = set(vars(args))
        unknown = set(overrides) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        # precedence: defaults < config file < explicit CLI flags.  Defaults
        # must be updated on the subparser as well: the subcommand re-parse
        # would otherwise reinstate its own defaults over the config values.
        parser.set_defaults(**overrides)
        parser.command_parsers[args.command].set_defaults(**overrides)
        args = parser.parse_args(argv)
    return args


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = _apply_config_file(parser, list(sys.argv[1:] if argv is None else argv))

        if args.command in ("sweep", "slice"):
            groups = _parse_quantities(args.quantities)
            x_range = _parse_range(str(args.x))
            if args.command == "slice":
                y_val = float(args.y)
                if y_val < 0.0:
                    raise ConfigError("--y must be nonnegative")
                y_range = (y_val, y_val, 1)
            else:
                y_range = _parse_range(str(args.y))
            if args.goldstone_epsilon <= 0.0 or args.goldstone_epsilon >= 1.0:
                raise ConfigError("--goldstone-epsilon must be in (0, 1)")
            if args.omega <= 0.0 or args.omega0 <= 0.0:
                raise ConfigError("--omega and --omega0 must be positive")
            rows = run_sweep(args.omega, args.omega0, x_range, y_range, groups,
                             args.goldstone_epsilon, max(1, args.threads))
            columns = sweep_columns(groups)
            config_echo = {
                "command": args.command, "omega": args.omega, "omega0": args.omega0,
                "x": list(x_range), "y": list(y_range), "quantities": groups,
                "goldstone_epsilon": args.goldstone_epsilon, "format": args.format,
            }
        else:
            try:
                sizes = [float(t) for t in str(args.j).split(",") if t.strip()]
            except ValueError as exc:
                raise ConfigError(f"bad --j list: {exc}") from exc
            if not sizes:
                raise ConfigError("--j must list at least one spin length")
            rows = run_oracle_compare(args.omega, args.omega0, args.lambda_x,
                                      args.lambda_y, sizes, args.n_max)
            columns = list(_ORACLE_COLUMNS)
            config_echo = {
                "command": args.command, "omega": args.omega, "omega0": args.omega0,
                "lambda_x": args.lambda_x, "lambda_y": args.lambda_y,
                "j": sizes, "n_max": args.n_max, "format": args.format,
            }
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_output(rows, columns, args.format, fh, config_echo)
    else:
        write_output(rows, columns, args.format, sys.stdout, config_echo)

    if any(row.get("error") for row in rows):
        return 3
    return 0


def entrypoint() -> None:
    sys.exit(main())
