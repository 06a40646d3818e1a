"""Command-line front end.

Every computation is a subcommand emitting CSV or JSON (stdout by
default), with optional matplotlib figures rendered next to the
delimited output; ``report`` writes the full data-plus-figure set for
the standard studies into a directory.  Floats are serialized with 17
significant digits so every emission round-trips losslessly, and
identical invocations produce byte-identical data output.

Exit codes: 0 success, 1 acceptance-check failure, 2 domain error,
3 regime error, 4 numerical error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import acceptance
from .analysis import (
    Axis,
    GMode,
    SweepTable,
    find_crossover,
    fit_power_law,
    local_slope,
    resolve_field,
    sweep,
)
from .chain import ChainSpec, log_fidelity
from .ed import ed_oracle_fidelity
from .errors import DomainError, FidelityError
from .scaling import scaling_a

__all__ = ["main", "RunConfig", "emit_csv", "parse_csv", "format_float"]

_STANDARD_CROSSOVER_DELTAS = (1e-3, 3e-4, 1e-4, 3e-5)


@dataclass(frozen=True)
class RunConfig:
    """One validated invocation: the target subcommand, its parameters
    (mirroring the CLI flags), and where/how output goes."""

    command: str
    parameters: dict
    output_format: str = "json"
    output_path: str | None = None


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def format_float(value: float) -> str:
    """17-significant-digit decimal; lossless for binary doubles."""
    return "%.17g" % float(value)


def emit_csv(header: list[str], rows: list[tuple]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join("" if v is None else format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> tuple[list[str], list[tuple]]:
    lines = [line for line in text.split("\n") if line]
    header = lines[0].split(",")
    rows = [
        tuple(None if cell == "" else float(cell) for cell in line.split(","))
        for line in lines[1:]
    ]
    return header, rows


def _emit_json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, newline="\n")


# ---------------------------------------------------------------------------
# flag parsing helpers
# ---------------------------------------------------------------------------

def _parse_g_mode(raw: str) -> GMode | float:
    aliases = {
        "critical": GMode.AT_CRITICAL,
        "plus-delta": GMode.PLUS_DELTA,
        "plus-5delta": GMode.PLUS_5DELTA,
    }
    if raw in aliases:
        return aliases[raw]
    try:
        return float(raw)
    except ValueError:
        raise DomainError(
            f"g-mode must be critical, plus-delta, plus-5delta or a number, "
            f"got {raw!r}"
        ) from None


def _parse_grid(spec: str, axis: Axis) -> list[float] | list[int]:
    parts = spec.split(":")
    if len(parts) != 4:
        raise DomainError(
            f"grid spec must be start:stop:count:geometric|linear, got {spec!r}"
        )
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise DomainError(f"bad grid spec {spec!r}: {exc}") from None
    kind = parts[3]
    if kind not in ("geometric", "linear"):
        raise DomainError(f"grid kind must be geometric or linear, got {kind!r}")
    if count < 3:
        raise DomainError(f"grid needs at least 3 points, got {count}")
    if not start < stop:
        raise DomainError(f"grid start must be below stop, got {spec!r}")
    if kind == "geometric":
        if start <= 0:
            raise DomainError("geometric grids require a positive start")
        raw = np.geomspace(start, stop, count)
    else:
        raw = np.linspace(start, stop, count)
    if axis is Axis.SIZE:
        evens = np.unique(np.maximum(2, 2 * np.round(raw / 2.0).astype(np.int64)))
        return [int(n) for n in evens]
    return [float(x) for x in raw]


def _parse_delta_list(raw: str) -> list[float]:
    try:
        values = [float(part) for part in raw.split(",") if part.strip()]
    except ValueError as exc:
        raise DomainError(f"bad delta list {raw!r}: {exc}") from None
    if len(values) < 3:
        raise DomainError(
            f"the crossover fit needs at least 3 half-differences, got {len(values)}"
        )
    for value in values:
        if not 1e-6 <= abs(value) <= 1e-2:
            raise DomainError(
                f"crossover detection requires 1e-6 <= |delta| <= 1e-2, got {value}"
            )
    return values


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_fidelity(config: RunConfig) -> int:
    p = config.parameters
    spec = ChainSpec(size=p["size"], field=p["g"], half_diff=p["delta"])
    if p["oracle"]:
        f = ed_oracle_fidelity(spec.size, spec.field, spec.half_diff)
        log_f = math.log(f) if f > 0.0 else -math.inf
        value = {"log_f": log_f, "f": f, "per_site": log_f / spec.size}
    else:
        result = log_fidelity(spec)
        value = {"log_f": result.log_f, "f": result.f, "per_site": result.per_site}
    payload = {
        "n": spec.size,
        "g": spec.field,
        "delta": spec.half_diff,
        "log_fidelity": value["log_f"],
        "fidelity": value["f"],
        "per_site": value["per_site"],
    }
    if config.output_format == "csv":
        header = list(payload)
        _write(emit_csv(header, [tuple(payload[k] for k in header)]), config.output_path)
    else:
        _write(_emit_json(payload), config.output_path)
    return 0


def _scan_rows(table: SweepTable, size_axis: bool, fixed_size: int | None):
    slopes = [s for _, s in local_slope(table)]
    rows = []
    for (x, log_f), slope in zip(table.points, slopes):
        per_site = log_f / (x if size_axis else fixed_size)
        rows.append((x, log_f, per_site, slope))
    return rows


def cmd_scan(config: RunConfig) -> int:
    p = config.parameters
    axis = p["axis"]
    table = sweep(axis, p["fixed"], p["grid"], p["g_mode"])
    rows = _scan_rows(table, axis is Axis.SIZE, p["fixed"].get("size"))
    header = ["x", "log_fidelity", "per_site", "local_slope"]
    if config.output_format == "json":
        payload = {
            "axis": axis.value,
            "meta": table.meta,
            "rows": [dict(zip(header, row)) for row in rows],
        }
        _write(_emit_json(payload), config.output_path)
    else:
        _write(emit_csv(header, rows), config.output_path)
    if p["figure"]:
        from .plots import figure_sweep

        label = p["g_mode"].value if isinstance(p["g_mode"], GMode) else str(p["g_mode"])
        figure_sweep({label: table}, p["figure"])
    return 0


def cmd_scaling_function(config: RunConfig) -> int:
    p = config.parameters
    cs = np.linspace(p["c_min"], p["c_max"], p["points"])
    evals = [scaling_a(float(c)) for c in cs]
    header = ["c", "a_analytic", "da_dc"]
    rows = [(e.c, e.a_value, e.da_dc) for e in evals]
    numeric = None
    if p["numeric"]:
        size, delta = p["size"], p["delta"]
        header += ["a_numeric", "residual"]
        numeric = [
            -log_fidelity(
                ChainSpec(size, 1.0 + e.c * abs(delta), delta)
            ).log_f / (size * abs(delta))
            for e in evals
        ]
        rows = [
            row + (num, abs(num - row[1])) for row, num in zip(rows, numeric)
        ]
    _write(emit_csv(header, rows), config.output_path)
    if p["figure"]:
        from .plots import figure_scaling_function

        figure_scaling_function(
            [e.c for e in evals],
            [e.a_value for e in evals],
            [e.da_dc for e in evals],
            p["figure"],
            numeric=numeric,
        )
    return 0


def cmd_crossover(config: RunConfig) -> int:
    p = config.parameters
    deltas = p["deltas"]
    sizes = [find_crossover(d, p["g_mode"], p["target_slope"]) for d in deltas]
    fit = fit_power_law(list(zip(map(abs, deltas), sizes)))
    mode = p["g_mode"]
    payload = {
        "g_mode": mode.value if isinstance(mode, GMode) else mode,
        "target_slope": p["target_slope"],
        "points": [
            {"delta": d, "n_three_halves": n} for d, n in zip(deltas, sizes)
        ],
        "fit": {
            "a": fit.prefactor_a,
            "b": fit.exponent_b,
            "stderr_b": fit.stderr_b,
        },
    }
    _write(_emit_json(payload), config.output_path)
    if p["figure"]:
        from .plots import figure_crossover

        label = mode.value if isinstance(mode, GMode) else str(mode)
        figure_crossover({label: (deltas, sizes, fit)}, p["figure"])
    return 0


def cmd_check(config: RunConfig) -> int:
    results = acceptance.run_all()
    payload = {
        "criteria": [
            {
                "number": r.number,
                "title": r.title,
                "passed": r.passed,
                "checks": [dataclasses.asdict(c) for c in r.checks],
            }
            for r in results
        ],
        "all_passed": all(r.passed for r in results),
    }
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] criterion {r.number}: {r.title}", file=sys.stderr)
    _write(_emit_json(payload), config.output_path)
    return 0 if payload["all_passed"] else 1


def cmd_report(config: RunConfig) -> int:
    from .plots import (
        figure_crossover,
        figure_field_scan,
        figure_scaling_function,
        figure_sweep,
    )

    out = Path(config.parameters["out_dir"])
    quick = config.parameters["quick"]
    out.mkdir(parents=True, exist_ok=True)
    modes = (GMode.AT_CRITICAL, GMode.PLUS_DELTA, GMode.PLUS_5DELTA)

    def note(message: str) -> None:
        print(message, file=sys.stderr)

    # decay vs system size, three field modes
    delta = 1e-3 if quick else 1e-4
    size_grid = _parse_grid(
        "1e2:1e6:25:geometric" if quick else "1e2:1e7:40:geometric", Axis.SIZE
    )
    tables = {m.value: sweep(Axis.SIZE, {"delta": delta}, size_grid, m) for m in modes}
    rows = [
        (n,) + tuple(tables[m.value].points[i][1] for m in modes)
        for i, n in enumerate(size_grid)
    ]
    _write(
        emit_csv(["n"] + [f"log_f_{m.value}" for m in modes], rows),
        str(out / "size_sweep.csv"),
    )
    figure_sweep(tables, out / "size_sweep.png")
    note(f"wrote {out / 'size_sweep.csv'} (+ figure)")

    # decay vs half-difference at fixed size
    size = 10_000 if quick else 100_000
    delta_grid = _parse_grid(
        "1e-6:1e-2:25:geometric" if quick else "1e-7:1e-2:40:geometric", Axis.DELTA
    )
    tables = {m.value: sweep(Axis.DELTA, {"size": size}, delta_grid, m) for m in modes}
    rows = [
        (d,) + tuple(tables[m.value].points[i][1] for m in modes)
        for i, d in enumerate(delta_grid)
    ]
    _write(
        emit_csv(["delta"] + [f"log_f_{m.value}" for m in modes], rows),
        str(out / "delta_sweep.csv"),
    )
    figure_sweep(tables, out / "delta_sweep.png")
    note(f"wrote {out / 'delta_sweep.csv'} (+ figure)")

    # fidelity through the critical region vs the scaling-law curve
    size, delta = (20_000, 1e-3) if quick else (200_000, 1e-4)
    fields = [float(g) for g in np.linspace(0.9, 1.1, 41 if quick else 81)]
    table = sweep(Axis.FIELD, {"size": size, "delta": delta}, fields)
    fidelities = [math.exp(lf) for _, lf in table.points]
    predicted = [
        math.exp(-size * delta * scaling_a((g - 1.0) / delta).a_value) for g in fields
    ]
    rows = list(zip(fields, [lf for _, lf in table.points], fidelities, predicted))
    _write(
        emit_csv(["g", "log_fidelity", "fidelity", "predicted_fidelity"], rows),
        str(out / "field_scan.csv"),
    )
    figure_field_scan(fields, fidelities, out / "field_scan.png", predicted=predicted)
    note(f"wrote {out / 'field_scan.csv'} (+ figure)")

    # scaling function with mode-product crosses
    scaling_config = RunConfig(
        command="scaling-function",
        parameters={
            "c_min": -3.0,
            "c_max": 3.0,
            "points": 61 if quick else 121,
            "numeric": True,
            "size": 20_000 if quick else 200_000,
            "delta": 1e-3 if quick else 1e-4,
            "figure": str(out / "scaling_function.png"),
        },
        output_format="csv",
        output_path=str(out / "scaling_function.csv"),
    )
    cmd_scaling_function(scaling_config)
    note(f"wrote {out / 'scaling_function.csv'} (+ figure)")

    # crossover power law, three field modes
    crossover_deltas = (1e-3, 5e-4, 2.5e-4) if quick else _STANDARD_CROSSOVER_DELTAS
    crossover_data = {}
    for mode in modes:
        sizes = [find_crossover(d, mode) for d in crossover_deltas]
        fit = fit_power_law(list(zip(crossover_deltas, sizes)))
        crossover_data[mode.value] = (list(crossover_deltas), sizes, fit)
    payload = {
        label: {
            "points": [
                {"delta": d, "n_three_halves": n} for d, n in zip(deltas, sizes)
            ],
            "fit": {"a": fit.prefactor_a, "b": fit.exponent_b, "stderr_b": fit.stderr_b},
        }
        for label, (deltas, sizes, fit) in crossover_data.items()
    }
    _write(_emit_json(payload), str(out / "crossover.json"))
    figure_crossover(crossover_data, out / "crossover.png")
    note(f"wrote {out / 'crossover.json'} (+ figure)")
    return 0


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ising-fidelity",
        description="Exact ground-state fidelity of the transverse-field "
        "Ising chain and its critical scaling analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fid = sub.add_parser("fidelity", help="ln F, F and ln F / N for one chain")
    fid.add_argument("--size", type=int, required=True)
    fid.add_argument("--g", type=float, required=True)
    fid.add_argument("--delta", type=float, required=True)
    fid.add_argument("--oracle", action="store_true",
                     help="use the diagonalization oracle (N <= 12)")
    fid.add_argument("--format", choices=("json", "csv"), default="json")
    fid.add_argument("--output", default=None)

    scan = sub.add_parser("scan", help="sweep ln F along one axis")
    scan.add_argument("--axis", choices=("size", "delta", "g"), required=True)
    scan.add_argument("--grid", required=True,
                      help="start:stop:count:geometric|linear")
    scan.add_argument("--g-mode", default="critical",
                      help="critical | plus-delta | plus-5delta | <number>")
    scan.add_argument("--size", type=int, default=None)
    scan.add_argument("--delta", type=float, default=None)
    scan.add_argument("--format", choices=("csv", "json"), default="csv")
    scan.add_argument("--output", default=None)
    scan.add_argument("--figure", default=None,
                      help="also render the sweep to this figure file")

    sf = sub.add_parser("scaling-function",
                        help="tabulate the scaling function A(c)")
    sf.add_argument("--c-min", type=float, required=True)
    sf.add_argument("--c-max", type=float, required=True)
    sf.add_argument("--points", type=int, required=True)
    sf.add_argument("--numeric", action="store_true",
                    help="add mode-product numerics and residuals")
    sf.add_argument("--size", type=int, default=None)
    sf.add_argument("--delta", type=float, default=None)
    sf.add_argument("--output", default=None)
    sf.add_argument("--figure", default=None)

    cross = sub.add_parser("crossover",
                           help="crossover sizes and their power-law fit")
    cross.add_argument("--delta-list", required=True,
                       help="comma-separated half-differences (>= 3)")
    cross.add_argument("--g-mode", default="critical")
    cross.add_argument("--target-slope", type=float, default=1.5)
    cross.add_argument("--output", default=None)
    cross.add_argument("--figure", default=None)

    check = sub.add_parser("check", help="run the acceptance suite")
    check.add_argument("--output", default=None)

    report = sub.add_parser("report",
                            help="write the standard data + figure set")
    report.add_argument("--out-dir", required=True)
    report.add_argument("--quick", action="store_true",
                        help="smaller grids and sizes (seconds instead of ~1 min)")
    return parser


def _config_from_args(args: argparse.Namespace) -> tuple[RunConfig, callable]:
    # validate everything up front; computation starts only on a clean config
    if args.command == "fidelity":
        spec = ChainSpec(size=args.size, field=args.g, half_diff=args.delta)
        if args.oracle and spec.size > 12:
            raise DomainError(f"--oracle supports N <= 12, got {spec.size}")
        params = {"size": args.size, "g": args.g, "delta": args.delta,
                  "oracle": args.oracle}
        return (
            RunConfig("fidelity", params, args.format, args.output),
            cmd_fidelity,
        )
    if args.command == "scan":
        axis = Axis.FIELD if args.axis == "g" else Axis(args.axis)
        grid = _parse_grid(args.grid, axis)
        fixed = {}
        if axis in (Axis.DELTA, Axis.FIELD):
            if args.size is None:
                raise DomainError(f"--size is required for --axis {args.axis}")
            fixed["size"] = args.size
        if axis in (Axis.SIZE, Axis.FIELD):
            if args.delta is None:
                raise DomainError(f"--delta is required for --axis {args.axis}")
            fixed["delta"] = args.delta
        params = {
            "axis": axis,
            "grid": grid,
            "fixed": fixed,
            "g_mode": _parse_g_mode(args.g_mode),
            "figure": args.figure,
        }
        return RunConfig("scan", params, args.format, args.output), cmd_scan
    if args.command == "scaling-function":
        if args.points < 1:
            raise DomainError(f"--points must be >= 1, got {args.points}")
        if not args.c_min <= args.c_max:
            raise DomainError("--c-min must not exceed --c-max")
        if args.numeric and (args.size is None or args.delta is None):
            raise DomainError("--numeric requires --size and --delta")
        if args.numeric:
            ChainSpec(size=args.size, field=1.0, half_diff=args.delta)
            if args.delta == 0.0:
                raise DomainError("--numeric requires a nonzero --delta")
        params = {
            "c_min": args.c_min,
            "c_max": args.c_max,
            "points": args.points,
            "numeric": args.numeric,
            "size": args.size,
            "delta": args.delta,
            "figure": args.figure,
        }
        return (
            RunConfig("scaling-function", params, "csv", args.output),
            cmd_scaling_function,
        )
    if args.command == "crossover":
        if not 1.0 < args.target_slope < 2.0:
            raise DomainError(
                f"--target-slope must lie in (1, 2), got {args.target_slope}"
            )
        params = {
            "deltas": _parse_delta_list(args.delta_list),
            "g_mode": _parse_g_mode(args.g_mode),
            "target_slope": args.target_slope,
            "figure": args.figure,
        }
        return RunConfig("crossover", params, "json", args.output), cmd_crossover
    if args.command == "check":
        return RunConfig("check", {}, "json", args.output), cmd_check
    return (
        RunConfig("report", {"out_dir": args.out_dir, "quick": args.quick}, "csv", None),
        cmd_report,
    )


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config, runner = _config_from_args(args)
        return runner(config)
    except FidelityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
