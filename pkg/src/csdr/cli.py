"""Command-line interface.

Subcommands:
  point     evaluate one operating point (stability, powers, charging, rates)
  sweep     1-D/2-D parameter sweep over config fields
  profile   beam radius along the optical axis (breakpoints + uniform grid)
  spectrum  Fabry-Perot transmittance/reflectance comb over phase

Exit codes: 0 success, 2 config/spec error, 3 numeric failure (unstable
geometry where radii are required, fixed-point divergence, degenerate
propagation).
"""

from __future__ import annotations

import argparse
import math
import sys

from .cavity import DegeneratePropagationError, UnstableCavityError, breakpoints, stability
from .config import ConfigError, load_config
from .power import FixedPointDivergenceError
from .sweep import (
    COLUMN_GROUPS,
    SweepSpec,
    fp_spectrum,
    radius_profile,
    report_row,
    rows_to_csv,
    rows_to_json,
    run_point,
    run_sweep,
    sweep_header,
)

_FORMATS = ("csv", "json")


def _parse_var(text: str) -> tuple[str, float, float, int]:
    try:
        name, _, rng = text.partition("=")
        start_s, stop_s, steps_s = rng.split(":")
        return name.strip(), float(start_s), float(stop_s), int(steps_s)
    except ValueError as exc:
        raise ConfigError(
            f"malformed --var {text!r}; expected NAME=START:STOP:STEPS"
        ) from exc


def _parse_columns(text: str | None) -> tuple[str, ...]:
    if text is None:
        return tuple(COLUMN_GROUPS)
    groups = tuple(part.strip() for part in text.split(",") if part.strip())
    if not groups:
        raise ConfigError("--columns must name at least one group")
    return groups


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def _write_rows(header, rows, fmt: str, out: str | None) -> None:
    if fmt == "csv":
        _emit(rows_to_csv(header, rows), out)
    else:
        _emit(rows_to_json(header, rows), out)


def _cmd_point(args) -> int:
    config = load_config(args.config)
    groups = _parse_columns(args.columns)
    for group in groups:
        if group not in COLUMN_GROUPS:
            raise ConfigError(f"unknown column group {group!r}")
    report = run_point(config)
    row = report_row(report, groups)
    header = ["status"] + [c for g in groups for c in COLUMN_GROUPS[g]]
    _write_rows(header, [row], args.format, args.out)
    return 0


def _cmd_sweep(args) -> int:
    config = load_config(args.config)
    if not args.var:
        raise ConfigError("sweep requires at least one --var NAME=START:STOP:STEPS")
    spec = SweepSpec(
        variables=tuple(_parse_var(v) for v in args.var),
        columns=_parse_columns(args.columns),
        summary_column=args.summary_column,
    )
    rows, summary = run_sweep(config, spec)
    header = sweep_header(spec)
    _write_rows(header, rows, args.format, args.out)
    if args.summary_out:
        _write_rows(header, summary, args.format, args.summary_out)
    else:
        target = spec.resolved_summary_column()
        for row in summary:
            at = ", ".join(f"{v[0]}={row[v[0]]:.9g}" for v in spec.variables)
            best = row.get(target)
            best_s = "n/a" if best is None else f"{best:.9g}"
            print(f"# max {target} = {best_s} at {at}", file=sys.stderr)
    if args.plot:
        from . import plotting

        plotting.plot_sweep(rows, summary, spec, args.plot)
    return 0


def _cmd_profile(args) -> int:
    config = load_config(args.config)
    profile = radius_profile(config, samples=args.samples)
    status = "stable"  # profile computation requires a stable cavity
    rows = [
        {"status": status, "z": z, "w00": w00, "w": w}
        for z, w00, w in profile
    ]
    _write_rows(["status", "z", "w00", "w"], rows, args.format, args.out)
    if args.plot:
        from . import plotting

        plotting.plot_profile(profile, breakpoints(config), args.plot)
    return 0


def _cmd_spectrum(args) -> int:
    config = load_config(args.config)
    if args.var:
        if len(args.var) != 1:
            raise ConfigError("spectrum takes a single --var phi=START:STOP:STEPS")
        name, start, stop, steps = _parse_var(args.var[0])
        if name != "phi":
            raise ConfigError("spectrum sweeps the phase variable 'phi' only")
        if steps < 2 or not start < stop:
            raise ConfigError("spectrum range must satisfy start < stop, steps >= 2")
    else:
        start, stop, steps = 0.0, 4.0 * math.pi, 2001
    spectrum = fp_spectrum(config, start, stop, steps)
    status = "stable" if stability(config).stable else "unstable"
    rows = [
        {"status": status, "phi": phi, "t_er": t_er, "r_er": r_er}
        for phi, t_er, r_er in spectrum
    ]
    _write_rows(["status", "phi", "t_er", "r_er"], rows, args.format, args.out)
    if args.plot:
        from . import plotting

        plotting.plot_spectrum(spectrum, args.plot)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csdr",
        description="Coupled spatially distributed resonator SLIPT simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_var: bool) -> None:
        p.add_argument("--config", metavar="PATH", help="flat key = value config file")
        p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
        p.add_argument("--format", choices=_FORMATS, default="csv")
        p.add_argument("--plot", metavar="PATH", help="render a figure alongside the output")
        if with_var:
            p.add_argument(
                "--var",
                action="append",
                metavar="NAME=START:STOP:STEPS",
                help="swept variable (repeatable)",
            )

    p_point = sub.add_parser("point", help="evaluate a single operating point")
    common(p_point, with_var=False)
    p_point.add_argument("--columns", metavar="GROUPS", help="comma-separated column groups")
    p_point.set_defaults(func=_cmd_point)

    p_sweep = sub.add_parser("sweep", help="run a 1-D or 2-D parameter sweep")
    common(p_sweep, with_var=True)
    p_sweep.add_argument("--columns", metavar="GROUPS", help="comma-separated column groups")
    p_sweep.add_argument("--summary-column", metavar="NAME", default=None)
    p_sweep.add_argument("--summary-out", metavar="PATH", help="write argmax rows here")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_profile = sub.add_parser("profile", help="beam radius along the optical axis")
    common(p_profile, with_var=False)
    p_profile.add_argument("--samples", type=int, default=2000)
    p_profile.set_defaults(func=_cmd_profile)

    p_spectrum = sub.add_parser("spectrum", help="Fabry-Perot comb over phase")
    common(p_spectrum, with_var=True)
    p_spectrum.set_defaults(func=_cmd_spectrum)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (UnstableCavityError, FixedPointDivergenceError, DegeneratePropagationError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
