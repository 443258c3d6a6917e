"""Single-point evaluation, 1-D/2-D parameter sweeps, and tabular output.

Sweep results are plain row dicts with a leading ``status`` column; unstable
grid points keep their stability numbers but leave every downstream physics
column empty (None), never NaN.  Emission is fully deterministic: fixed
column order, lexicographic grid order, 9-significant-digit floats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .cavity import (
    StabilityReport,
    UnstableCavityError,
    breakpoints,
    q_at_m1,
    mode_radius,
    radius_from_q,
    stability,
    transfer_to,
    transform_q,
)
from .config import CANONICAL_KEYS, ConfigError, CsdrConfig
from .harvest import PvOperatingPoint, mppt, photocurrent
from .link import LinkBudget, link_budget
from .power import (
    CavityLosses,
    PowerBreakdown,
    cavity_losses,
    fp_reflectance,
    fp_transmittance,
    solve_operating_point,
)

COLUMN_GROUPS: dict[str, tuple[str, ...]] = {
    "stability": ("g1_star", "g2_star", "l_star", "product", "stable"),
    "powers": (
        "p_th", "eta_slop", "eta_slop_prime", "p_out", "p_nu",
        "p_nu_ext_fwd", "p_nu_ext_bwd", "eta_shg", "p_2nu_minus", "p_2nu_plus",
    ),
    "charging": ("i_pv", "v_chg", "i_chg", "p_chg", "v_oc", "r_pl"),
    "rates": (
        "p_down", "p_up", "p_res", "c1", "c2",
        "sigma_n_sq_up", "sigma_n_sq_down", "r_b_up", "r_b_down",
    ),
}

#: column used for sweep summaries when none is requested explicitly
GROUP_HEADLINE = {
    "stability": "product",
    "powers": "p_out",
    "charging": "p_chg",
    "rates": "r_b_down",
}


@dataclass(frozen=True)
class PointReport:
    """Everything computable at one operating point."""

    status: str  # "stable" | "unstable"
    stability: StabilityReport
    losses: CavityLosses | None
    powers: PowerBreakdown | None
    pv: PvOperatingPoint | None
    link: LinkBudget | None


@dataclass(frozen=True)
class SweepSpec:
    """Sweep definition: up to two (name, start, stop, steps) variables."""

    variables: tuple[tuple[str, float, float, int], ...]
    columns: tuple[str, ...] = ("stability", "powers", "charging", "rates")
    summary_column: str | None = None

    def __post_init__(self) -> None:
        if not 1 <= len(self.variables) <= 2:
            raise ConfigError("a sweep takes one or two variables")
        for name, start, stop, steps in self.variables:
            if name not in CANONICAL_KEYS:
                raise ConfigError(f"unknown sweep variable {name!r}")
            if steps < 2:
                raise ConfigError(f"{name}: steps must be >= 2, got {steps}")
            if not start < stop:
                raise ConfigError(f"{name}: start must be < stop ({start} .. {stop})")
        for group in self.columns:
            if group not in COLUMN_GROUPS:
                raise ConfigError(f"unknown column group {group!r}")
        if self.summary_column is not None and self.summary_column not in self.all_columns():
            raise ConfigError(f"summary column {self.summary_column!r} not among outputs")

    def all_columns(self) -> list[str]:
        cols: list[str] = []
        for group in self.columns:
            cols.extend(COLUMN_GROUPS[group])
        return cols

    def resolved_summary_column(self) -> str:
        if self.summary_column is not None:
            return self.summary_column
        return GROUP_HEADLINE[self.columns[-1]]


def run_point(config: CsdrConfig) -> PointReport:
    """stability -> losses/fixed point -> powers -> harvesting -> link."""
    report = stability(config)
    if not report.stable:
        return PointReport("unstable", report, None, None, None, None)
    try:
        powers = solve_operating_point(config)
    except UnstableCavityError:
        # stable flag can hold while the mode radius is undefined (confocal)
        return PointReport("unstable", report, None, None, None, None)
    losses = cavity_losses(config, powers.eta_shg)
    pv = mppt(config, photocurrent(config, powers.p_out))
    link = link_budget(config, powers)
    return PointReport("stable", report, losses, powers, pv, link)


_SOURCES = {
    "stability": "stability",
    "powers": "powers",
    "charging": "pv",
    "rates": "link",
}


def report_row(report: PointReport, groups: Sequence[str]) -> dict[str, object]:
    """Flatten a point report into a {column: value} dict."""
    row: dict[str, object] = {"status": report.status}
    for group in groups:
        source = getattr(report, _SOURCES[group])
        for column in COLUMN_GROUPS[group]:
            row[column] = None if source is None else getattr(source, column)
    return row


def _grid(start: float, stop: float, steps: int) -> np.ndarray:
    return np.linspace(start, stop, steps)


def run_sweep(
    config: CsdrConfig, spec: SweepSpec
) -> tuple[list[dict[str, object]], list[dict[str, object]]]:
    """Evaluate the grid; returns (rows, summary).

    Rows follow lexicographic grid order (first variable outermost).  The
    summary holds the argmax row of the summary column: one row for a 1-D
    sweep, one per second-variable value for a 2-D sweep (e.g. the best
    first-variable setting for each second-variable setting).
    """
    names = [v[0] for v in spec.variables]
    grids = [_grid(v[1], v[2], v[3]) for v in spec.variables]
    target = spec.resolved_summary_column()

    rows: list[dict[str, object]] = []
    for value0 in grids[0]:
        for rest in grids[1] if len(grids) > 1 else [None]:
            overrides = {names[0]: float(value0)}
            if rest is not None:
                overrides[names[1]] = float(rest)
            point = run_point(config.replace(**overrides))
            row: dict[str, object] = {"status": point.status}
            for name in names:
                row[name] = overrides[name]
            row.update(
                (k, v) for k, v in report_row(point, spec.columns).items() if k != "status"
            )
            rows.append(row)

    def _key(row: dict[str, object]) -> float:
        value = row.get(target)
        return -math.inf if value is None or isinstance(value, bool) else float(value)

    summary: list[dict[str, object]] = []
    if len(names) == 1:
        summary.append(max(rows, key=_key))
    else:
        steps1 = spec.variables[1][3]
        for j in range(steps1):
            group = rows[j::steps1]
            summary.append(max(group, key=_key))
    return rows, summary


def sweep_header(spec: SweepSpec) -> list[str]:
    return ["status"] + [v[0] for v in spec.variables] + spec.all_columns()


def radius_profile(
    config: CsdrConfig, samples: int = 2000, zs: Iterable[float] | None = None
) -> list[tuple[float, float, float]]:
    """(z, w00(z), w(z)) at the component surfaces plus a uniform grid."""
    bp = breakpoints(config)
    if zs is None:
        grid = np.linspace(0.0, bp.z_M3, samples)
        points = np.unique(np.concatenate([grid, np.array(bp_values(bp))]))
    else:
        points = np.unique(np.fromiter(zs, dtype=float))
        if points.size and (points[0] < 0 or points[-1] > bp.z_M3):
            raise ValueError("profile positions outside the optical path")
    q0 = q_at_m1(config).q
    factor = config.a_g / mode_radius(config, bp.z_gl)
    profile = []
    for z in points:
        q = transform_q(transfer_to(config, float(z)), q0)
        w00 = radius_from_q(q, config.lambda_nu)
        profile.append((float(z), w00, factor * w00))
    return profile


def bp_values(bp) -> list[float]:
    return [bp.z_sr, bp.z_L1, bp.z_gl, bp.z_gr, bp.z_L2,
            bp.z_ml, bp.z_mr, bp.z_L3, bp.z_L4, bp.z_M3]


def fp_spectrum(
    config: CsdrConfig, phi_start: float = 0.0, phi_stop: float = 4.0 * math.pi,
    steps: int = 2001,
) -> list[tuple[float, float, float]]:
    """(phi, T_er, R_er) rows across a phase interval."""
    phis = np.linspace(phi_start, phi_stop, steps)
    return [
        (float(p), fp_transmittance(config, float(p)), fp_reflectance(config, float(p)))
        for p in phis
    ]


# ---------------------------------------------------------------------------
# deterministic emission

def format_cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            return ""
        return f"{value:.9g}"
    return str(value)


def rows_to_csv(header: Sequence[str], rows: Iterable[dict[str, object]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_cell(row.get(col)) for col in header))
    return "\n".join(lines) + "\n"


def _json_safe(value: object) -> object:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def rows_to_json(header: Sequence[str], rows: Iterable[dict[str, object]]) -> str:
    payload = [{col: _json_safe(row.get(col)) for col in header} for row in rows]
    return json.dumps(payload, indent=2) + "\n"


__all__ = [
    "COLUMN_GROUPS",
    "GROUP_HEADLINE",
    "PointReport",
    "SweepSpec",
    "fp_spectrum",
    "format_cell",
    "radius_profile",
    "report_row",
    "rows_to_csv",
    "rows_to_json",
    "run_point",
    "run_sweep",
    "sweep_header",
]
