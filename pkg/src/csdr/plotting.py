"""Figure rendering for sweep, profile and spectrum outputs.

Every CLI subcommand can drop a matplotlib figure next to its delimited
output via ``--plot``.  The CSV stays the primary artifact; these plots are
quick-look companions (power/rate curves, charging-power maps with the
ridge of per-row maxima, beam-radius envelopes, cavity combs).
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .sweep import SweepSpec

_AXIS_LABELS = {
    "d_w": "working distance d_w (m)",
    "d5": "d5 (m)",
    "a_g": "gain aperture radius a_g (m)",
    "R_M2": "R_M2",
    "R_M3": "R_M3",
    "Rp_M3": "R'_M3",
}

# columns worth co-plotting for each group when swept in 1-D
_GROUP_CURVES = {
    "stability": ("product",),
    "powers": ("p_out", "p_nu", "p_nu_ext_fwd"),
    "charging": ("p_chg",),
    "rates": ("r_b_down", "r_b_up"),
}


def _column(rows: Sequence[dict], name: str) -> np.ndarray:
    return np.array(
        [np.nan if row.get(name) is None else float(row[name]) for row in rows]
    )


def plot_sweep(rows, summary, spec: SweepSpec, path: str) -> None:
    if len(spec.variables) == 1:
        _plot_sweep_1d(rows, spec, path)
    else:
        _plot_sweep_2d(rows, summary, spec, path)


def _plot_sweep_1d(rows, spec: SweepSpec, path: str) -> None:
    name = spec.variables[0][0]
    x = _column(rows, name)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for group in spec.columns:
        for column in _GROUP_CURVES.get(group, ()):
            ax.plot(x, _column(rows, column), label=column)
    ax.set_xlabel(_AXIS_LABELS.get(name, name))
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _plot_sweep_2d(rows, summary, spec: SweepSpec, path: str) -> None:
    (name0, _, _, steps0), (name1, _, _, steps1) = spec.variables
    target = spec.resolved_summary_column()
    x = _column(rows, name0).reshape(steps0, steps1)
    y = _column(rows, name1).reshape(steps0, steps1)
    z = _column(rows, target).reshape(steps0, steps1)
    fig, ax = plt.subplots(figsize=(6.0, 4.6))
    mesh = ax.pcolormesh(x, y, z, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=target)
    ridge_x = _column(summary, name0)
    ridge_y = _column(summary, name1)
    ax.plot(ridge_x, ridge_y, "r-", lw=1.5, label=f"max {target}")
    ax.set_xlabel(_AXIS_LABELS.get(name0, name0))
    ax.set_ylabel(_AXIS_LABELS.get(name1, name1))
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_profile(profile, bp, path: str) -> None:
    z = np.array([p[0] for p in profile])
    w00 = np.array([p[1] for p in profile])
    w = np.array([p[2] for p in profile])
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(z, w00 * 1e3, label="w00(z)")
    ax.plot(z, w * 1e3, label="w(z)", alpha=0.7)
    for marker in (bp.z_L1, bp.z_L2, bp.z_ml, bp.z_L3, bp.z_L4):
        ax.axvline(marker, color="grey", lw=0.6, alpha=0.5)
    ax.set_xlabel("z (m)")
    ax.set_ylabel("beam radius (mm)")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_spectrum(spectrum, path: str) -> None:
    phi = np.array([s[0] for s in spectrum])
    t_er = np.array([s[1] for s in spectrum])
    r_er = np.array([s[2] for s in spectrum])
    fig, (ax_r, ax_t) = plt.subplots(2, 1, figsize=(6.0, 5.0), sharex=True)
    ax_r.plot(phi / np.pi, r_er)
    ax_r.set_ylabel("R_er")
    ax_r.grid(True, alpha=0.3)
    ax_t.plot(phi / np.pi, t_er)
    ax_t.set_ylabel("T_er")
    ax_t.set_xlabel("phase (units of pi)")
    ax_t.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
