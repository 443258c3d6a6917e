"""Photovoltaic harvesting: photocurrent, single-diode circuit, and the
maximum-power operating point.

The panel follows the single-diode model with series and shunt resistance:

    I_chg = I_pv - I_0 (exp(V_d / (N_s n_d V_t)) - 1) - V_d / R_sh
    V_d   = I_chg (R_PL + R_s)

The diode current is strictly decreasing in V_d, so both the load operating
point and the open-circuit voltage come from bracketed root finding; the
maximum power point is a golden-section search over the diode voltage (a
monotone reparametrisation of the charging voltage).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .config import CsdrConfig
from .power import coating_map

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class PvOperatingPoint:
    i_pv: float
    v_chg: float
    i_chg: float
    p_chg: float
    v_oc: float
    r_pl: float  # load resistance realising this point (inf at open circuit)


def thermal_voltage(config: CsdrConfig) -> float:
    return config.k_B * config.T_t / config.q_e


def photocurrent(config: CsdrConfig, p_out: float) -> float:
    """Photocurrent generated from the beam power released at M3."""
    if p_out < 0:
        raise ValueError(f"optical power must be >= 0, got {p_out}")
    coat = coating_map(config)
    return config.rho_pv * config.T_pv * coat.t_lens * coat.r_m5 * p_out


def _diode_current(config: CsdrConfig, i_pv: float, v_d: float) -> float:
    v_scale = config.N_s * config.n_d * thermal_voltage(config)
    return i_pv - config.I_0 * math.expm1(v_d / v_scale) - v_d / config.R_sh


def _v_d_upper_bound(config: CsdrConfig, i_pv: float) -> float:
    # at this voltage the diode term alone equals i_pv, so the net current
    # is already negative
    return config.N_s * config.n_d * thermal_voltage(config) * math.log1p(i_pv / config.I_0)


def open_circuit_voltage(config: CsdrConfig, i_pv: float) -> float:
    """Voltage at which the net panel current vanishes."""
    if i_pv <= 0:
        return 0.0
    hi = _v_d_upper_bound(config, i_pv)
    return brentq(lambda v: _diode_current(config, i_pv, v), 0.0, hi, xtol=1e-15)


def solve_iv(config: CsdrConfig, i_pv: float, r_load: float) -> PvOperatingPoint:
    """Operating point of the panel loaded with ``r_load``.

    Solves f(V_d) = I_diode(V_d) - V_d / (r_load + R_s) = 0; f is strictly
    decreasing with f(0) = i_pv >= 0, so the root is unique and bracketed.
    """
    if i_pv < 0:
        raise ValueError(f"photocurrent must be >= 0, got {i_pv}")
    if r_load <= 0:
        raise ValueError(f"load resistance must be > 0, got {r_load}")
    v_oc = open_circuit_voltage(config, i_pv)
    if i_pv == 0:
        return PvOperatingPoint(0.0, 0.0, 0.0, 0.0, 0.0, r_load)
    total_r = r_load + config.R_s
    v_d = brentq(
        lambda v: _diode_current(config, i_pv, v) - v / total_r,
        0.0,
        _v_d_upper_bound(config, i_pv),
        xtol=1e-15,
    )
    i_chg = v_d / total_r
    v_chg = i_chg * r_load
    return PvOperatingPoint(i_pv, v_chg, i_chg, v_chg * i_chg, v_oc, r_load)


def mppt(config: CsdrConfig, i_pv: float) -> PvOperatingPoint:
    """Operating point maximising the extracted power.

    Golden-section search on the diode voltage over [0, V_oc']; the power
    P(V_d) = (V_d - I_chg R_s) I_chg is unimodal for physical parameters.
    """
    if i_pv < 0:
        raise ValueError(f"photocurrent must be >= 0, got {i_pv}")
    if i_pv == 0:
        return PvOperatingPoint(0.0, 0.0, 0.0, 0.0, 0.0, math.inf)
    v_oc = open_circuit_voltage(config, i_pv)

    def neg_power(v_d: float) -> float:
        i_chg = _diode_current(config, i_pv, v_d)
        return -(v_d - i_chg * config.R_s) * i_chg

    lo, hi = 0.0, v_oc
    a = hi - _INV_PHI * (hi - lo)
    b = lo + _INV_PHI * (hi - lo)
    f_a, f_b = neg_power(a), neg_power(b)
    while hi - lo > 1e-13:
        if f_a < f_b:
            hi, b, f_b = b, a, f_a
            a = hi - _INV_PHI * (hi - lo)
            f_a = neg_power(a)
        else:
            lo, a, f_a = a, b, f_b
            b = lo + _INV_PHI * (hi - lo)
            f_b = neg_power(b)
    v_d = 0.5 * (lo + hi)
    i_chg = _diode_current(config, i_pv, v_d)
    v_chg = v_d - i_chg * config.R_s
    r_pl = v_chg / i_chg if i_chg > 0 else math.inf
    return PvOperatingPoint(i_pv, v_chg, i_chg, v_chg * i_chg, v_oc, r_pl)


__all__ = [
    "PvOperatingPoint",
    "mppt",
    "open_circuit_voltage",
    "photocurrent",
    "solve_iv",
    "thermal_voltage",
]
