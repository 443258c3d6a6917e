"""Duplex link budget over the second-harmonic carrier.

The downlink beam leaves the doubling crystal rightward, crosses the whole
optical train and the partially reflective M3 (transmissivity 1 - Rp_M3 at
the harmonic), and lands on the receiver photodiode.  The uplink reuses the
M3-reflected portion back through the train to the transmitter photodiode,
which additionally collects the unused leftward harmonic beam as shot-noise
background.  Rates use the IM/DD capacity lower bound
R_b = 1/2 log2(1 + (rho P)^2 / (2 pi e sigma_n^2)).
"""

from __future__ import annotations

import math

from dataclasses import dataclass

from .config import CsdrConfig
from .power import PowerBreakdown, air_transmittance, coating_map


@dataclass(frozen=True)
class LinkBudget:
    p_down: float
    p_up: float
    p_res: float   # leftward harmonic residue reaching the transmitter PD
    c1: float
    c2: float
    sigma_n_sq_up: float
    sigma_n_sq_down: float
    r_b_up: float
    r_b_down: float


def downlink_power(config: CsdrConfig, p_2nu_plus: float) -> float:
    """Harmonic power reaching the receiver photodiode PD2."""
    if p_2nu_plus < 0:
        raise ValueError(f"p_2nu_plus must be >= 0, got {p_2nu_plus}")
    coat = coating_map(config)
    t_air = air_transmittance(config)
    t_g = coat.t_lens
    return (
        config.T_pd2 * coat.tp_m5 * coat.t_lens * coat.tp_m3 * coat.t_lens
        * coat.rp_e * t_air * coat.rp_e * coat.t_lens * coat.tp_m2
        * coat.t_lens * t_g * coat.t_lens * p_2nu_plus
    )


def path_transmittances(config: CsdrConfig, t_s: float) -> tuple[float, float]:
    """(C1, C2): M1->M3 return chain and the back-reflection chain to PD1.

    ``t_s`` is the crystal transmittance from the operating point.
    """
    coat = coating_map(config)
    t_air = air_transmittance(config)
    t_g = coat.t_lens
    c1 = (
        config.Rp_M3 * coat.t_lens * coat.rp_e * t_air * coat.rp_e
        * coat.t_lens * coat.tp_m2 * coat.t_lens * t_g * coat.t_lens
    )
    c2 = (
        config.T_pd1 * coat.tp_m4 * coat.t_lens * coat.tp_m1 * t_s
        * coat.t_lens * t_g * coat.t_lens * coat.tp_m2 * coat.t_lens
        * coat.t_lens * coat.rp_e * t_air * coat.rp_e
    )
    return c1, c2


def residual_power(config: CsdrConfig, p_2nu_minus: float) -> float:
    """Unused leftward harmonic power collected by the transmitter PD."""
    coat = coating_map(config)
    return config.T_pd1 * coat.tp_m4 * coat.t_lens * coat.tp_m1 * p_2nu_minus


def uplink_power(
    config: CsdrConfig,
    p_2nu_plus: float,
    p_2nu_minus: float,
    eta_shg: float = 0.0,
) -> tuple[float, float]:
    """(p_up, p_res) at the transmitter photodiode PD1."""
    if p_2nu_plus < 0 or p_2nu_minus < 0:
        raise ValueError("second-harmonic powers must be >= 0")
    coat = coating_map(config)
    t_s = (1.0 - eta_shg) * coat.t_sl * coat.t_sr
    c1, c2 = path_transmittances(config, t_s)
    return c1 * c2 * p_2nu_plus, residual_power(config, p_2nu_minus)


def noise_variance(config: CsdrConfig, p_pd_total: float) -> float:
    """Receiver current noise: shot (signal + background) plus thermal."""
    if p_pd_total < 0:
        raise ValueError(f"p_pd_total must be >= 0, got {p_pd_total}")
    shot = 2.0 * config.q_e * (config.rho_pd * p_pd_total + config.I_bk) * config.B_r
    thermal = 4.0 * config.k_B * config.T_t * config.B_r / config.R_IL
    return shot + thermal


def rate(config: CsdrConfig, p_signal: float, sigma_n_sq: float) -> float:
    """Achievable spectral efficiency in bit/s/Hz (IM/DD lower bound)."""
    if p_signal < 0 or sigma_n_sq < 0:
        raise ValueError("signal power and noise variance must be >= 0")
    if p_signal == 0:
        return 0.0
    snr = (config.rho_pd * p_signal) ** 2 / (2.0 * math.pi * math.e * sigma_n_sq)
    return 0.5 * math.log2(1.0 + snr)


def link_budget(config: CsdrConfig, powers: PowerBreakdown) -> LinkBudget:
    """Full duplex budget for an already-solved operating point."""
    coat = coating_map(config)
    t_s = (1.0 - powers.eta_shg) * coat.t_sl * coat.t_sr
    c1, c2 = path_transmittances(config, t_s)
    p_down = downlink_power(config, powers.p_2nu_plus)
    p_up = c1 * c2 * powers.p_2nu_plus
    p_res = residual_power(config, powers.p_2nu_minus)
    sigma_down = noise_variance(config, p_down)
    sigma_up = noise_variance(config, p_up + p_res)
    return LinkBudget(
        p_down=p_down,
        p_up=p_up,
        p_res=p_res,
        c1=c1,
        c2=c2,
        sigma_n_sq_up=sigma_up,
        sigma_n_sq_down=sigma_down,
        r_b_up=rate(config, p_up, sigma_up),
        r_b_down=rate(config, p_down, sigma_down),
    )


__all__ = [
    "LinkBudget",
    "downlink_power",
    "link_budget",
    "noise_variance",
    "path_transmittances",
    "rate",
    "residual_power",
    "uplink_power",
]
