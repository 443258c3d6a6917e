"""Steady-state power chain of the coupled resonator.

The transmitter-side cavity (M1..M2) holds the oscillating fundamental beam;
the free-space cavity (M2..M3) acts as a lossy Fabry-Perot whose resonant
reflectance boosts the effective output-mirror reflectivity.  A two-mirror
saturable-gain power balance then yields threshold, slope efficiencies and
the circulating/output powers, and a fixed-point iteration couples the
frequency-doubling efficiency back into the crystal transmittance.

Conventions baked in from the coating rules: every AR-coated lens/crystal
transmits T_ar^2 (per-surface T_ar), the gain medium end faces transmit T_ar
each, the modulators reflect R_hr at the fundamental and T_ar^2 * R_hr at the
second harmonic, and M1 reflects R_hr.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cavity import UnstableCavityError, breakpoints, mode_radius, stability
from .config import CsdrConfig

# powers below this (watts) are reported as exactly zero
POWER_FLOOR = 1e-12

FIXED_POINT_TOL = 1e-10
FIXED_POINT_MAX_ITER = 200


class FixedPointDivergenceError(Exception):
    """The doubling-efficiency fixed point failed to converge."""

    def __init__(self, iterations: int, last_delta: float):
        super().__init__(
            f"fixed point did not converge after {iterations} iterations "
            f"(last delta = {last_delta:.3e})"
        )
        self.iterations = iterations
        self.last_delta = last_delta


@dataclass(frozen=True)
class CoatingMap:
    """Per-component transmittances/reflectivities implied by the coatings.

    Primed quantities (``tp_*``, ``rp_*``) apply at the second-harmonic
    wavelength.
    """

    t_lens: float   # any AR-coated lens (L1..L6), also gain medium body
    t_gl: float
    t_gr: float
    t_sl: float
    t_sr: float
    r_e: float      # modulator reflectivity at the fundamental
    rp_e: float     # modulator reflectivity at the second harmonic
    r_m1: float
    r_m5: float
    tp_m1: float
    tp_m2: float
    tp_m3: float
    tp_m4: float
    tp_m5: float


def coating_map(config: CsdrConfig) -> CoatingMap:
    t2 = config.T_ar * config.T_ar
    return CoatingMap(
        t_lens=t2,
        t_gl=config.T_ar,
        t_gr=config.T_ar,
        t_sl=config.T_ar,
        t_sr=config.T_ar,
        r_e=config.R_hr,
        rp_e=t2 * config.R_hr,
        r_m1=config.R_M1,
        r_m5=config.R_hr,
        tp_m1=t2,
        tp_m2=t2,
        tp_m3=1.0 - config.Rp_M3,
        tp_m4=t2,
        tp_m5=t2,
    )


@dataclass(frozen=True)
class CavityLosses:
    t_2o: float      # gain right surface -> beyond M3 (through the F-P)
    t_2s: float      # gain left surface -> doubling crystal
    t_s: float       # crystal transmittance at the fundamental, (1-eta)*Tsl*Tsr
    t_diff: float
    t_ier: float     # single-pass internal transmittance of the free-space cavity
    t_air: float
    r_1: float       # equivalent reflectivity left of the gain medium
    r_2: float       # equivalent reflectivity right of the gain medium
    r_er_hat: float  # resonant F-P reflectance
    t_er_hat: float  # resonant F-P transmittance


@dataclass(frozen=True)
class PowerBreakdown:
    p_th: float
    eta_slop: float
    eta_slop_prime: float
    p_out: float
    p_nu: float              # fundamental power incident on the doubling crystal
    p_nu_ext_fwd: float      # forward travelling power in the free-space section
    p_nu_ext_bwd: float
    eta_shg: float
    p_2nu_minus: float
    p_2nu_plus: float
    iterations: int


def air_transmittance(config: CsdrConfig) -> float:
    return math.exp(-config.alpha_air * config.d_w)


def internal_transmittance(config: CsdrConfig) -> float:
    """Single-pass transmittance M2 -> M3: air gap, L3, L4 and both modulators."""
    coat = coating_map(config)
    return air_transmittance(config) * coat.t_lens * coat.t_lens * coat.r_e * coat.r_e


def _fp_denominator(r_m2: float, r_m3: float, t_ier: float, phi: float) -> float:
    return (
        1.0
        + r_m2 * r_m3 * t_ier * t_ier
        + 2.0 * t_ier * math.sqrt(r_m2 * r_m3) * math.cos(phi)
    )


def fp_transmittance(config: CsdrConfig, phi: float) -> float:
    """Equivalent transmissivity of the free-space cavity at phase phi."""
    t_ier = internal_transmittance(config)
    num = (1.0 - config.R_M2) * (1.0 - config.R_M3) * t_ier
    return num / _fp_denominator(config.R_M2, config.R_M3, t_ier, phi)


def fp_reflectance(config: CsdrConfig, phi: float) -> float:
    """Equivalent reflectivity of the free-space cavity at phase phi."""
    t_ier = internal_transmittance(config)
    num = (
        config.R_M2
        + config.R_M3 * t_ier * t_ier
        + 2.0 * t_ier * math.sqrt(config.R_M2 * config.R_M3) * math.cos(phi)
    )
    return num / _fp_denominator(config.R_M2, config.R_M3, t_ier, phi)


def resonant_fp(config: CsdrConfig) -> tuple[float, float]:
    """(t_er_hat, r_er_hat) at resonance, i.e. cos(phi) = 1.

    The oscillating mode self-selects the reflectance peak, so the power
    model always uses these closed forms.
    """
    t_ier = internal_transmittance(config)
    root = t_ier * math.sqrt(config.R_M2 * config.R_M3)
    denom = (1.0 + root) ** 2
    t_hat = (1.0 - config.R_M2) * (1.0 - config.R_M3) * t_ier / denom
    r_hat = (math.sqrt(config.R_M2) + t_ier * math.sqrt(config.R_M3)) ** 2 / denom
    return t_hat, r_hat


def diffraction_loss(config: CsdrConfig) -> float:
    """Single-pass aperture transmittance 1 - exp(-2 (a_g / w00(z_gl))^2)."""
    w_gain = mode_radius(config, breakpoints(config).z_gl)
    return 1.0 - math.exp(-2.0 * (config.a_g / w_gain) ** 2)


def _assemble_losses(
    config: CsdrConfig, t_diff: float, eta_shg: float
) -> CavityLosses:
    coat = coating_map(config)
    t_air = air_transmittance(config)
    t_ier = internal_transmittance(config)
    t_er_hat, r_er_hat = resonant_fp(config)
    t_s = (1.0 - eta_shg) * coat.t_sl * coat.t_sr
    r_1 = t_diff * coat.t_gl**2 * coat.t_lens**2 * t_s**2 * coat.r_m1
    r_2 = t_diff * coat.t_gr**2 * coat.t_lens**2 * r_er_hat
    t_2o = coat.t_gr * coat.t_lens * t_er_hat
    t_2s = coat.t_gl * coat.t_lens
    return CavityLosses(
        t_2o=t_2o, t_2s=t_2s, t_s=t_s, t_diff=t_diff, t_ier=t_ier,
        t_air=t_air, r_1=r_1, r_2=r_2, r_er_hat=r_er_hat, t_er_hat=t_er_hat,
    )


def cavity_losses(config: CsdrConfig, eta_shg: float = 0.0) -> CavityLosses:
    """All cascaded transmittances and equivalent reflectivities.

    ``eta_shg`` is the doubling efficiency folded into the crystal
    transmittance; the self-consistent value comes from
    :func:`solve_operating_point`.
    """
    return _assemble_losses(config, diffraction_loss(config), eta_shg)


def shg_gain_coefficient(config: CsdrConfig) -> float:
    """Coefficient k in eta_shg = k * P / (pi w_s^2) for single-pass doubling."""
    return (
        8.0 * math.pi**2 * config.d_eff**2 * config.l_s**2
        / (config.eps_0 * config.c * config.lambda_nu**2 * config.n_s**3)
    )


def _power_balance(config: CsdrConfig, losses: CavityLosses):
    """Threshold and slope efficiencies for the two travelling waves.

    Returns (p_th, eta_slop, eta_slop_prime, p_out, p_nu).  The pump-spot /
    aperture ratio w_g/a_g is taken as 1.
    """
    r_1, r_2 = losses.r_1, losses.r_2
    area = math.pi * config.a_g**2
    if r_2 <= 0.0:
        return math.inf, 0.0, 0.0, 0.0, 0.0
    geo = math.sqrt(r_1 * r_2)
    if geo >= 1.0:
        # perfectly lossless round trip: nothing couples out
        return 0.0, 0.0, 0.0, 0.0, 0.0
    p_th = area * config.I_s / config.eta_c * math.log(1.0 / geo)
    eta_slop = config.eta_c * losses.t_2o / (
        (1.0 + math.sqrt(r_2 / r_1)) * (1.0 - geo)
    )
    eta_slop_prime = config.eta_c * losses.t_2s / (
        (1.0 + math.sqrt(r_1 / r_2)) * (1.0 - geo)
    )
    surplus = max(config.P_in - p_th, 0.0)
    return p_th, eta_slop, eta_slop_prime, eta_slop * surplus, eta_slop_prime * surplus


def _floor(value: float) -> float:
    return 0.0 if value < POWER_FLOOR else value


def solve_operating_point(config: CsdrConfig) -> PowerBreakdown:
    """Self-consistent operating point for the configured pump power.

    The doubling efficiency and the fundamental power feeding the crystal
    depend on each other through the crystal transmittance, so iterate from
    eta = 0; the map is strongly contracting at realistic efficiencies.  If
    successive updates oscillate, a 0.5 damping factor is applied.
    """
    report = stability(config)
    if not report.stable:
        raise UnstableCavityError(
            f"cavity unstable: g1*g2* = {report.product:.6g}", reason="unstable"
        )
    bp = breakpoints(config)
    w_gain = mode_radius(config, bp.z_gl)
    t_diff = 1.0 - math.exp(-2.0 * (config.a_g / w_gain) ** 2)
    # doubling crystal sits against M1: beam spot there is the multimode radius
    w_s = (config.a_g / w_gain) * mode_radius(config, 0.0)
    gain = shg_gain_coefficient(config) / (math.pi * w_s**2)

    eta = 0.0
    prev_delta = 0.0
    alternations = 0
    iterations = 0
    converged = False
    for iterations in range(1, FIXED_POINT_MAX_ITER + 1):
        losses = _assemble_losses(config, t_diff, eta)
        _, _, _, _, p_nu = _power_balance(config, losses)
        delta = gain * p_nu - eta
        if prev_delta * delta < 0:
            alternations += 1
        else:
            alternations = 0
        step = 0.5 * delta if alternations >= 2 else delta
        eta += step
        prev_delta = delta
        if abs(delta) < FIXED_POINT_TOL:
            converged = True
            break
    if not converged:
        raise FixedPointDivergenceError(iterations, prev_delta)

    losses = _assemble_losses(config, t_diff, eta)
    p_th, eta_slop, eta_slop_prime, p_out, p_nu = _power_balance(config, losses)
    p_out = _floor(p_out)
    p_nu = _floor(p_nu)
    if p_out > 0.0 and config.R_M3 < 1.0:
        fwd = p_out / (1.0 - config.R_M3)
        bwd = config.R_M3 * fwd
    else:
        fwd = bwd = 0.0
    p_minus = _floor(eta * losses.t_s * p_nu)
    p_plus = _floor(eta * (1.0 - eta) * config.R_M1 * losses.t_s**2 * p_nu)
    return PowerBreakdown(
        p_th=p_th,
        eta_slop=eta_slop,
        eta_slop_prime=eta_slop_prime,
        p_out=p_out,
        p_nu=p_nu,
        p_nu_ext_fwd=_floor(fwd),
        p_nu_ext_bwd=_floor(bwd),
        eta_shg=eta,
        p_2nu_minus=p_minus,
        p_2nu_plus=p_plus,
        iterations=iterations,
    )


__all__ = [
    "CavityLosses",
    "CoatingMap",
    "FIXED_POINT_MAX_ITER",
    "FIXED_POINT_TOL",
    "FixedPointDivergenceError",
    "POWER_FLOOR",
    "PowerBreakdown",
    "air_transmittance",
    "cavity_losses",
    "coating_map",
    "diffraction_loss",
    "fp_reflectance",
    "fp_transmittance",
    "internal_transmittance",
    "resonant_fp",
    "shg_gain_coefficient",
    "solve_operating_point",
]
