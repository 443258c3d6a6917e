import math

import numpy as np
import pytest

from csdr.cavity import UnstableCavityError, breakpoints, mode_radius
from csdr.config import CsdrConfig
from csdr.power import (
    FIXED_POINT_TOL,
    cavity_losses,
    diffraction_loss,
    fp_reflectance,
    fp_transmittance,
    internal_transmittance,
    resonant_fp,
    shg_gain_coefficient,
    solve_operating_point,
)


def cfg(**over) -> CsdrConfig:
    return CsdrConfig(**over)


def lossless(**over) -> CsdrConfig:
    """Coatings and air made perfect so T_ier = 1."""
    base = dict(T_ar=1.0, R_hr=1.0, alpha_air=0.0)
    base.update(over)
    return CsdrConfig(**base)


class TestFabryPerot:
    def test_no_mirrors_lossless_transmits_everything(self):
        config = lossless(R_M2=0.0, R_M3=0.0)
        for phi in (0.0, 0.7, math.pi, 5.0):
            assert fp_transmittance(config, phi) == pytest.approx(1.0, abs=1e-15)

    def test_lossless_energy_conservation(self):
        config = lossless(R_M2=0.5, R_M3=0.5)
        assert internal_transmittance(config) == 1.0
        for phi in np.linspace(0.0, 4.0 * math.pi, 1000):
            total = fp_transmittance(config, float(phi)) + fp_reflectance(config, float(phi))
            assert abs(total - 1.0) < 1e-12

    def test_comb_extrema_locations(self):
        config = cfg(d_w=1.0)
        phi = np.linspace(0.0, 4.0 * math.pi, 40001)
        t = np.array([fp_transmittance(config, float(p)) for p in phi])
        # denominator is minimal at cos(phi) = -1, so transmission peaks there
        assert abs(phi[int(np.argmax(t))] - math.pi) < 1e-3
        assert phi[int(np.argmin(t))] < 1e-3
        r = np.array([fp_reflectance(config, float(p)) for p in phi])
        assert phi[int(np.argmax(r))] < 1e-3

    def test_periodicity(self):
        config = cfg(d_w=1.0)
        for phi in (0.1, 1.3, 2.9):
            assert fp_transmittance(config, phi) == pytest.approx(
                fp_transmittance(config, phi + 2.0 * math.pi), abs=1e-12
            )
            assert fp_reflectance(config, phi) == pytest.approx(
                fp_reflectance(config, phi + 2.0 * math.pi), abs=1e-12
            )

    def test_perfect_front_mirror_reflects_everything(self):
        config = cfg(R_M2=1.0, R_M3=0.3)
        for phi in (0.0, 1.0, math.pi):
            assert fp_reflectance(config, phi) == pytest.approx(1.0, rel=1e-12)

    def test_open_front_mirror_single_round_trip(self):
        config = cfg(R_M2=0.0, R_M3=0.3, d_w=1.0)
        t_ier = internal_transmittance(config)
        assert fp_reflectance(config, 0.7) == pytest.approx(t_ier**2 * 0.3, rel=1e-12)

    def test_resonant_values_match_phi_zero(self):
        config = cfg(R_M2=0.72, R_M3=0.1, d_w=1.0)
        t_hat, r_hat = resonant_fp(config)
        assert t_hat == pytest.approx(fp_transmittance(config, 0.0), abs=1e-14)
        assert r_hat == pytest.approx(fp_reflectance(config, 0.0), abs=1e-14)

    def test_resonant_lossless_open_cavity(self):
        t_hat, r_hat = resonant_fp(lossless(R_M2=0.0, R_M3=0.0))
        assert (t_hat, r_hat) == (1.0, 0.0)

    def test_resonance_boosts_output_mirror_reflectivity(self):
        config = cfg(d_w=1.0)
        _, r_hat = resonant_fp(config)
        assert r_hat > config.R_M3


class TestDiffractionLoss:
    def test_wide_aperture_limit(self):
        config = cfg(d_w=1.0)
        w_gl = mode_radius(config, breakpoints(config).z_gl)
        wide = config.replace(a_g=4.0 * w_gl)
        assert diffraction_loss(wide) > 1.0 - 1e-13

    def test_aperture_equal_to_mode(self):
        config = cfg(d_w=1.0)
        w_gl = mode_radius(config, breakpoints(config).z_gl)
        matched = config.replace(a_g=w_gl)
        assert diffraction_loss(matched) == pytest.approx(1.0 - math.exp(-2.0), rel=1e-12)

    def test_near_unity_at_short_range_and_falling_near_margin(self):
        t_short = diffraction_loss(cfg(d_w=1.0))
        t_mid = diffraction_loss(cfg(d_w=6.0))
        t_far = diffraction_loss(cfg(d_w=9.5))
        assert t_short > 0.999
        assert t_short > t_mid > t_far

    def test_requires_stable_cavity(self):
        with pytest.raises(UnstableCavityError):
            diffraction_loss(cfg(d_w=11.0))


class TestCavityLosses:
    def test_lossless_limit_reflectivities_reach_one(self):
        # R_M2 = 1 pins the resonant reflectance at 1 regardless of R_M3;
        # a huge aperture drives the diffraction factor to exactly 1.
        config = lossless(R_M2=1.0, d_w=1.0)
        w_gl = mode_radius(config, breakpoints(config).z_gl)
        config = config.replace(a_g=10.0 * w_gl)
        losses = cavity_losses(config, eta_shg=0.0)
        assert losses.r_1 == pytest.approx(1.0, abs=1e-14)
        assert losses.r_2 == pytest.approx(1.0, abs=1e-14)

    def test_default_fields_inside_unit_interval(self):
        losses = cavity_losses(cfg(d_w=1.0), eta_shg=0.0)
        for name in ("t_2o", "t_2s", "t_s", "t_diff", "t_ier", "t_air",
                     "r_1", "r_2", "r_er_hat", "t_er_hat"):
            value = getattr(losses, name)
            assert 0.0 < value < 1.0, name

    def test_r1_bounded_by_m1_reflectivity(self):
        config = cfg(d_w=1.0)
        assert cavity_losses(config).r_1 <= config.R_M1

    def test_air_transmittance_definition(self):
        config = cfg(d_w=2.5)
        assert cavity_losses(config).t_air == pytest.approx(
            math.exp(-config.alpha_air * 2.5), rel=1e-15
        )

    def test_r2_monotone_in_front_mirror_reflectivity(self):
        values = [
            cavity_losses(cfg(d_w=1.0, R_M2=r2)).r_2
            for r2 in np.linspace(0.05, 0.95, 19)
        ]
        assert all(b > a for a, b in zip(values, values[1:]))


def independent_operating_point(config: CsdrConfig):
    """Scalar re-derivation of the power chain used as a cross-check.

    Written deliberately step-by-step from the closed forms rather than by
    calling the production helpers.
    """
    t2 = config.T_ar**2
    w_gl = mode_radius(config, breakpoints(config).z_gl)
    t_diff = 1.0 - math.exp(-2.0 * (config.a_g / w_gl) ** 2)
    w_s = (config.a_g / w_gl) * mode_radius(config, 0.0)
    t_air = math.exp(-config.alpha_air * config.d_w)
    t_ier = t_air * t2 * t2 * config.R_hr**2
    root = t_ier * math.sqrt(config.R_M2 * config.R_M3)
    r_hat = (math.sqrt(config.R_M2) + t_ier * math.sqrt(config.R_M3)) ** 2 / (1 + root) ** 2
    t_hat = (1 - config.R_M2) * (1 - config.R_M3) * t_ier / (1 + root) ** 2
    k_shg = (8 * math.pi**2 * config.d_eff**2 * config.l_s**2
             / (config.eps_0 * config.c * config.lambda_nu**2 * config.n_s**3))
    eta = 0.0
    for _ in range(200):
        t_s = (1 - eta) * t2
        r_1 = t_diff * config.T_ar**2 * t2**2 * t_s**2 * config.R_hr
        r_2 = t_diff * config.T_ar**2 * t2**2 * r_hat
        geo = math.sqrt(r_1 * r_2)
        p_th = math.pi * config.a_g**2 * config.I_s / config.eta_c * math.log(1 / geo)
        slope_p = config.eta_c * (config.T_ar * t2) / ((1 + math.sqrt(r_1 / r_2)) * (1 - geo))
        p_nu = max(slope_p * (config.P_in - p_th), 0.0)
        eta_new = k_shg * p_nu / (math.pi * w_s**2)
        if abs(eta_new - eta) < 1e-14:
            eta = eta_new
            break
        eta = eta_new
    t_s = (1 - eta) * t2
    r_1 = t_diff * config.T_ar**2 * t2**2 * t_s**2 * config.R_hr
    r_2 = t_diff * config.T_ar**2 * t2**2 * r_hat
    geo = math.sqrt(r_1 * r_2)
    p_th = math.pi * config.a_g**2 * config.I_s / config.eta_c * math.log(1 / geo)
    slope = config.eta_c * (config.T_ar * t2 * t_hat) / ((1 + math.sqrt(r_2 / r_1)) * (1 - geo))
    p_out = max(slope * (config.P_in - p_th), 0.0)
    slope_p = config.eta_c * (config.T_ar * t2) / ((1 + math.sqrt(r_1 / r_2)) * (1 - geo))
    p_nu = max(slope_p * (config.P_in - p_th), 0.0)
    return p_th, p_out, p_nu, eta


class TestOperatingPoint:
    def test_matches_independent_scalar_rederivation(self):
        config = cfg(d_w=1.0)
        expected_th, expected_out, expected_nu, expected_eta = independent_operating_point(config)
        got = solve_operating_point(config)
        assert got.p_th == pytest.approx(expected_th, rel=1e-9)
        assert got.p_out == pytest.approx(expected_out, rel=1e-9)
        assert got.p_nu == pytest.approx(expected_nu, rel=1e-9)
        assert got.eta_shg == pytest.approx(expected_eta, rel=1e-6)

    def test_below_threshold_clamps_everything(self):
        config = cfg(d_w=1.0, P_in=1.0)
        got = solve_operating_point(config)
        assert got.p_th > 1.0
        assert got.p_out == 0.0
        assert got.p_nu == 0.0
        assert got.p_2nu_minus == 0.0 and got.p_2nu_plus == 0.0
        assert got.p_nu_ext_fwd == 0.0 and got.p_nu_ext_bwd == 0.0

    def test_free_space_powers_follow_output_mirror_split(self):
        config = cfg(d_w=1.0, R_M3=0.1)
        got = solve_operating_point(config)
        assert got.p_nu_ext_fwd == pytest.approx(got.p_out / 0.9, rel=1e-12)
        assert got.p_nu_ext_bwd == pytest.approx(0.1 * got.p_nu_ext_fwd, rel=1e-12)
        # a 10 W output would put 11.1 W forward and 1.1 W backward in free space
        scale = 10.0 / got.p_out
        assert got.p_nu_ext_fwd * scale == pytest.approx(11.1, rel=0.02)
        assert got.p_nu_ext_bwd * scale == pytest.approx(1.1, rel=0.02)

    def test_fixed_point_converges_quickly_and_consistently(self):
        config = cfg(d_w=6.0)
        got = solve_operating_point(config)
        assert got.iterations < 50
        assert 0.0 <= got.eta_shg < 1.0
        w_gl = mode_radius(config, breakpoints(config).z_gl)
        w_s = (config.a_g / w_gl) * mode_radius(config, 0.0)
        implied = shg_gain_coefficient(config) * got.p_nu / (math.pi * w_s**2)
        assert got.eta_shg == pytest.approx(implied, abs=10 * FIXED_POINT_TOL)

    def test_second_harmonic_pair_ordering(self):
        got = solve_operating_point(cfg(d_w=6.0))
        assert 0.0 < got.p_2nu_plus <= got.p_2nu_minus

    def test_output_power_flat_then_decaying(self):
        distances = np.linspace(0.2, 9.9, 60)
        p = [solve_operating_point(cfg(d_w=float(d))).p_out for d in distances]
        assert p[0] > 10.0
        # the curve never rises and eventually hits zero inside the stable range
        assert all(b <= a + 1e-9 for a, b in zip(p, p[1:]))
        assert p[-1] == 0.0

    def test_smaller_aperture_raises_power_at_short_range_and_dies_sooner(self):
        p_small_short = solve_operating_point(cfg(d_w=1.0, a_g=1.1e-3)).p_out
        p_large_short = solve_operating_point(cfg(d_w=1.0, a_g=1.4e-3)).p_out
        p_small_far = solve_operating_point(cfg(d_w=6.0, a_g=1.1e-3)).p_out
        p_large_far = solve_operating_point(cfg(d_w=6.0, a_g=1.4e-3)).p_out
        assert p_small_short > p_large_short
        assert p_small_far < p_large_far

    def test_unstable_cavity_rejected(self):
        with pytest.raises(UnstableCavityError):
            solve_operating_point(cfg(d_w=11.0))
