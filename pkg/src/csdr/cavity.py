"""Cavity geometry: single-pass matrix, stability, and Gaussian beam radii.

The single-pass matrix M1 -> M3 is the ordered product of the fourteen
elementary matrices along the axis (crystal slab, gaps, lenses, gain slab,
mirror substrate).  Its diagonal elements act as the stability parameters
g1* = A, g2* = D with equivalent length L* = B; the resonator is stable for
0 < g1*g2* < 1 or in the confocal special case g1* = g2* = 0.

Beam radii come from the complex qparameter launched at M1,
q(0) = j pi w00(0)^2 / lambda, transformed by the partial transfer matrix
M_t(z) via the ABCD law q -> (A q + B)/(C q + D).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import CsdrConfig
from .matrices import IDENTITY, RayMatrix, compose, slab, thin_lens

# |g1*| and |g2*| below this count as the confocal special case
CONFOCAL_TOL = 1e-9


class UnstableCavityError(Exception):
    """Beam-radius evaluation requested outside the stable regime.

    ``reason`` is "unstable" (stability criterion fails) or "radicand"
    (criterion holds but the waist expression has no real solution, e.g. at
    the confocal point).
    """

    def __init__(self, message: str, reason: str = "unstable"):
        super().__init__(message)
        self.reason = reason


class DegeneratePropagationError(Exception):
    """q-parameter transform hit a vanishing denominator."""


@dataclass(frozen=True)
class StabilityReport:
    g1_star: float
    g2_star: float
    l_star: float
    product: float
    stable: bool


@dataclass(frozen=True)
class BeamState:
    """Complex beam parameter at axial position z (M1 sits at z = 0)."""

    q: complex
    z: float
    wavelength: float


@dataclass(frozen=True)
class Breakpoints:
    """Axial positions of the component surfaces (geometric path length)."""

    z_sr: float   # right surface of the frequency-doubling crystal
    z_L1: float
    z_gl: float   # left surface of the gain medium
    z_gr: float
    z_L2: float
    z_ml: float   # left surface of mirror M2
    z_mr: float
    z_L3: float
    z_L4: float
    z_M3: float


def breakpoints(config: CsdrConfig) -> Breakpoints:
    z_sr = config.l_s
    z_L1 = z_sr + config.d1
    z_gl = z_L1 + config.d2
    z_gr = z_gl + config.l_g
    z_L2 = z_gr + config.d3
    z_ml = z_L2 + config.d4
    z_mr = z_ml + config.l_m
    z_L3 = z_mr + config.d5
    z_L4 = z_L3 + config.d_w
    z_M3 = z_L4 + config.d6
    return Breakpoints(z_sr, z_L1, z_gl, z_gr, z_L2, z_ml, z_mr, z_L3, z_L4, z_M3)


def single_pass_matrix(config: CsdrConfig) -> RayMatrix:
    """Ray-transfer matrix for one pass M1 -> M3.

    Factors appear in reverse traversal order (first element rightmost).
    """
    return (
        slab(config.d6)
        @ thin_lens(config.f_L4)
        @ slab(config.d_w)
        @ thin_lens(config.f_L3)
        @ slab(config.d5)
        @ slab(config.l_m, config.n_m)
        @ slab(config.d4)
        @ thin_lens(config.f_L2)
        @ slab(config.d3)
        @ slab(config.l_g, config.n_g)
        @ slab(config.d2)
        @ thin_lens(config.f_L1)
        @ slab(config.d1)
        @ slab(config.l_s, config.n_s)
    )


def stability(config: CsdrConfig) -> StabilityReport:
    m = single_pass_matrix(config)
    g1, g2, l_star = m.a, m.d, m.b
    product = g1 * g2
    confocal = abs(g1) < CONFOCAL_TOL and abs(g2) < CONFOCAL_TOL
    stable = (0.0 < product < 1.0) or confocal
    return StabilityReport(g1, g2, l_star, product, stable)


def _segments(config: CsdrConfig, bp: Breakpoints):
    # (segment start, segment end, index, lens crossed at segment entry)
    return (
        (0.0, bp.z_sr, config.n_s, None),
        (bp.z_sr, bp.z_L1, 1.0, None),
        (bp.z_L1, bp.z_gl, 1.0, config.f_L1),
        (bp.z_gl, bp.z_gr, config.n_g, None),
        (bp.z_gr, bp.z_L2, 1.0, None),
        (bp.z_L2, bp.z_ml, 1.0, config.f_L2),
        (bp.z_ml, bp.z_mr, config.n_m, None),
        (bp.z_mr, bp.z_L3, 1.0, None),
        (bp.z_L3, bp.z_L4, 1.0, config.f_L3),
        (bp.z_L4, bp.z_M3, 1.0, config.f_L4),
    )


def transfer_to(config: CsdrConfig, z: float) -> RayMatrix:
    """Partial transfer matrix M_t(z) from M1 (z = 0) to position z."""
    bp = breakpoints(config)
    if z < 0 or z > bp.z_M3 * (1 + 1e-12):
        raise ValueError(f"z = {z} outside the optical path [0, {bp.z_M3}]")
    # Reaching a segment implies z exceeds its start, so the slab length
    # min(z, z1) - z0 is never negative.
    m = IDENTITY
    for z0, z1, index, focal in _segments(config, bp):
        if focal is not None:
            m = compose(thin_lens(focal), m)
        m = compose(slab(max(min(z, z1) - z0, 0.0), index), m)
        if z <= z1:
            break
    return m


def fundamental_radius_at_m1(config: CsdrConfig) -> float:
    """TEM00 mode radius w00(0) on mirror M1."""
    report = stability(config)
    if not report.stable:
        raise UnstableCavityError(
            f"cavity unstable: g1*g2* = {report.product:.6g}", reason="unstable"
        )
    g1, g2 = report.g1_star, report.g2_star
    denom = g1 * (1.0 - report.product)
    if denom == 0 or g2 / denom <= 0:
        raise UnstableCavityError(
            "waist expression has no real solution for this geometry",
            reason="radicand",
        )
    inner = math.sqrt(g2 / denom)
    return math.sqrt(config.lambda_nu * abs(report.l_star) / math.pi * inner)


def q_at_m1(config: CsdrConfig) -> BeamState:
    """Self-consistent q-parameter on M1 (purely imaginary at the waist)."""
    w0 = fundamental_radius_at_m1(config)
    return BeamState(1j * math.pi * w0 * w0 / config.lambda_nu, 0.0, config.lambda_nu)


def transform_q(matrix: RayMatrix, q: complex) -> complex:
    """Apply the ABCD law to a complex beam parameter."""
    denom = matrix.c * q + matrix.d
    if abs(denom) < 1e-300:
        raise DegeneratePropagationError(
            f"ABCD transform denominator vanished (|Cq+D| = {abs(denom):.3g})"
        )
    return (matrix.a * q + matrix.b) / denom


def radius_from_q(q: complex, wavelength: float) -> float:
    """Mode radius from the q-parameter, w = sqrt(-lambda / (pi Im[1/q]))."""
    inv_imag = (1.0 / q).imag
    if inv_imag >= 0:
        raise DegeneratePropagationError(
            f"no real beam radius: Im(1/q) = {inv_imag:.3g} >= 0"
        )
    return math.sqrt(-wavelength / (math.pi * inv_imag))


def propagate_q(config: CsdrConfig, z: float, q0: complex | None = None) -> BeamState:
    """q-parameter at position z.

    ``q0`` defaults to the self-consistent cavity mode at M1 (requires a
    stable cavity); passing an explicit q0 propagates an arbitrary beam
    through the same optical path.
    """
    if q0 is None:
        q0 = q_at_m1(config).q
    m = transfer_to(config, z)
    return BeamState(transform_q(m, q0), z, config.lambda_nu)


def mode_radius(config: CsdrConfig, z: float) -> float:
    """TEM00 radius w00(z) of the self-consistent cavity mode."""
    state = propagate_q(config, z)
    return radius_from_q(state.q, state.wavelength)


def beam_quality_factor(config: CsdrConfig) -> float:
    """Multimode scale factor M = a_g / w00(z_gl).

    Pins the multimode envelope to the gain aperture radius at the gain
    medium entrance.
    """
    return config.a_g / mode_radius(config, breakpoints(config).z_gl)


def multimode_radius(config: CsdrConfig, z: float) -> float:
    """Multimode beam radius w(z) = M * w00(z)."""
    return beam_quality_factor(config) * mode_radius(config, z)


__all__ = [
    "BeamState",
    "Breakpoints",
    "CONFOCAL_TOL",
    "DegeneratePropagationError",
    "StabilityReport",
    "UnstableCavityError",
    "beam_quality_factor",
    "breakpoints",
    "fundamental_radius_at_m1",
    "mode_radius",
    "multimode_radius",
    "propagate_q",
    "q_at_m1",
    "radius_from_q",
    "single_pass_matrix",
    "stability",
    "transfer_to",
    "transform_q",
]
