"""Coupled spatially distributed resonator SLIPT simulator.

End-to-end deterministic model of a two-cavity resonant beam system:
ray-matrix cavity analysis, Gaussian beam evolution, steady-state power
balance with a Fabry-Perot coupled output stage and second-harmonic
generation, photovoltaic harvesting, and duplex link rates.
"""

from .cavity import (
    BeamState,
    Breakpoints,
    DegeneratePropagationError,
    StabilityReport,
    UnstableCavityError,
    breakpoints,
    fundamental_radius_at_m1,
    mode_radius,
    multimode_radius,
    propagate_q,
    single_pass_matrix,
    stability,
    transfer_to,
)
from .config import CANONICAL_KEYS, ConfigError, CsdrConfig, load_config, parse_config_text
from .harvest import PvOperatingPoint, mppt, open_circuit_voltage, photocurrent, solve_iv
from .link import LinkBudget, downlink_power, link_budget, noise_variance, rate, uplink_power
from .matrices import IDENTITY, RayMatrix, compose, slab, thin_lens
from .power import (
    CavityLosses,
    FixedPointDivergenceError,
    PowerBreakdown,
    cavity_losses,
    diffraction_loss,
    fp_reflectance,
    fp_transmittance,
    resonant_fp,
    solve_operating_point,
)
from .sweep import PointReport, SweepSpec, fp_spectrum, radius_profile, run_point, run_sweep

__version__ = "0.1.0"

__all__ = [
    "BeamState",
    "Breakpoints",
    "CANONICAL_KEYS",
    "CavityLosses",
    "ConfigError",
    "CsdrConfig",
    "DegeneratePropagationError",
    "FixedPointDivergenceError",
    "IDENTITY",
    "LinkBudget",
    "PointReport",
    "PowerBreakdown",
    "PvOperatingPoint",
    "RayMatrix",
    "StabilityReport",
    "SweepSpec",
    "UnstableCavityError",
    "breakpoints",
    "cavity_losses",
    "compose",
    "diffraction_loss",
    "downlink_power",
    "fp_reflectance",
    "fp_spectrum",
    "fp_transmittance",
    "fundamental_radius_at_m1",
    "link_budget",
    "load_config",
    "mode_radius",
    "mppt",
    "multimode_radius",
    "noise_variance",
    "open_circuit_voltage",
    "parse_config_text",
    "photocurrent",
    "propagate_q",
    "radius_profile",
    "rate",
    "resonant_fp",
    "run_point",
    "run_sweep",
    "single_pass_matrix",
    "slab",
    "solve_iv",
    "solve_operating_point",
    "stability",
    "thin_lens",
    "transfer_to",
    "uplink_power",
]
