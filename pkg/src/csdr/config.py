"""Resonator configuration: geometry, coatings, materials, pump, PV and link
parameters, with defaults matching the reference parameter set.

A config file is flat ``key = value`` text.  Values are SI; lengths may carry
an explicit ``mm`` suffix.  Blank lines and ``#`` comments are ignored.
Unknown keys, non-numeric values and constraint violations raise
:class:`ConfigError` naming the offending key.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path


class ConfigError(ValueError):
    """Raised for unknown keys, malformed values, or constraint violations."""


@dataclass(frozen=True)
class CsdrConfig:
    """Full parameter set for one resonator operating point.

    Distances d1..d6 and d_w are the free-space gaps along the optical axis
    (d_w is the transmitter-receiver working distance); l_* / n_* are slab
    thicknesses and refractive indices; f_L* are lens focal lengths.
    ``d1`` and ``R_M1`` default to None and are then derived in
    ``__post_init__`` (d1 = 50 mm - l_s/n_s, R_M1 = R_hr).
    """

    # geometry (meters)
    d1: float | None = None
    d2: float = 0.05
    d3: float = 0.05
    d4: float = 0.05
    d5: float = 0.097
    d6: float = 0.05
    d_w: float = 6.0
    f_L1: float = 0.05
    f_L2: float = 0.05
    f_L3: float = 0.10
    f_L4: float = 0.05
    l_s: float = 1e-3
    l_g: float = 1e-3
    l_m: float = 6e-3
    # materials
    n_s: float = 2.23
    n_g: float = 1.96
    n_m: float = 1.5
    n_c: float = 1.5  # recorded but consumed by nothing
    a_g: float = 1.4e-3
    lambda_nu: float = 1064e-9
    # coatings and mirrors
    R_hr: float = 0.997
    T_ar: float = 0.995
    R_M1: float | None = None
    R_M2: float = 0.72
    R_M3: float = 0.1
    Rp_M3: float = 0.69  # reflectivity of M3 at the second-harmonic wavelength
    # gain / frequency doubling / pump
    d_eff: float = 4.7e-12
    I_s: float = 1.1976e7
    P_in: float = 60.0
    eta_c: float = 0.439
    alpha_air: float = 1e-4
    # photovoltaic harvesting
    rho_pv: float = 0.6
    T_pv: float = 1.0
    I_0: float = 0.32e-6
    N_s: float = 1.0
    n_d: float = 1.48
    R_s: float = 37e-3
    R_sh: float = 53.82
    # communication receivers
    rho_pd: float = 0.4
    T_pd1: float = 1.0
    T_pd2: float = 1.0
    B_r: float = 800e6
    R_IL: float = 10e3
    I_bk: float = 5100e-6
    T_t: float = 300.0
    # physical constants (kept configurable to reproduce published arithmetic)
    eps_0: float = 8.854e-12
    c: float = 3e8
    k_B: float = 1.38e-23
    q_e: float = 1.602e-19

    def __post_init__(self) -> None:
        if self.d1 is None:
            object.__setattr__(self, "d1", 0.05 - self.l_s / self.n_s)
        if self.R_M1 is None:
            object.__setattr__(self, "R_M1", self.R_hr)
        self._validate()

    def _validate(self) -> None:
        positive = (
            "d1", "d2", "d3", "d4", "d5", "d6",
            "l_s", "l_g", "l_m", "a_g", "lambda_nu",
            "d_eff", "I_s", "eta_c", "rho_pv", "I_0", "N_s", "n_d",
            "R_s", "R_sh", "rho_pd", "B_r", "R_IL", "T_t",
            "eps_0", "c", "k_B", "q_e",
        )
        for name in positive:
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)}")
        nonneg = ("d_w", "P_in", "alpha_air", "I_bk")
        for name in nonneg:
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        for name in ("n_s", "n_g", "n_m", "n_c"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        for name in ("f_L1", "f_L2", "f_L3", "f_L4"):
            if getattr(self, name) == 0:
                raise ConfigError(f"{name} must be nonzero")
        unit = (
            "R_hr", "T_ar", "R_M1", "R_M2", "R_M3", "Rp_M3",
            "T_pv", "T_pd1", "T_pd2",
        )
        for name in unit:
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {v}")

    def replace(self, **overrides: float) -> "CsdrConfig":
        """Return a copy with the given fields changed (re-validated)."""
        for key in overrides:
            if key not in _FIELD_NAMES:
                raise ConfigError(f"unknown parameter {key!r}")
        return dataclasses.replace(self, **overrides)


_FIELD_NAMES = tuple(f.name for f in dataclasses.fields(CsdrConfig))

#: Keys accepted in config files and as sweep variables.
CANONICAL_KEYS = _FIELD_NAMES

# multiplicative unit suffixes accepted after the numeric value
_UNIT_SCALE = {"mm": 1e-3}


def parse_config_text(text: str, source: str = "<string>") -> CsdrConfig:
    """Parse flat ``key = value`` text into a config (defaults filled in)."""
    overrides: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _FIELD_NAMES:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        scale = 1.0
        parts = value.split()
        if len(parts) == 2 and parts[1] in _UNIT_SCALE:
            value, scale = parts[0], _UNIT_SCALE[parts[1]]
        elif len(parts) != 1:
            raise ConfigError(f"{source}:{lineno}: malformed value for {key!r}: {value!r}")
        try:
            number = float(value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: non-numeric value for {key!r}: {value!r}") from exc
        if not math.isfinite(number):
            raise ConfigError(f"{source}:{lineno}: value for {key!r} must be finite")
        overrides[key] = number * scale
    return CsdrConfig(**overrides)


def load_config(path: str | Path | None) -> CsdrConfig:
    """Load a config file; ``None`` yields the default parameter set."""
    if path is None:
        return CsdrConfig()
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    return parse_config_text(p.read_text(encoding="utf-8"), source=str(p))
