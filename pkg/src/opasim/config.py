"""Run configuration: one JSON document describes a complete experiment.

The document mirrors the dataclasses below; unknown keys are rejected at
every level so that a typo cannot silently fall back to a default. All
state flows through the config (plus explicit CLI overrides) - there are
no environment variables.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .ensemble import EnsembleConfig, VacuumConvention
from .fields import TimeGrid
from .medium import SusceptibilityProfile

MODES = ("raw", "symplectic")


@dataclass(frozen=True)
class RunConfig:
    medium: SusceptibilityProfile = SusceptibilityProfile(chi1=1.0, chi2=0.5)
    A: float = 0.0
    phi_deg: float = 0.0
    B: float = 1.0
    pump_phase_deg: float = 0.0
    samples_per_period: int = 64
    n_periods: int = 4
    n_realizations: int = 100_000
    seed: int = 20260811
    var_zp: float = 1.0
    thetas: int = 181
    mode: str = "raw"
    band_sigma: float = 1.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.thetas < 2:
            raise ValueError("thetas must be at least 2")
        if not self.band_sigma > 0.0:
            raise ValueError("band_sigma must be positive")
        # constructing the owned objects runs their validators
        self.grid()
        self.ensemble()

    @property
    def phi(self) -> float:
        return math.radians(self.phi_deg)

    @property
    def pump_phase(self) -> float:
        return math.radians(self.pump_phase_deg)

    @property
    def pump_ratio(self) -> float:
        """Normalized pump strength r = chi2 * B / chi1."""
        if self.medium.chi1 <= 0.0:
            raise ValueError("pump ratio requires chi1 > 0")
        return self.medium.chi2 * self.B / self.medium.chi1

    def grid(self) -> TimeGrid:
        return TimeGrid(self.samples_per_period, self.n_periods)

    def convention(self) -> VacuumConvention:
        return VacuumConvention(self.var_zp)

    def ensemble(self) -> EnsembleConfig:
        return EnsembleConfig(
            n_realizations=self.n_realizations,
            seed=self.seed,
            grid=self.grid(),
            convention=self.convention(),
        )

    def to_json(self) -> str:
        doc = {
            "medium": {
                "chi1": self.medium.chi1,
                "chi2": self.medium.chi2,
                "chi3": self.medium.chi3,
                "eps0": self.medium.eps0,
            },
            "A": self.A,
            "phi_deg": self.phi_deg,
            "B": self.B,
            "pump_phase_deg": self.pump_phase_deg,
            "grid": {
                "samples_per_period": self.samples_per_period,
                "n_periods": self.n_periods,
            },
            "ensemble": {
                "n_realizations": self.n_realizations,
                "seed": self.seed,
                "var_zp": self.var_zp,
            },
            "thetas": self.thetas,
            "mode": self.mode,
            "band_sigma": self.band_sigma,
        }
        return json.dumps(doc, indent=2) + "\n"


class ConfigError(ValueError):
    """Malformed or out-of-range run configuration."""


def _take(section: dict, defaults: dict, where: str) -> dict:
    unknown = set(section) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")
    merged = dict(defaults)
    merged.update(section)
    return merged


def _require(doc, cls, where: str):
    if not isinstance(doc, cls):
        raise ConfigError(f"{where} must be a {cls.__name__}")
    return doc


def _section(top: dict, key: str) -> dict:
    value = top[key]
    if value is None:
        return {}
    return _require(value, dict, key)


def from_document(doc: dict) -> RunConfig:
    """Build a validated RunConfig from a parsed JSON document."""
    base = RunConfig()
    _require(doc, dict, "config")
    top_defaults = {
        "medium": None,
        "A": base.A,
        "phi_deg": base.phi_deg,
        "B": base.B,
        "pump_phase_deg": base.pump_phase_deg,
        "grid": None,
        "ensemble": None,
        "thetas": base.thetas,
        "mode": base.mode,
        "band_sigma": base.band_sigma,
    }
    top = _take(doc, top_defaults, "config")

    medium_fields = _take(
        _section(top, "medium"),
        {
            "chi1": base.medium.chi1,
            "chi2": base.medium.chi2,
            "chi3": base.medium.chi3,
            "eps0": base.medium.eps0,
        },
        "medium",
    )
    grid_fields = _take(
        _section(top, "grid"),
        {"samples_per_period": base.samples_per_period, "n_periods": base.n_periods},
        "grid",
    )
    ens_fields = _take(
        _section(top, "ensemble"),
        {"n_realizations": base.n_realizations, "seed": base.seed, "var_zp": base.var_zp},
        "ensemble",
    )
    try:
        return RunConfig(
            medium=SusceptibilityProfile(**medium_fields),
            A=float(top["A"]),
            phi_deg=float(top["phi_deg"]),
            B=float(top["B"]),
            pump_phase_deg=float(top["pump_phase_deg"]),
            samples_per_period=int(grid_fields["samples_per_period"]),
            n_periods=int(grid_fields["n_periods"]),
            n_realizations=int(ens_fields["n_realizations"]),
            seed=int(ens_fields["seed"]),
            var_zp=float(ens_fields["var_zp"]),
            thetas=int(top["thetas"]),
            mode=str(top["mode"]),
            band_sigma=float(top["band_sigma"]),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def from_json(text: str) -> RunConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    return from_document(doc)


def with_overrides(cfg: RunConfig, **overrides) -> RunConfig:
    """Rebuild a config with selected fields replaced (None means keep).

    Medium constants are addressed as chi1/chi2/chi3/eps0.
    """
    medium_keys = {"chi1", "chi2", "chi3", "eps0"}
    medium_fields = {
        key: getattr(cfg.medium, key) for key in medium_keys
    }
    fields = {
        "A": cfg.A,
        "phi_deg": cfg.phi_deg,
        "B": cfg.B,
        "pump_phase_deg": cfg.pump_phase_deg,
        "samples_per_period": cfg.samples_per_period,
        "n_periods": cfg.n_periods,
        "n_realizations": cfg.n_realizations,
        "seed": cfg.seed,
        "var_zp": cfg.var_zp,
        "thetas": cfg.thetas,
        "mode": cfg.mode,
        "band_sigma": cfg.band_sigma,
    }
    for key, value in overrides.items():
        if value is None:
            continue
        if key in medium_keys:
            medium_fields[key] = value
        elif key in fields:
            fields[key] = value
        else:
            raise ConfigError(f"unknown override: {key}")
    try:
        return RunConfig(medium=SusceptibilityProfile(**medium_fields), **fields)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
