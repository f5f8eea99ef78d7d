"""Scenario configuration: physical-layer parameters plus experiment controls.

All dB/dBm quantities are converted to linear units (mW, plain ratios) at the
point of use; distances are in meters throughout.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field

import yaml

from .errors import ConfigError

SCENARIOS = ("rate_vs_snr", "sinr_vs_density", "rate_vs_density", "edge_multi_macro")
STRATEGY_NAMES = ("no_coord", "full", "macro_only", "no_inter_tier")
PATHLOSS_REFERENCES = ("cell_edge", "far_field")
SNR_REFERENCES = ("received", "transmit")
PLACEMENTS = ("anywhere", "edge_annulus")


def dbm_to_mw(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x) -> float:
    import numpy as np

    return 10.0 * np.log10(x)


@dataclass
class NetworkConfig:
    # Base stations
    macro_antennas: int = 4
    micro_antennas: int = 2
    macro_erp_dbm: float = 46.0
    micro_erp_dbm: float = 30.0
    macro_users: int = 6
    micro_users: int = 4
    macro_radius_m: float = 1000.0
    micro_radius_m: float = 70.0

    # Propagation
    pathloss_exp_uma: float = 4.0     # macro transmitters
    pathloss_exp_umi: float = 3.5     # micro transmitters
    shadow_sigma_db: float = 8.0
    shadow_decorr_m: float = 10.0      # exponential decorrelation distance
    reference_distance_m: float = 1.0  # far-field floor; also the user exclusion radius
    # "cell_edge": pathloss referenced to the transmitting cell's radius, so a
    # cell-edge user sees unit pathloss from its own BS.  "far_field": referenced
    # to reference_distance_m (raw log-distance law).
    pathloss_reference: str = "cell_edge"
    # "received": per-user noise floor so the SNR axis is the mean (pathloss-only)
    # own-signal-to-noise ratio of each user.  "transmit": one global noise floor
    # equal to macro ERP / SNR.
    snr_reference: str = "received"

    # Layout
    num_macrocells: int = 1            # 1, or 3 on a 1 km equilateral triangle
    num_microcells: int = 2
    microcell_placement: str = "anywhere"
    edge_annulus_inner_m: float = 877.0
    placement_attempts: int = 10_000   # rejection-sampling budget per microcell

    # Experiment controls
    scenario: str = "rate_vs_snr"
    strategies: tuple = STRATEGY_NAMES
    snr_grid_db: tuple = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0)
    microcell_counts: tuple = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10)
    rho: float = 1.0                   # CSI quality; 1 = perfect
    trials: int = 10_000
    # When set, the topology and shadowing are frozen per drop and `trials` is
    # split into `drops` blocks of fading realizations (trials % drops == 0).
    drops: int | None = None
    base_seed: int = 1

    @property
    def macro_erp_mw(self) -> float:
        return dbm_to_mw(self.macro_erp_dbm)

    @property
    def micro_erp_mw(self) -> float:
        return dbm_to_mw(self.micro_erp_dbm)

    def validate(self) -> "NetworkConfig":
        pos = [
            ("macro_radius_m", self.macro_radius_m), ("micro_radius_m", self.micro_radius_m),
            ("reference_distance_m", self.reference_distance_m),
            ("shadow_decorr_m", self.shadow_decorr_m),
        ]
        for key, val in pos:
            if not val > 0:
                raise ConfigError(key, f"must be > 0, got {val}")
        for key, val in [("macro_antennas", self.macro_antennas), ("micro_antennas", self.micro_antennas)]:
            if int(val) < 1:
                raise ConfigError(key, f"must be >= 1, got {val}")
        for key, val in [("macro_users", self.macro_users), ("micro_users", self.micro_users)]:
            if int(val) < 1:
                raise ConfigError(key, f"must be >= 1, got {val}")
        for key, val in [("pathloss_exp_uma", self.pathloss_exp_uma), ("pathloss_exp_umi", self.pathloss_exp_umi)]:
            if not val > 2:
                raise ConfigError(key, f"must be > 2, got {val}")
        if self.shadow_sigma_db < 0:
            raise ConfigError("shadow_sigma_db", f"must be >= 0, got {self.shadow_sigma_db}")
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigError("rho", f"must lie in [0, 1], got {self.rho}")
        if self.trials < 1:
            raise ConfigError("trials", f"must be >= 1, got {self.trials}")
        if self.drops is not None:
            if self.drops < 1:
                raise ConfigError("drops", f"must be >= 1, got {self.drops}")
            if self.trials % self.drops:
                raise ConfigError("drops", f"must divide trials ({self.trials}), got {self.drops}")
        if self.num_macrocells not in (1, 3):
            raise ConfigError("num_macrocells", f"must be 1 or 3, got {self.num_macrocells}")
        if self.num_microcells < 0:
            raise ConfigError("num_microcells", f"must be >= 0, got {self.num_microcells}")
        if self.microcell_placement not in PLACEMENTS:
            raise ConfigError("microcell_placement", f"must be one of {PLACEMENTS}")
        if not 0 < self.edge_annulus_inner_m < self.macro_radius_m:
            raise ConfigError("edge_annulus_inner_m",
                              f"must lie in (0, macro_radius_m), got {self.edge_annulus_inner_m}")
        if self.pathloss_reference not in PATHLOSS_REFERENCES:
            raise ConfigError("pathloss_reference", f"must be one of {PATHLOSS_REFERENCES}")
        if self.snr_reference not in SNR_REFERENCES:
            raise ConfigError("snr_reference", f"must be one of {SNR_REFERENCES}")
        if self.scenario not in SCENARIOS:
            raise ConfigError("scenario", f"must be one of {SCENARIOS}")
        for s in self.strategies:
            if s not in STRATEGY_NAMES:
                raise ConfigError("strategies", f"unknown strategy {s!r}, expected {STRATEGY_NAMES}")
        if not self.strategies:
            raise ConfigError("strategies", "must not be empty")
        if self.scenario == "rate_vs_snr" and not self.snr_grid_db:
            raise ConfigError("snr_grid_db", "must not be empty for rate_vs_snr")
        if self.scenario in ("sinr_vs_density", "rate_vs_density", "edge_multi_macro"):
            if not self.microcell_counts:
                raise ConfigError("microcell_counts", "must not be empty for density scenarios")
            if not self.snr_grid_db:
                raise ConfigError("snr_grid_db", "need one SNR value for density scenarios")
        return self


_FIELDS = {f.name: f for f in dataclasses.fields(NetworkConfig)}


def _coerce(key, value, target):
    try:
        if target is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError("not an integer")
            return int(value)
        if target is float:
            return float(value)
        if target is str:
            if not isinstance(value, str):
                raise ValueError("expected a string")
            return value
        if target is tuple:
            if isinstance(value, (list, tuple)):
                return tuple(value)
            raise ValueError("expected a list")
        return value
    except (TypeError, ValueError) as exc:
        raise ConfigError(key, f"cannot interpret {value!r}: {exc}") from exc


def load_config(source) -> NetworkConfig:
    """Build a validated NetworkConfig from a path, file object, or inline text.

    Missing keys take their defaults; unknown keys are rejected.
    """
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, str) and "\n" not in source and os.path.exists(source):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = source
    data = yaml.safe_load(text) if text and str(text).strip() else None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("<document>", "expected a flat key-value mapping")
    kwargs = {}
    for key, value in data.items():
        if key not in _FIELDS:
            raise ConfigError(key, "unknown key")
        f = _FIELDS[key]
        target = {"int": int, "float": float, "str": str}.get(str(f.type).split(" ")[0], None)
        if key == "drops":
            kwargs[key] = None if value is None else _coerce(key, value, int)
        elif key in ("strategies", "snr_grid_db", "microcell_counts"):
            seq = _coerce(key, value, tuple)
            elem = str if key == "strategies" else (int if key == "microcell_counts" else float)
            kwargs[key] = tuple(_coerce(key, v, elem) for v in seq)
        elif target is not None:
            kwargs[key] = _coerce(key, value, target)
        else:
            kwargs[key] = value
    return NetworkConfig(**kwargs).validate()
