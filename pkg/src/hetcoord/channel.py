"""Per-trial channel generation: received powers with correlated shadowing,
i.i.d. complex Gaussian fading, and CSI corruption."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .config import NetworkConfig, dbm_to_mw
from .errors import DomainError
from .topology import Topology

__all__ = [
    "ReceivedPowerModel", "ChannelRealization", "received_power",
    "correlated_shadowing", "link_powers", "draw_fading", "draw_channels",
    "corrupt_csi", "noise_variances",
]


@dataclass
class ReceivedPowerModel:
    pathloss_exponent_uma: float = 4.0
    pathloss_exponent_umi: float = 3.5
    shadow_sigma_db: float = 8.0
    decorrelation_distance_m: float = 10.0
    reference_distance_m: float = 1.0
    pathloss_reference: str = "cell_edge"   # "cell_edge" | "far_field"

    def __post_init__(self):
        if self.pathloss_exponent_uma <= 2 or self.pathloss_exponent_umi <= 2:
            raise ValueError("pathloss exponents must be > 2")
        if self.shadow_sigma_db < 0:
            raise ValueError("shadow_sigma_db must be >= 0")
        if self.decorrelation_distance_m <= 0:
            raise ValueError("decorrelation_distance_m must be > 0")

    @classmethod
    def from_config(cls, cfg: NetworkConfig) -> "ReceivedPowerModel":
        return cls(pathloss_exponent_uma=cfg.pathloss_exp_uma,
                   pathloss_exponent_umi=cfg.pathloss_exp_umi,
                   shadow_sigma_db=cfg.shadow_sigma_db,
                   decorrelation_distance_m=cfg.shadow_decorr_m,
                   reference_distance_m=cfg.reference_distance_m,
                   pathloss_reference=cfg.pathloss_reference)

    def exponent_for(self, site) -> float:
        return self.pathloss_exponent_uma if site.kind == "macro" else self.pathloss_exponent_umi

    def reference_for(self, site) -> float:
        if self.pathloss_reference == "cell_edge":
            return site.radius_m
        return self.reference_distance_m


def received_power(erp_dbm, num_users, distance_m, gamma, shadow_linear,
                   reference_m: float = 1.0, min_distance_m: float = 1.0):
    """Linear received power [mW]: (ERP / k) * (reference / d)^gamma * shadow.

    The ERP is split evenly over the transmitter's `num_users` streams.
    """
    distance_m = np.asarray(distance_m, dtype=float)
    if np.any(distance_m < min_distance_m):
        raise DomainError(f"distance {distance_m} below far-field minimum {min_distance_m} m")
    if num_users < 1:
        raise DomainError("num_users must be >= 1")
    per_user_mw = dbm_to_mw(erp_dbm) / num_users
    out = per_user_mw * (reference_m / distance_m) ** gamma * shadow_linear
    return float(out) if out.ndim == 0 else out


def correlated_shadowing(positions, sigma_db, decorr_m, rng):
    """Spatially correlated shadow-fading factors (linear) at the given points.

    dB-domain values are jointly Gaussian with covariance
    sigma_db^2 * exp(-distance / decorr_m) between points.
    """
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    n = positions.shape[0]
    if sigma_db == 0:
        return np.ones(n)
    delta = np.linalg.norm(positions[:, None, :] - positions[None, :, :], axis=2)
    cov = sigma_db**2 * np.exp(-delta / decorr_m)
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        # coincident points make cov singular; a tiny diagonal jitter fixes it
        chol = np.linalg.cholesky(cov + 1e-9 * np.eye(n))
    shadow_db = chol @ rng.standard_normal(n)
    return 10.0 ** (shadow_db / 10.0)


@dataclass
class ChannelRealization:
    """Channels from every BS to every user for one trial.

    channels[n] has shape (num_users, Z_n); row k is the vector from BS n to
    user k (the desired link when n serves k, a cross link otherwise).
    `design` holds the copies the beamformers are built from; it is the same
    object as `channels` under perfect CSI.
    """
    channels: list
    power: np.ndarray        # (N, U) linear mW, shadowing included
    power_mean: np.ndarray   # (N, U) pathloss-only (no shadowing)
    design: list
    rho: float = 1.0

    @property
    def num_users(self) -> int:
        return self.power.shape[1]


def link_powers(topology: Topology, model: ReceivedPowerModel, rng):
    """Received power of every (BS, user) link: pathloss plus one correlated
    shadowing field per transmitter over all user positions.

    Returns (power, power_mean); power_mean excludes shadowing.
    """
    n_sites, n_users = topology.num_sites, topology.num_users
    upos = topology.user_positions()
    power = np.empty((n_sites, n_users))
    power_mean = np.empty((n_sites, n_users))
    d0 = model.reference_distance_m
    for n, site in enumerate(topology.sites):
        d = np.maximum(topology.distances[n], d0)  # far-field floor for cross links
        shadow = correlated_shadowing(upos, model.shadow_sigma_db,
                                      model.decorrelation_distance_m, rng)
        power_mean[n] = received_power(site.erp_dbm, site.num_users, d,
                                       model.exponent_for(site), 1.0,
                                       reference_m=model.reference_for(site),
                                       min_distance_m=d0)
        power[n] = power_mean[n] * shadow
    return power, power_mean


def draw_fading(power: np.ndarray, antennas, rng) -> list:
    """i.i.d. CN(0, P[n, k]) channel vectors, one (U, Z_n) matrix per BS."""
    out = []
    for n, z in enumerate(antennas):
        scale = np.sqrt(power[n][:, None] / 2.0)
        out.append(scale * (rng.standard_normal((power.shape[1], z))
                            + 1j * rng.standard_normal((power.shape[1], z))))
    return out


def draw_channels(topology: Topology, model: ReceivedPowerModel, rng) -> ChannelRealization:
    """One full channel draw (shadowing and fading together)."""
    power, power_mean = link_powers(topology, model, rng)
    antennas = [s.num_antennas for s in topology.sites]
    h = draw_fading(power, antennas, rng)
    return ChannelRealization(channels=h, power=power, power_mean=power_mean,
                              design=h, rho=1.0)


def corrupt_csi(realization: ChannelRealization, rho: float, rng) -> ChannelRealization:
    """Gauss-Markov CSI corruption applied to every channel a BS designs with:
    h_hat = rho * h + sqrt(1 - rho^2) * Xi,  Xi ~ CN(0, P[n, k])."""
    if not 0.0 <= rho <= 1.0:
        raise DomainError(f"rho must lie in [0, 1], got {rho}")
    if rho == 1.0:
        return replace(realization, design=realization.channels, rho=1.0)
    mix = np.sqrt(1.0 - rho**2)
    design = []
    for n, h in enumerate(realization.channels):
        scale = np.sqrt(realization.power[n][:, None] / 2.0)
        xi = scale * (rng.standard_normal(h.shape) + 1j * rng.standard_normal(h.shape))
        design.append(rho * h + mix * xi)
    return replace(realization, design=design, rho=rho)


def noise_variances(topology: Topology, power_mean: np.ndarray, snr_db: float,
                    snr_reference: str = "received",
                    macro_erp_dbm: float = 46.0) -> np.ndarray:
    """Per-user noise floor for a swept SNR point.

    received: sigma_k^2 = pathloss-only serving-link power / SNR, so the axis is
    each user's mean own-signal-to-noise ratio.
    transmit: one global sigma^2 = macro ERP / SNR.
    """
    snr_lin = 10.0 ** (snr_db / 10.0)
    if snr_reference == "received":
        serving = topology.serving
        own = power_mean[serving, np.arange(topology.num_users)]
        return own / snr_lin
    if snr_reference == "transmit":
        return np.full(topology.num_users, dbm_to_mw(macro_erp_dbm) / snr_lin)
    raise ValueError(f"unknown snr_reference {snr_reference!r}")
