"""Per-user SINR, Shannon rates, the separated-expectation mean-SINR
approximation, and the closed-form beam-gain second moment."""

from __future__ import annotations

import numpy as np

from . import kernels
from .beamforming import BeamformerSet, Strategy
from .channel import ChannelRealization
from .errors import DomainError
from .topology import Topology

__all__ = [
    "sinr_terms", "sinr_per_user", "sinr", "per_cell_rates",
    "mean_sum_rate_per_cell", "network_sum_rate", "mean_sinr_approx",
    "beam_gain_second_moment",
]


def sinr_terms(channels: ChannelRealization, beams: BeamformerSet,
               topology: Topology):
    """Desired, intracell, and intercell received powers per user [mW].

    Evaluation always uses the true channels, whatever CSI the beamformers were
    designed from.  Under no_inter_tier, cross-tier interference is excluded:
    that strategy models tiers on isolated resources, so users only see
    interference from their own tier.
    """
    n_sites, n_users = topology.num_sites, topology.num_users
    gains = [kernels.pair_gains(np.ascontiguousarray(channels.channels[n]),
                                np.ascontiguousarray(beams.vectors[n]))
             for n in range(n_sites)]                       # each (U, k_n)
    totals = np.stack([g.sum(axis=1) for g in gains])       # (N, U)
    serving = topology.serving
    users = np.arange(n_users)

    desired = np.empty(n_users)
    for n in range(n_sites):
        served = topology.served[n]
        desired[served] = gains[n][served, np.arange(len(served))]
    intra = totals[serving, users] - desired

    include = np.ones((n_sites, n_users), dtype=bool)
    if beams.strategy is Strategy.NO_INTER_TIER:
        user_is_macro = topology.site_is_macro[serving]
        include = topology.site_is_macro[:, None] == user_is_macro[None, :]
    cross = np.where(include, totals, 0.0).sum(axis=0) - totals[serving, users]
    return desired, intra, cross


def sinr_per_user(channels, beams, topology, noise_var) -> np.ndarray:
    """Instantaneous SINR of every user for one trial (linear)."""
    desired, intra, cross = sinr_terms(channels, beams, topology)
    return desired / (np.asarray(noise_var) + intra + cross)


def sinr(user: int, beams: BeamformerSet, channels: ChannelRealization,
         topology: Topology, noise_var) -> float:
    """Single-user SINR; see sinr_per_user for the vectorized form."""
    return float(sinr_per_user(channels, beams, topology, noise_var)[user])


def per_cell_rates(sinr_values: np.ndarray, topology: Topology) -> np.ndarray:
    """Instantaneous sum rate of each cell [b/s/Hz]: sum_k log2(1 + SINR_k)."""
    rates = np.log2(1.0 + np.asarray(sinr_values))
    return np.array([rates[topology.served[n]].sum() for n in range(topology.num_sites)])


def mean_sum_rate_per_cell(sinr_trials, topology: Topology, cell: int) -> float:
    """Monte Carlo mean of one cell's sum rate over per-trial SINR tables."""
    trials = list(sinr_trials)
    if not trials:
        raise ValueError("need at least one trial")
    served = topology.served[cell]
    return float(np.mean([np.log2(1.0 + np.asarray(g)[served]).sum() for g in trials]))


def network_sum_rate(sinr_trials, topology: Topology, cells=None):
    """Monte Carlo mean of the sum rate over a set of cells.

    Returns (mean, per_trial) so callers can extract percentiles of the
    per-trial aggregate.  `cells` defaults to every cell.
    """
    trials = list(sinr_trials)
    if not trials:
        raise ValueError("need at least one trial")
    cells = list(range(topology.num_sites)) if cells is None else list(cells)
    if not cells:
        raise ValueError("cells must be non-empty")
    users = np.concatenate([topology.served[c] for c in cells])
    per_trial = np.array([np.log2(1.0 + np.asarray(g)[users]).sum() for g in trials])
    return float(per_trial.mean()), per_trial


def mean_sinr_approx(desired_trials, intra_trials, cross_trials, noise_var):
    """Separated-expectation mean-SINR approximation, per user.

    Inputs are (T, U) stacks of the per-trial terms from sinr_terms for a fixed
    layout.  Numerator and denominator terms are averaged over trials
    independently before dividing; with a single trial this reduces to the
    instantaneous SINR.
    """
    desired = np.atleast_2d(np.asarray(desired_trials))
    intra = np.atleast_2d(np.asarray(intra_trials))
    cross = np.atleast_2d(np.asarray(cross_trials))
    return desired.mean(axis=0) / (np.asarray(noise_var) + intra.mean(axis=0) + cross.mean(axis=0))


def beam_gain_second_moment(eigenvalues, noise_variance: float, link_power: float) -> float:
    """Closed form of E[|h (M^H M + sigma^2 I)^{-1} h^*|^2] for h ~ CN(0, P I),
    conditioned on the eigenvalues of M^H M.

    With c_i = 1 / (lambda_i + sigma^2), the value is
    P^2 * ((sum_i c_i)^2 + sum_i c_i^2): the second moment of a weighted sum of
    unit-mean exponentials.  This describes the un-normalized beamforming
    direction and is validated against brute-force Monte Carlo in the tests.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if np.any(lam < 0):
        raise DomainError("eigenvalues must be nonnegative")
    if noise_variance <= 0:
        raise DomainError("noise_variance must be > 0")
    inv = 1.0 / (lam + noise_variance)
    return float(link_power**2 * (inv.sum() ** 2 + (inv**2).sum()))
