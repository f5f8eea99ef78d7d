"""hetcoord: system-level Monte Carlo simulator for a two-tier cellular
downlink with leakage-based transmit beamforming and configurable degrees of
base-station coordination."""

from .beamforming import (BeamformerSet, Strategy, build_beamformers,
                          concatenated_channel, slnr, slnr_beamformer)
from .channel import (ChannelRealization, ReceivedPowerModel, corrupt_csi,
                      correlated_shadowing, draw_channels, noise_variances,
                      received_power)
from .config import NetworkConfig, load_config
from .errors import (ConfigError, DomainError, EmitError, HetcoordError,
                     InsufficientData, PlacementInfeasible)
from .harness import ExperimentSpec, run_experiment, summarize_percentiles
from .kernels import BACKEND
from .metrics import (beam_gain_second_moment, mean_sinr_approx,
                      mean_sum_rate_per_cell, network_sum_rate, per_cell_rates,
                      sinr, sinr_per_user, sinr_terms)
from .results import CurveRow, CurveTable, emit_results, parse_results_csv
from .topology import (CellSite, Topology, UserTerminal, build_topology,
                       drop_users, place_microcells)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BeamformerSet", "CellSite", "ChannelRealization", "ConfigError",
    "CurveRow", "CurveTable", "DomainError", "EmitError", "ExperimentSpec",
    "HetcoordError", "InsufficientData", "NetworkConfig", "PlacementInfeasible",
    "ReceivedPowerModel", "Strategy", "Topology", "UserTerminal",
    "beam_gain_second_moment", "build_beamformers", "build_topology",
    "concatenated_channel", "corrupt_csi", "correlated_shadowing",
    "draw_channels", "drop_users", "emit_results", "load_config",
    "mean_sinr_approx", "mean_sum_rate_per_cell", "network_sum_rate",
    "noise_variances", "parse_results_csv",
    "per_cell_rates", "place_microcells", "received_power", "run_experiment",
    "sinr", "sinr_per_user", "sinr_terms", "slnr", "slnr_beamformer",
    "summarize_percentiles",
]
