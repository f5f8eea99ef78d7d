"""Seeded Monte Carlo experiment orchestration.

Scenarios:
  rate_vs_snr      sweep the SNR axis at a fixed layout size
  sinr_vs_density  sweep the microcell count at one SNR
  rate_vs_density  same sweep, intended for the rate curves
  edge_multi_macro density sweep with microcells dropped in the primary
                   macrocell's edge annulus (single- or three-macro layouts)

Seeding: every trial draws from streams derived of
(base_seed, scenario, grid key, drop index, stream, fading index), so a run is
bit-reproducible, trials are independent, and adding trials never perturbs
earlier ones.  The grid key is the microcell count for density sweeps and a
constant for SNR sweeps: the SNR only rescales the noise floor, so all SNR
points (and all strategies) share channel realizations, which compares curves
under common random numbers.

When `drops` is set, the layout and shadowing are frozen per drop and `trials`
is split into `trials // drops` fading draws per drop.  The separated-
expectation mean-SINR approximation averages its numerator and denominator over
the fading draws within each drop (it approximates a fading average for fixed
link powers), then averages the per-drop values.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .beamforming import Strategy, build_beamformers
from .channel import (ChannelRealization, ReceivedPowerModel, corrupt_csi,
                      draw_fading, link_powers, noise_variances)
from .config import NetworkConfig
from .errors import InsufficientData, PlacementInfeasible
from .metrics import mean_sinr_approx, per_cell_rates, sinr_terms
from .results import CurveRow, CurveTable
from .topology import build_topology

SCENARIO_IDS = {"rate_vs_snr": 1, "sinr_vs_density": 2, "rate_vs_density": 3,
                "edge_multi_macro": 4}

# streams within a trial
_STREAM_DROP = 0      # topology + shadowing
_STREAM_FADING = 1
_STREAM_CSI = 2       # CSI-corruption noise

TRIAL_METRICS = ("rate_per_cell_macro", "rate_per_cell_micro", "microcell_sum_rate",
                 "rate_network", "mean_sinr")


@dataclass
class ExperimentSpec:
    network: NetworkConfig
    scenario: str = "rate_vs_snr"
    strategies: tuple = (Strategy.NO_COORD, Strategy.FULL, Strategy.MACRO_ONLY,
                         Strategy.NO_INTER_TIER)
    snr_grid_db: tuple = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0)
    microcell_counts: tuple = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10)
    rho: float = 1.0
    trials: int = 10_000
    drops: int | None = None
    base_seed: int = 1

    def __post_init__(self):
        self.strategies = tuple(Strategy.parse(s) for s in self.strategies)
        if self.scenario not in SCENARIO_IDS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.drops is not None and (self.drops < 1 or self.trials % self.drops):
            raise ValueError("drops must be >= 1 and divide trials")
        if self.scenario == "rate_vs_snr" and not self.snr_grid_db:
            raise ValueError("snr_grid_db must be non-empty for rate_vs_snr")
        if self.scenario != "rate_vs_snr" and not self.microcell_counts:
            raise ValueError("microcell_counts must be non-empty for density scenarios")
        if not self.snr_grid_db:
            raise ValueError("snr_grid_db must provide at least the operating SNR")

    @classmethod
    def from_config(cls, cfg: NetworkConfig) -> "ExperimentSpec":
        return cls(network=cfg, scenario=cfg.scenario, strategies=cfg.strategies,
                   snr_grid_db=tuple(cfg.snr_grid_db),
                   microcell_counts=tuple(cfg.microcell_counts),
                   rho=cfg.rho, trials=cfg.trials, drops=cfg.drops,
                   base_seed=cfg.base_seed)


def _rng(spec: ExperimentSpec, grid_key: int, drop: int, stream: int, extra: int = 0):
    seq = np.random.SeedSequence(
        (spec.base_seed, SCENARIO_IDS[spec.scenario], grid_key, drop, stream, extra))
    return np.random.default_rng(seq)


def summarize_percentiles(per_trial_values) -> dict:
    """Nearest-rank 10th/90th percentiles and the arithmetic mean."""
    values = np.asarray(per_trial_values, dtype=float)
    if values.size < 10:
        raise InsufficientData(f"need >= 10 values, got {values.size}")
    ordered = np.sort(values)
    n = values.size

    def nearest_rank(p):
        return ordered[max(0, math.ceil(p * n) - 1)]

    return {"p10": float(nearest_rank(0.10)), "mean": float(values.mean()),
            "p90": float(nearest_rank(0.90))}


class _PointAccumulator:
    """Per-(grid point, strategy) collection of per-trial metric values."""

    def __init__(self):
        self.trial_values = {name: [] for name in TRIAL_METRICS}
        self.approx_values = []          # one per drop

    def add_trial(self, cell_rates, site_is_macro, mean_sinr):
        macro_rates = cell_rates[site_is_macro]
        micro_rates = cell_rates[~site_is_macro]
        self.trial_values["rate_per_cell_macro"].append(macro_rates.mean())
        if micro_rates.size:
            self.trial_values["rate_per_cell_micro"].append(micro_rates.mean())
            self.trial_values["microcell_sum_rate"].append(micro_rates.sum())
        self.trial_values["rate_network"].append(cell_rates.sum())
        self.trial_values["mean_sinr"].append(mean_sinr)


def _evaluate_point(spec: ExperimentSpec, cfg: NetworkConfig, grid_key: int,
                    n_micro: int, snr_values) -> dict:
    """Run all trials for one topology-grid point; returns
    {(snr_db, strategy): _PointAccumulator}."""
    model = ReceivedPowerModel.from_config(cfg)
    n_drops = spec.drops if spec.drops is not None else spec.trials
    fading_per_drop = spec.trials // n_drops
    acc = {(snr, st): _PointAccumulator() for snr in snr_values for st in spec.strategies}
    imperfect = spec.rho < 1.0

    for drop in range(n_drops):
        rng_drop = _rng(spec, grid_key, drop, _STREAM_DROP)
        try:
            topology = build_topology(cfg, rng_drop, num_microcells=n_micro)
        except PlacementInfeasible as exc:
            raise PlacementInfeasible(
                f"{exc} (scenario={spec.scenario}, grid point with {n_micro} microcells)") from exc
        power, power_mean = link_powers(topology, model, rng_drop)
        antennas = [s.num_antennas for s in topology.sites]
        noise = {snr: noise_variances(topology, power_mean, snr, cfg.snr_reference,
                                      cfg.macro_erp_dbm) for snr in snr_values}
        # per-drop sums of the separated-expectation terms
        terms = {key: None for key in acc}
        for f in range(fading_per_drop):
            rng_f = _rng(spec, grid_key, drop, _STREAM_FADING, f)
            h = draw_fading(power, antennas, rng_f)
            realization = ChannelRealization(channels=h, power=power,
                                             power_mean=power_mean, design=h)
            if imperfect:
                realization = corrupt_csi(realization, spec.rho,
                                          _rng(spec, grid_key, drop, _STREAM_CSI, f))
            for snr in snr_values:
                for st in spec.strategies:
                    beams = build_beamformers(st, realization, topology, noise[snr],
                                              use_imperfect=imperfect)
                    des, intra, cross = sinr_terms(realization, beams, topology)
                    gamma = des / (noise[snr] + intra + cross)
                    a = acc[(snr, st)]
                    a.add_trial(per_cell_rates(gamma, topology), topology.site_is_macro,
                                gamma.mean())
                    t = terms[(snr, st)]
                    if t is None:
                        terms[(snr, st)] = [des.copy(), intra.copy(), cross.copy()]
                    else:
                        t[0] += des
                        t[1] += intra
                        t[2] += cross
        for (snr, st), t in terms.items():
            per_user = mean_sinr_approx(t[0] / fading_per_drop, t[1] / fading_per_drop,
                                        t[2] / fading_per_drop, noise[snr])
            acc[(snr, st)].approx_values.append(per_user.mean())
    return acc


def _point_rows(spec, acc, x_name, x_value, snr, strategy) -> list:
    a = acc[(snr, strategy)]
    rows = []

    def row(metric, value, stderr):
        rows.append(CurveRow(scenario=spec.scenario, strategy=strategy.value,
                             x_name=x_name, x_value=float(x_value), metric=metric,
                             value=float(value), stderr=float(stderr),
                             trials=spec.trials, seed=spec.base_seed))

    for name in TRIAL_METRICS:
        values = np.asarray(a.trial_values[name])
        if values.size == 0:
            continue
        stderr = values.std(ddof=1) / np.sqrt(values.size) if values.size > 1 else 0.0
        row(name, values.mean(), stderr)
    approx = np.asarray(a.approx_values)
    stderr = approx.std(ddof=1) / np.sqrt(approx.size) if approx.size > 1 else 0.0
    row("mean_sinr_approx", approx.mean(), stderr)
    micro_totals = a.trial_values["microcell_sum_rate"]
    if len(micro_totals) >= 10:
        pct = summarize_percentiles(micro_totals)
        row("microcell_sum_rate_p10", pct["p10"], 0.0)
        row("microcell_sum_rate_p90", pct["p90"], 0.0)
    return rows


def run_experiment(spec: ExperimentSpec) -> CurveTable:
    """Run the scenario over its grid; identical specs give identical tables."""
    cfg = spec.network.validate()
    rows = []
    if spec.scenario == "rate_vs_snr":
        # one topology-grid point, all SNR values share realizations
        acc = _evaluate_point(spec, cfg, grid_key=0, n_micro=cfg.num_microcells,
                              snr_values=spec.snr_grid_db)
        for snr in spec.snr_grid_db:
            for st in spec.strategies:
                rows.extend(_point_rows(spec, acc, "snr_db", snr, snr, st))
    else:
        if spec.scenario == "edge_multi_macro":
            cfg = dataclasses.replace(cfg, microcell_placement="edge_annulus")
        snr = spec.snr_grid_db[0]
        for count in spec.microcell_counts:
            acc = _evaluate_point(spec, cfg, grid_key=count, n_micro=count,
                                  snr_values=(snr,))
            for st in spec.strategies:
                rows.extend(_point_rows(spec, acc, "num_microcells", count, snr, st))
    return CurveTable(rows=rows)


def grid_point_trials(spec: ExperimentSpec, n_micro: int, snr_db: float) -> dict:
    """Per-trial metric values for one grid point (testing / inspection).

    Returns {strategy: {metric: array of per-trial values}}.
    """
    cfg = spec.network.validate()
    if spec.scenario == "edge_multi_macro":
        cfg = dataclasses.replace(cfg, microcell_placement="edge_annulus")
    grid_key = 0 if spec.scenario == "rate_vs_snr" else n_micro
    acc = _evaluate_point(spec, cfg, grid_key=grid_key, n_micro=n_micro,
                          snr_values=(snr_db,))
    return {st: {name: np.asarray(vals) for name, vals in acc[(snr_db, st)].trial_values.items()}
            for st in spec.strategies}
