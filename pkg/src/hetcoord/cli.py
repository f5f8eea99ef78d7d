"""Command-line entry point.

Example:
    hetcoord --scenario rate_vs_snr --strategy full,no_coord \
             --snr 0:40:5 --trials 2000 --seed 7 --format csv --out curves.csv

Exit codes: 0 success, 2 configuration error, 3 infeasible placement,
4 output error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import NetworkConfig, load_config
from .errors import ConfigError, EmitError, PlacementInfeasible
from .harness import ExperimentSpec, run_experiment
from .results import emit_results

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PLACEMENT = 3
EXIT_EMIT = 4


def _parse_grid(text: str, elem=float) -> tuple:
    """Accept '0,5,10' or 'start:stop:step' (stop inclusive)."""
    text = text.strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) == 2:
            start, stop, step = parts[0], parts[1], 1.0
        elif len(parts) == 3:
            start, stop, step = parts
        else:
            raise ValueError(f"bad grid spec {text!r}")
        if step <= 0:
            raise ValueError("grid step must be > 0")
        n = int(round((stop - start) / step))
        vals = [start + i * step for i in range(n + 1)]
    else:
        vals = [float(p) for p in text.split(",") if p.strip()]
    return tuple(elem(v) for v in vals)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hetcoord",
                                description="Two-tier downlink coordination simulator")
    p.add_argument("--config", help="YAML config file; flags override file values")
    p.add_argument("--scenario", help="rate_vs_snr | sinr_vs_density | rate_vs_density | edge_multi_macro")
    p.add_argument("--strategy", help="comma list: no_coord,full,macro_only,no_inter_tier")
    p.add_argument("--snr", help="SNR grid in dB: '0,10,20' or '-10:40:5'")
    p.add_argument("--microcells", help="microcell-count grid: '2' or '1:10'")
    p.add_argument("--macros", type=int, choices=(1, 3), help="number of macrocells")
    p.add_argument("--rho", type=float, help="CSI quality in [0,1]; 1 = perfect")
    p.add_argument("--trials", type=int, help="Monte Carlo trials per grid point")
    p.add_argument("--drops", type=int, help="freeze layout/shadowing per drop; must divide trials")
    p.add_argument("--seed", type=int, help="base seed")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--out", default=None, help="output path, or '-' for stdout")
    return p


def _apply_overrides(cfg: NetworkConfig, args) -> NetworkConfig:
    updates = {}
    if args.scenario is not None:
        updates["scenario"] = args.scenario
    if args.strategy is not None:
        updates["strategies"] = tuple(s.strip() for s in args.strategy.split(",") if s.strip())
    if args.snr is not None:
        try:
            updates["snr_grid_db"] = _parse_grid(args.snr, float)
        except ValueError as exc:
            raise ConfigError("snr_grid_db", str(exc)) from exc
    if args.microcells is not None:
        try:
            updates["microcell_counts"] = _parse_grid(args.microcells, lambda v: int(round(v)))
        except ValueError as exc:
            raise ConfigError("microcell_counts", str(exc)) from exc
    if args.macros is not None:
        updates["num_macrocells"] = args.macros
    if args.rho is not None:
        updates["rho"] = args.rho
    if args.trials is not None:
        updates["trials"] = args.trials
    if args.drops is not None:
        updates["drops"] = args.drops
    if args.seed is not None:
        updates["base_seed"] = args.seed
    return dataclasses.replace(cfg, **updates).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else NetworkConfig()
        cfg = _apply_overrides(cfg, args)
        # density scenarios sweep counts; the swept count overrides the static one
        spec = ExperimentSpec.from_config(cfg)
        table = run_experiment(spec)
        emit_results(table, format=args.format or "csv", destination=args.out or "-")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PlacementInfeasible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PLACEMENT
    except EmitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMIT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
