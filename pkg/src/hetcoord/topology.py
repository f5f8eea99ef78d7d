"""Stochastic network layout: cell sites, user drops, and link distances."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import NetworkConfig
from .errors import PlacementInfeasible

MACRO = "macro"
MICRO = "micro"

# Per-tier defaults: antennas, ERP [dBm], served users
_TIER_DEFAULTS = {
    MACRO: (4, 46.0, 6),
    MICRO: (2, 30.0, 4),
}


@dataclass
class CellSite:
    id: int
    kind: str                      # "macro" | "micro"
    position: np.ndarray           # shape (2,), meters
    radius_m: float
    erp_dbm: float
    num_antennas: int
    num_users: int

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float)
        if self.radius_m <= 0:
            raise ValueError("radius_m must be > 0")
        if self.num_antennas < 1 or self.num_users < 1:
            raise ValueError("num_antennas and num_users must be >= 1")

    @property
    def erp_mw(self) -> float:
        return 10.0 ** (self.erp_dbm / 10.0)

    @classmethod
    def make(cls, id, kind, position, radius_m, **overrides):
        z, erp, k = _TIER_DEFAULTS[kind]
        return cls(id=id, kind=kind, position=np.asarray(position, float), radius_m=radius_m,
                   erp_dbm=overrides.get("erp_dbm", erp),
                   num_antennas=overrides.get("num_antennas", z),
                   num_users=overrides.get("num_users", k))


@dataclass
class UserTerminal:
    id: int
    serving_cell: int
    position: np.ndarray           # shape (2,), meters
    noise_variance: float | None = None   # filled by the harness per SNR point

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float)


@dataclass
class Topology:
    sites: list
    users: list
    distances: np.ndarray          # (num_sites, num_users), exact Euclidean meters
    # Derived lookups
    serving: np.ndarray = field(init=False)        # (U,) site index per user
    site_is_macro: np.ndarray = field(init=False)  # (N,) bool
    served: list = field(init=False)               # per site, (k_n,) user indices

    def __post_init__(self):
        self.serving = np.array([u.serving_cell for u in self.users], dtype=np.int64)
        self.site_is_macro = np.array([s.kind == MACRO for s in self.sites], dtype=bool)
        self.served = [np.flatnonzero(self.serving == n) for n in range(len(self.sites))]

    @property
    def num_sites(self) -> int:
        return len(self.sites)

    @property
    def num_users(self) -> int:
        return len(self.users)

    def user_positions(self) -> np.ndarray:
        return np.array([u.position for u in self.users])


def _sample_in_disc(rng, radius, inner=0.0):
    r = np.sqrt(rng.uniform(inner**2, radius**2))
    theta = rng.uniform(0.0, 2.0 * np.pi)
    return np.array([r * np.cos(theta), r * np.sin(theta)])


def place_microcells(macro: CellSite, count: int, mode: str, rng,
                     micro_radius_m: float = 70.0,
                     annulus_inner_m: float = 877.0,
                     existing_positions=(),
                     attempt_budget: int = 10_000,
                     start_id: int = 1,
                     **site_overrides) -> list:
    """Drop `count` microcell sites inside the macro disc (or its edge annulus).

    Uniform rejection sampling; centers of any two microcells (including those
    in `existing_positions`) must be at least 2 * micro_radius_m apart.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    min_sep = 2.0 * micro_radius_m
    placed = [np.asarray(p, float) for p in existing_positions]
    sites = []
    for i in range(count):
        for _ in range(attempt_budget):
            if mode == "edge_annulus":
                offset = _sample_in_disc(rng, macro.radius_m, inner=annulus_inner_m)
            elif mode == "anywhere":
                offset = _sample_in_disc(rng, macro.radius_m)
            else:
                raise ValueError(f"unknown placement mode {mode!r}")
            pos = macro.position + offset
            if all(np.linalg.norm(pos - q) >= min_sep for q in placed):
                placed.append(pos)
                sites.append(CellSite.make(start_id + i, MICRO, pos, micro_radius_m, **site_overrides))
                break
        else:
            raise PlacementInfeasible(
                f"could not place microcell {i + 1}/{count} (mode={mode}) "
                f"within {attempt_budget} attempts")
    return sites


def drop_users(site: CellSite, rng, exclusion_m: float = 1.0, start_id: int = 0) -> list:
    """Place site.num_users terminals uniformly over the site's disc, keeping
    an exclusion radius around the BS."""
    users = []
    for i in range(site.num_users):
        pos = site.position + _sample_in_disc(rng, site.radius_m, inner=exclusion_m)
        users.append(UserTerminal(id=start_id + i, serving_cell=site.id, position=pos))
    return users


def _macro_positions(num_macrocells: int, side_m: float = 1000.0) -> list:
    if num_macrocells == 1:
        return [np.array([0.0, 0.0])]
    if num_macrocells == 3:
        # Equilateral triangle, primary macro at the origin.
        return [np.array([0.0, 0.0]),
                np.array([side_m, 0.0]),
                np.array([side_m / 2.0, side_m * np.sqrt(3.0) / 2.0])]
    raise ValueError("num_macrocells must be 1 or 3")


def build_topology(config: NetworkConfig, rng, num_microcells: int | None = None) -> Topology:
    """Generate one layout draw: macro site(s), microcells, users, distances.

    Microcells are hosted by the primary macro (site 0); in edge mode they land
    in its edge annulus.  `num_microcells` overrides the config count so density
    sweeps can reuse one config.
    """
    n_micro = config.num_microcells if num_microcells is None else num_microcells
    sites = []
    for pos in _macro_positions(config.num_macrocells, side_m=1000.0):
        sites.append(CellSite.make(len(sites), MACRO, pos, config.macro_radius_m,
                                   erp_dbm=config.macro_erp_dbm,
                                   num_antennas=config.macro_antennas,
                                   num_users=config.macro_users))
    host = sites[0]
    sites.extend(place_microcells(
        host, n_micro, config.microcell_placement, rng,
        micro_radius_m=config.micro_radius_m,
        annulus_inner_m=config.edge_annulus_inner_m,
        attempt_budget=config.placement_attempts,
        start_id=len(sites),
        erp_dbm=config.micro_erp_dbm,
        num_antennas=config.micro_antennas,
        num_users=config.micro_users))
    users = []
    for site in sites:
        users.extend(drop_users(site, rng, exclusion_m=config.reference_distance_m,
                                start_id=len(users)))
    upos = np.array([u.position for u in users])
    spos = np.array([s.position for s in sites])
    distances = np.linalg.norm(spos[:, None, :] - upos[None, :, :], axis=2)
    return Topology(sites=sites, users=users, distances=distances)
