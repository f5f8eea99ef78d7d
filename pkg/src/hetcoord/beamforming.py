"""Leakage-based transmit beamforming under four coordination strategies.

Each BS serves its own users with unit-norm vectors w = normalize(
(M^H M + sigma^2 I)^{-1} h^*), where the rows of M are the channels the BS
tries not to leak onto.  The coordination strategy decides which rows go in:

  no_coord       own-cell co-users only
  full           own-cell co-users plus every other cell's users
  macro_only     macro BS behaves like `full`, micro BSs like `no_coord`
  no_inter_tier  macro BS like `no_coord`; micro BSs add other microcells'
                 users (cross-tier links are assumed absent, see metrics)
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from . import kernels
from .channel import ChannelRealization
from .errors import DomainError
from .topology import Topology


class Strategy(enum.Enum):
    NO_COORD = "no_coord"
    FULL = "full"
    MACRO_ONLY = "macro_only"
    NO_INTER_TIER = "no_inter_tier"

    @classmethod
    def parse(cls, name) -> "Strategy":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name))
        except ValueError:
            valid = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown strategy {name!r}; expected one of: {valid}") from None


def leakage_masks(strategy: Strategy, topology: Topology) -> list:
    """Per-BS boolean masks (k_n, U): which users' channels enter the leakage
    block of each served user's beamformer."""
    strategy = Strategy.parse(strategy)
    n_users = topology.num_users
    user_is_macro = topology.site_is_macro[topology.serving]
    masks = []
    for n, site in enumerate(topology.sites):
        served = topology.served[n]
        mask = np.zeros((len(served), n_users), dtype=bool)
        for a, k in enumerate(served):
            if strategy is Strategy.NO_COORD:
                mask[a, served] = True
            elif strategy is Strategy.FULL:
                mask[a, :] = True
            elif strategy is Strategy.MACRO_ONLY:
                if site.kind == "macro":
                    mask[a, :] = True
                else:
                    mask[a, served] = True
            elif strategy is Strategy.NO_INTER_TIER:
                if site.kind == "macro":
                    mask[a, served] = True
                else:
                    mask[a, ~user_is_macro] = True
            mask[a, k] = False
        masks.append(mask)
    return masks


def concatenated_channel(strategy, bs: int, user: int,
                         channels: ChannelRealization, topology: Topology,
                         use_imperfect: bool = False) -> np.ndarray:
    """The stacked leakage rows for one (BS, served user) pair, ordered by
    global user id.  Shape (m, Z_bs); m may be zero."""
    if topology.serving[user] != bs:
        raise ValueError(f"BS {bs} does not serve user {user}")
    masks = leakage_masks(strategy, topology)
    served = topology.served[bs]
    a = int(np.flatnonzero(served == user)[0])
    source = channels.design if use_imperfect else channels.channels
    return source[bs][masks[bs][a]]


def slnr_beamformer(desired: np.ndarray, leakage: np.ndarray, noise_variance: float) -> np.ndarray:
    """Unit-norm beamformer maximizing the signal-to-leakage-plus-noise ratio.

    Solves (leakage^H leakage + sigma^2 I) w = desired^* via a Cholesky
    factorization (the regularized Gram matrix is Hermitian positive definite),
    then normalizes.  With no leakage rows this reduces to the matched filter.
    """
    if noise_variance <= 0:
        raise DomainError(f"noise_variance must be > 0, got {noise_variance}")
    desired = np.asarray(desired, dtype=np.complex128).ravel()
    z = desired.shape[0]
    leakage = np.asarray(leakage, dtype=np.complex128).reshape(-1, z)
    gram = leakage.conj().T @ leakage + noise_variance * np.eye(z)
    w = cho_solve(cho_factor(gram, lower=True), desired.conj())
    return w / np.linalg.norm(w)


def slnr(w: np.ndarray, desired: np.ndarray, leakage: np.ndarray, noise_variance: float) -> float:
    """The ratio |h w|^2 / (sigma^2 + sum_rows |row w|^2) for a unit-norm w."""
    w = np.asarray(w).ravel()
    desired = np.asarray(desired).ravel()
    leakage = np.asarray(leakage).reshape(-1, w.shape[0])
    num = np.abs(desired @ w) ** 2
    leak = np.abs(leakage @ w) ** 2 if leakage.size else np.zeros(0)
    return float(num / (noise_variance + leak.sum()))


@dataclass
class BeamformerSet:
    """Unit-norm precoding vectors for every (BS, served user) pair.

    vectors[n] has shape (k_n, Z_n), ordered like topology.served[n].
    """
    vectors: list
    strategy: Strategy
    design_rho: float = 1.0   # 1.0 means built from perfect CSI

    @property
    def built_from(self) -> str:
        return "perfect" if self.design_rho == 1.0 else f"imperfect(rho={self.design_rho})"


def build_beamformers(strategy, channels: ChannelRealization, topology: Topology,
                      noise_var: np.ndarray, use_imperfect: bool = False) -> BeamformerSet:
    """Beamformers for every (BS, served user) pair from the design-side CSI.

    noise_var is the per-user noise floor (the regularizer uses the served
    user's own value).  When use_imperfect is set, only the corrupted design
    copies are consulted.
    """
    strategy = Strategy.parse(strategy)
    noise_var = np.asarray(noise_var, dtype=np.float64)
    if np.any(noise_var <= 0):
        raise DomainError("noise variances must be > 0")
    source = channels.design if use_imperfect else channels.channels
    masks = leakage_masks(strategy, topology)
    vectors = []
    for n in range(topology.num_sites):
        served = topology.served[n]
        design = np.ascontiguousarray(source[n])
        mask = np.ascontiguousarray(masks[n], dtype=np.uint8)
        vectors.append(kernels.slnr_beamformers(design, mask, noise_var[served],
                                                served.astype(np.int64)))
    rho = channels.rho if use_imperfect else 1.0
    return BeamformerSet(vectors=vectors, strategy=strategy, design_rho=rho)
