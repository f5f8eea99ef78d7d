"""Pure-NumPy reference implementations of the hot kernels.

Used as the fallback when the compiled extension is unavailable and as the
ground truth the compiled kernels are tested against.
"""

import numpy as np


def slnr_beamformers(design, mask, noise_var, served):
    """Unit-norm leakage-based beamformers for one BS.

    design    : (U, Z) complex128, channel rows from this BS to every user
    mask      : (k, U) bool, leakage rows to include per served user
    noise_var : (k,) float64, regularizer per served user
    served    : (k,) int64, global user index per served user

    Returns (k, Z) complex128 with unit-norm rows: each row solves
    (M^H M + sigma^2 I) w = conj(h) for the masked row block M, normalized.
    """
    design = np.ascontiguousarray(design)
    mask = np.asarray(mask).astype(bool)
    k, z = len(served), design.shape[1]
    out = np.empty((k, z), dtype=np.complex128)
    eye = np.eye(z)
    for a in range(k):
        rows = design[mask[a]]
        gram = rows.conj().T @ rows + noise_var[a] * eye
        w = np.linalg.solve(gram, design[served[a]].conj())
        out[a] = w / np.linalg.norm(w)
    return out


def pair_gains(channels, vectors):
    """|h_u w_q|^2 for every (user, beam) pair.

    channels : (U, Z) complex128
    vectors  : (k, Z) complex128
    Returns (U, k) float64.
    """
    return np.abs(channels @ vectors.T) ** 2
