"""Hot-kernel backend selection.

The compiled Cython extension is used when present; otherwise the pure-NumPy
implementation takes over.  Set HETCOORD_PURE=1 to force the fallback (used by
the benchmark and the backend-equivalence tests).
"""

import os

from . import pure

try:
    from . import _core
except ImportError:  # extension not built; pure fallback
    _core = None

_force_pure = os.environ.get("HETCOORD_PURE", "") not in ("", "0")

if _core is not None and not _force_pure:
    _impl = _core
    BACKEND = "compiled"
else:
    _impl = pure
    BACKEND = "pure"

slnr_beamformers = _impl.slnr_beamformers
pair_gains = _impl.pair_gains

__all__ = ["slnr_beamformers", "pair_gains", "BACKEND", "pure"]
