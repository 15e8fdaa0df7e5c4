"""Basic hypergeometric series, the Askey-Wilson hierarchy, and a seeded
numerical certifier for the identities that tie them together."""

from . import scalar
from .qseries import (
    QBase,
    SeriesSpec,
    SeriesResult,
    TruncationPolicy,
    phi,
    phi_vdbr,
    vwp_w,
    poch_finite,
    poch_infinite,
    poch_multi,
    poch_complex_index,
)

__version__ = "0.1.0"
