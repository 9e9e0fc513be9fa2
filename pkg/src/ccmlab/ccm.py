"""Chaotic trellis codec on the dyadic grid.

The modulator is a perturbed one-dimensional chaotic recursion

    z_i = f(z_{i-1}, b_i) + b_i * 2**-q   (mod 1)

restricted to the grid {m * 2**-q}. On that grid the recursion is exactly a
2**q-state binary trellis, which is what everything downstream (detection,
distance bounds, waveform synthesis) actually uses. States are kept as
integers m; bit k-1 of m holds the register v_k, so the top bit is v_q and
z = m * 2**-q.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .viterbi import ml_sequence_decode, trellis_walk


@dataclass(frozen=True)
class CcmParams:
    """Tap vector u1..u6 and register length q of the chaotic codec."""

    taps: tuple[int, int, int, int, int, int]
    q: int = 6

    def __post_init__(self):
        if len(self.taps) != 6 or any(t not in (0, 1) for t in self.taps):
            raise ValueError("taps must be six 0/1 values")
        if self.q < 2:
            raise ValueError("q must be at least 2")

    @property
    def n_states(self) -> int:
        return 1 << self.q


def multi_tent(q: int = 6) -> CcmParams:
    """All-ones taps: the multi-tent-map codec used throughout."""
    return CcmParams(taps=(1, 1, 1, 1, 1, 1), q=q)


def next_state(params: CcmParams, state: int, bit: int) -> int:
    """One register update of the binary encoder.

    v_q' = u1 v_q ^ u2 v_{q-1} ^ u3 b
    v_j' = u4 v_{j-1} ^ u5 v_q   for j = q-1 .. 2  (shift toward the MSB)
    v_1' = u6 b
    """
    q = params.q
    u1, u2, u3, u4, u5, u6 = params.taps
    v_q = (state >> (q - 1)) & 1
    v_qm1 = (state >> (q - 2)) & 1
    top = (u1 & v_q) ^ (u2 & v_qm1) ^ (u3 & bit)
    mid_mask = ((1 << (q - 1)) - 1) & ~1  # bits 1 .. q-2
    mid = (state << 1) & mid_mask if u4 else 0
    if u5 & v_q:
        mid ^= mid_mask
    return (top << (q - 1)) | mid | (u6 & bit)


@lru_cache(maxsize=None)
def _table_cached(params: CcmParams) -> np.ndarray:
    t = np.empty((params.n_states, 2), dtype=np.int64)
    for s in range(params.n_states):
        t[s, 0] = next_state(params, s, 0)
        t[s, 1] = next_state(params, s, 1)
    t.setflags(write=False)
    return t


def transition_table(params: CcmParams) -> np.ndarray:
    """(n_states, 2) next-state table; read-only and cached per parameter set."""
    return _table_cached(params)


def state_to_z(params: CcmParams, state) -> np.ndarray | float:
    """Map integer state(s) m to the grid point z = m * 2**-q."""
    return np.asarray(state) * 2.0 ** -params.q


def state_values(params: CcmParams) -> np.ndarray:
    return state_to_z(params, np.arange(params.n_states))


def encode_states(params: CcmParams, bits: np.ndarray, start: int = 0) -> np.ndarray:
    """Integer state sequence produced by a bit block (state after each bit)."""
    return trellis_walk(bits, transition_table(params), start)


def encode_block(params: CcmParams, bits: np.ndarray, start: int = 0) -> np.ndarray:
    """Chaotic sample sequence z_1..z_n for a bit block."""
    return state_to_z(params, encode_states(params, bits, start))


def tent_map(z, bit):
    """Branch maps of the multi-tent recursion (continuous part).

    bit 0: 1 - |2z - 1|; bit 1: (3/2 - |2z - 1|) mod 1.
    """
    z = np.asarray(z, dtype=float)
    base = np.abs(2.0 * z - 1.0)
    return np.where(np.asarray(bit) == 0, 1.0 - base, (1.5 - base) % 1.0)


def recursion_step(params: CcmParams, z, bit):
    """Full perturbed recursion: f(z, b) + b * 2**-q, folded into [0, 1)."""
    return (tent_map(z, bit) + np.asarray(bit) * 2.0 ** -params.q) % 1.0


def viterbi_decode(
    params: CcmParams, received: np.ndarray, gain: float = 1.0
) -> np.ndarray:
    """ML bit detection of a chaotic block observed in noise (real symbols)."""
    zs = state_values(params)
    tbl = transition_table(params)
    syms = zs[tbl].astype(np.complex128)
    return ml_sequence_decode(received, gain, tbl, syms)
