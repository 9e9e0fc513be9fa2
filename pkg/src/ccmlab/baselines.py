"""Reference schemes at the same one bit per subcarrier: uncoded BPSK and a
64-state rate-1/4 convolutional code on Gray-mapped 16-QAM."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .viterbi import ml_sequence_decode, trellis_walk

# rate-1/4 feedforward generators, constraint length 7, octal, MSB = newest bit
TCM_GENERATORS = (0o127, 0o171, 0o155, 0o177)

# Gray 2-bit to PAM4; pairs (g1 g2) -> I and (g3 g4) -> Q, unit average power
_PAM = {(0, 0): -3.0, (0, 1): -1.0, (1, 1): 1.0, (1, 0): 3.0}
_QAM_SCALE = 1.0 / np.sqrt(10.0)


def bpsk_modulate(bits) -> np.ndarray:
    return (1.0 - 2.0 * np.asarray(bits)).astype(np.complex128)


def bpsk_demodulate(received) -> np.ndarray:
    return (np.real(received) < 0.0).astype(np.uint8)


@lru_cache(maxsize=1)
def tcm_tables() -> tuple[np.ndarray, np.ndarray]:
    """Next-state and branch-symbol tables of the coded modulation."""
    n_states = 64
    table = np.empty((n_states, 2), dtype=np.int64)
    syms = np.empty((n_states, 2), dtype=np.complex128)
    for s in range(n_states):
        for b in range(2):
            w = (b << 6) | s
            table[s, b] = w >> 1
            g1, g2, g3, g4 = ((w & g).bit_count() & 1 for g in TCM_GENERATORS)
            syms[s, b] = (_PAM[(g1, g2)] + 1j * _PAM[(g3, g4)]) * _QAM_SCALE
    table.setflags(write=False)
    syms.setflags(write=False)
    return table, syms


def tcm_encode(bits) -> np.ndarray:
    table, syms = tcm_tables()
    bits = np.ascontiguousarray(bits, dtype=np.int64)
    states = trellis_walk(bits, table)
    prev = np.concatenate([[0], states[:-1]])
    return syms[prev, bits]


def tcm_decode(received, gain: float = 1.0) -> np.ndarray:
    table, syms = tcm_tables()
    return ml_sequence_decode(received, gain, table, syms)
