"""Shared integer-state trellis kernels: encoder walk and ML sequence detection.

Both the chaos codec and the convolutional baseline are binary-input trellises,
so they share one Viterbi kernel. Branch symbols are indexed [state, bit] and
compared against the received samples under a known complex gain.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _walk(bits, table, start):
    n = bits.shape[0]
    out = np.empty(n, np.int64)
    s = start
    for i in range(n):
        s = table[s, bits[i]]
        out[i] = s
    return out


def trellis_walk(bits: np.ndarray, table: np.ndarray, start: int = 0) -> np.ndarray:
    """State sequence visited when feeding bits through a transition table."""
    bits = np.ascontiguousarray(bits, dtype=np.int64)
    if bits.size and (bits.min() < 0 or bits.max() > 1):
        raise ValueError("bits must be 0/1")
    return _walk(bits, np.ascontiguousarray(table, dtype=np.int64), start)


@njit(cache=True)
def _viterbi(rr, ri, sym_re, sym_im, table, gain):
    n = rr.shape[0]
    n_states = table.shape[0]
    metric = np.full(n_states, np.inf)
    metric[0] = 0.0
    prev_state = np.zeros((n, n_states), np.int16)
    prev_bit = np.zeros((n, n_states), np.uint8)
    for i in range(n):
        new = np.full(n_states, np.inf)
        for s in range(n_states):
            m = metric[s]
            if m == np.inf:
                continue
            for b in range(2):
                t = table[s, b]
                dr = rr[i] - gain * sym_re[s, b]
                di = ri[i] - gain * sym_im[s, b]
                cand = m + dr * dr + di * di
                if cand < new[t]:
                    new[t] = cand
                    prev_state[i, t] = s
                    prev_bit[i, t] = b
        metric = new
    bits = np.empty(n, np.uint8)
    s = np.argmin(metric)
    for i in range(n - 1, -1, -1):
        bits[i] = prev_bit[i, s]
        s = prev_state[i, s]
    return bits


def ml_sequence_decode(
    received: np.ndarray,
    gain: float,
    table: np.ndarray,
    branch_syms: np.ndarray,
) -> np.ndarray:
    """Most likely bit sequence under the metric sum |r_i - gain*sym|^2.

    The search starts in the all-zero state and the terminal state is free;
    traceback runs over the whole block.
    """
    r = np.ascontiguousarray(received, dtype=np.complex128)
    if not np.all(np.isfinite(r.view(np.float64))):
        raise ValueError("received samples must be finite")
    if not np.isfinite(gain):
        raise ValueError("gain must be finite")
    syms = np.asarray(branch_syms, dtype=np.complex128)
    if syms.shape != (table.shape[0], 2):
        raise ValueError("branch symbol table must be shaped (n_states, 2)")
    return _viterbi(
        np.ascontiguousarray(r.real),
        np.ascontiguousarray(r.imag),
        np.ascontiguousarray(syms.real),
        np.ascontiguousarray(syms.imag),
        np.ascontiguousarray(table, dtype=np.int64),
        float(gain),
    )
