"""DC-biased optical OFDM framing: Hermitian spectrum, real time waveform.

Data symbols occupy bins 1 .. n_fft/2 - 1; bin 0 (DC) and bin n_fft/2 are
forced to zero and the upper half carries the mirrored conjugates, so the
unitary IFFT output is real. With unit-power symbols the time-domain sample
power is (n_fft - 2) / n_fft.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class OfdmParams:
    n_fft: int = 256
    block_len: int = 12700  # data symbols per processing block

    def __post_init__(self):
        if self.n_fft < 4 or self.n_fft % 2:
            raise ValueError("n_fft must be even and at least 4")
        if self.block_len % self.bins:
            raise ValueError(
                f"block_len must be a multiple of {self.bins} data bins"
            )

    @property
    def bins(self) -> int:
        return self.n_fft // 2 - 1

    @property
    def n_blocks(self) -> int:
        return self.block_len // self.bins

    @property
    def n_samples(self) -> int:
        return self.n_blocks * self.n_fft

    @property
    def sample_power(self) -> float:
        """Time-domain power of the multiplex for unit-power data symbols."""
        return (self.n_fft - 2) / self.n_fft


@dataclass(frozen=True)
class Interleaver:
    perm: np.ndarray

    @classmethod
    def make(cls, seed: int, n: int) -> "Interleaver":
        perm = np.random.default_rng(seed).permutation(n)
        perm.setflags(write=False)
        return cls(perm)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x)[self.perm]

    def invert(self, x: np.ndarray) -> np.ndarray:
        out = np.empty_like(np.asarray(x))
        out[self.perm] = x
        return out


def hermitian_extend(syms: np.ndarray, n_fft: int) -> np.ndarray:
    """Fill a length-n_fft spectrum with conjugate symmetry; DC and Nyquist 0."""
    syms = np.asarray(syms, dtype=np.complex128)
    half = n_fft // 2 - 1
    if syms.shape[-1] != half:
        raise ValueError(f"expected {half} data symbols per block")
    spec = np.zeros(syms.shape[:-1] + (n_fft,), dtype=np.complex128)
    spec[..., 1 : half + 1] = syms
    spec[..., half + 2 :] = np.conj(syms[..., ::-1])
    return spec


def ofdm_modulate(params: OfdmParams, syms: np.ndarray) -> np.ndarray:
    """Data symbols (length block_len) to the real time-domain waveform."""
    syms = np.asarray(syms, dtype=np.complex128)
    if syms.shape != (params.block_len,):
        raise ValueError(f"expected {params.block_len} symbols")
    spec = hermitian_extend(syms.reshape(params.n_blocks, params.bins), params.n_fft)
    x = np.fft.ifft(spec, norm="ortho", axis=-1)
    return np.ascontiguousarray(x.real.reshape(-1))


def ofdm_demodulate(params: OfdmParams, samples: np.ndarray) -> np.ndarray:
    """Time-domain samples back to the block_len data symbols."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (params.n_samples,):
        raise ValueError(f"expected {params.n_samples} samples")
    spec = np.fft.fft(samples.reshape(params.n_blocks, params.n_fft), norm="ortho", axis=-1)
    return np.ascontiguousarray(spec[:, 1 : params.bins + 1].reshape(-1))
