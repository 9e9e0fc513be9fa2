"""End-to-end Monte Carlo link: bits to waveform to clipped LED to decisions.

One processing block is a full interleaved multiplex (12700 symbols by
default). Seeding is hierarchical: block k of a run draws its data and its
noise from children of SeedSequence((noise_seed, k)), so any block can be
reproduced in isolation and adding blocks never reshuffles earlier ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .baselines import bpsk_demodulate, bpsk_modulate, tcm_decode, tcm_encode
from .bound import BoundConfig, NoiseStats, pb_bound
from .ccm import CcmParams, encode_block, multi_tent, state_values, transition_table
from .conjugation import ConjugationTable, phase_map
from .led import (
    LedTransfer,
    characterize,
    equivalent_ebn0_db,
    ideal_predistortion,
    noise_var,
)
from .ofdm import Interleaver, OfdmParams, ofdm_demodulate, ofdm_modulate
from .viterbi import ml_sequence_decode

SCHEMES = ("ccm", "bpsk", "tcm")


@dataclass(frozen=True)
class LinkConfig:
    scheme: str = "ccm"
    led: LedTransfer | None = None  # None: no front end, plain AWGN
    ibo_db: float = 0.0
    predistorted: bool = False
    table: ConjugationTable | None = None  # ccm only
    params: CcmParams = multi_tent()
    ofdm: OfdmParams = OfdmParams()
    interleaver_seed: int = 1
    noise_seed: int = 2
    min_errors: int = 100
    max_bits: float = 1e8

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")


@dataclass(frozen=True)
class BerPoint:
    ebn0_db: float
    bits: int
    errors: int
    ber: float
    equivalent_ebn0_db: float
    gain: float
    sigma_eta_sq: float
    flag: str  # "ok" once min_errors reached, else "low_errors"


def front_end(cfg: LinkConfig):
    """(nonlinearity, gain, distortion variance) for a config; nl may be None."""
    if cfg.led is None:
        return None, 1.0, 0.0
    led = ideal_predistortion(cfg.led) if cfg.predistorted else cfg.led
    nl, stats = characterize(led, cfg.ibo_db, cfg.ofdm.sample_power)
    return nl, stats.gain, stats.distortion_var


def _encode(cfg: LinkConfig, bits: np.ndarray) -> np.ndarray:
    if cfg.scheme == "ccm":
        return phase_map(encode_block(cfg.params, bits), cfg.table)
    if cfg.scheme == "bpsk":
        return bpsk_modulate(bits)
    return tcm_encode(bits)


def _decode(cfg: LinkConfig, received: np.ndarray, gain: float) -> np.ndarray:
    if cfg.scheme == "ccm":
        tbl = transition_table(cfg.params)
        branch = phase_map(state_values(cfg.params), cfg.table)[tbl]
        return ml_sequence_decode(received, gain, tbl, branch)
    if cfg.scheme == "bpsk":
        return bpsk_demodulate(received)
    return tcm_decode(received, gain)


def _block_errors(cfg, nl, gain, sn, il, block_idx: int) -> int:
    bits_ss, noise_ss = np.random.SeedSequence((cfg.noise_seed, block_idx)).spawn(2)
    bits = np.random.default_rng(bits_ss).integers(
        0, 2, cfg.ofdm.block_len, dtype=np.int64
    )
    x = ofdm_modulate(cfg.ofdm, il.apply(_encode(cfg, bits)))
    if nl is not None:
        x = nl.apply(x)
    if sn > 0.0:
        # real channel noise: 2 sigma_n^2 per time sample, sigma_n^2 per
        # subcarrier dimension after the unitary transform
        x = x + np.random.default_rng(noise_ss).normal(
            0.0, math.sqrt(2.0 * sn), x.size
        )
    r = il.invert(ofdm_demodulate(cfg.ofdm, x))
    est = _decode(cfg, r, gain)
    return int(np.count_nonzero(est != bits.astype(est.dtype)))


def run_block(cfg: LinkConfig, ebn0_db: float, block_idx: int) -> int:
    """Errors in one block, reproducible in isolation: the block index alone
    fixes its data and noise, so partial runs can be fanned out and recombined
    in any order."""
    nl, gain, _ = front_end(cfg)
    il = Interleaver.make(cfg.interleaver_seed, cfg.ofdm.block_len)
    return _block_errors(cfg, nl, gain, noise_var(gain, 1.0, ebn0_db), il, block_idx)


def run_link(cfg: LinkConfig, ebn0_db: float) -> BerPoint:
    """Accumulate blocks at one operating point until the stop rule fires."""
    nl, gain, eta = front_end(cfg)
    sn = noise_var(gain, 1.0, ebn0_db)
    il = Interleaver.make(cfg.interleaver_seed, cfg.ofdm.block_len)
    n_bits = 0
    n_err = 0
    block = 0
    while n_err < cfg.min_errors and n_bits < cfg.max_bits:
        n_err += _block_errors(cfg, nl, gain, sn, il, block)
        n_bits += cfg.ofdm.block_len
        block += 1
    return BerPoint(
        ebn0_db=ebn0_db,
        bits=n_bits,
        errors=n_err,
        ber=n_err / n_bits,
        equivalent_ebn0_db=equivalent_ebn0_db(gain, 1.0, eta, sn),
        gain=gain,
        sigma_eta_sq=eta,
        flag="ok" if n_err >= cfg.min_errors else "low_errors",
    )


def sweep(cfg: LinkConfig, ebn0_db_list) -> list[BerPoint]:
    return [run_link(cfg, e) for e in ebn0_db_list]


def bound_curve(
    cfg: LinkConfig, ebn0_db_list, bound_cfg: BoundConfig | None = None
) -> np.ndarray:
    """Analytic bound at each operating point of a ccm config."""
    _, gain, eta = front_end(cfg)
    out = np.empty(len(ebn0_db_list))
    shared = bound_cfg if bound_cfg is not None else BoundConfig.exact()
    for i, e in enumerate(ebn0_db_list):
        noise = NoiseStats(gain, eta, noise_var(gain, 1.0, e))
        out[i] = pb_bound(cfg.params, noise, cfg.table, shared)
    return out


BER_CSV_HEADER = "ebn0_db,bits,errors,ber,equivalent_ebn0_db,C,sigma_eta_sq,flag"


def write_ber_csv(fh, points) -> None:
    fh.write(BER_CSV_HEADER + "\n")
    for p in points:
        fh.write(
            f"{p.ebn0_db:g},{p.bits},{p.errors},{p.ber:.6g},"
            f"{p.equivalent_ebn0_db:.6g},{p.gain:.8g},{p.sigma_eta_sq:.8g},{p.flag}\n"
        )


def required_ebn0(ebn0_db, ber, target: float) -> float:
    """Eb/N0 where a measured curve crosses a target rate, by interpolating
    ebn0 against log10(ber); nan when the curve never gets there."""
    e = np.asarray(ebn0_db, dtype=float)
    b = np.asarray(ber, dtype=float)
    for i in range(1, b.size):
        if b[i - 1] > target >= b[i]:
            if b[i] <= 0.0:
                return float(e[i])
            lo, hi = math.log10(b[i - 1]), math.log10(b[i])
            frac = (math.log10(target) - lo) / (hi - lo)
            return float(e[i - 1] + frac * (e[i] - e[i - 1]))
    return math.nan


def with_scheme(cfg: LinkConfig, scheme: str) -> LinkConfig:
    return replace(cfg, scheme=scheme)
