"""Union bound on bit error rate from the codec's simple error loops.

The binary encoder is linear over GF(2), so the difference between two
paths walks the same trellis: an error loop is a walk of the difference
state from zero back to zero. Unlike a convolutional code the emitted
symbols are not shift-invariant, so each loop's pairwise error probability
is averaged over initial states and data words, then weighted by the bit
errors it causes. The bound is a raw union sum: near-degenerate remapping
tables can push it far above 1, which is reported as-is.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

from .ccm import CcmParams, state_values, transition_table
from .conjugation import ConjugationTable
from .led import BussgangStats, noise_var


@dataclass(frozen=True)
class ErrorLoop:
    """One split/remerge event, stored as the error word e_1 .. e_B."""

    bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))

    @property
    def n_branches(self) -> int:
        return len(self.bits)

    @property
    def length(self) -> int:
        """Node span of the loop, counting both merged endpoints."""
        return len(self.bits) + 1

    @property
    def weight(self) -> int:
        """Bit errors caused when the wrong side of the loop wins."""
        return sum(self.bits)


def enumerate_loops(params: CcmParams, l_max: int) -> list[ErrorLoop]:
    """All error loops of node span at most l_max, ordered by (length, word)."""
    tbl = transition_table(params)
    max_branches = l_max - 1
    loops: list[ErrorLoop] = []

    def walk(delta: int, word: tuple[int, ...]):
        for e in (0, 1):
            nxt = int(tbl[delta, e])
            w = word + (e,)
            if nxt == 0:
                loops.append(ErrorLoop(w))
            elif len(w) < max_branches:
                walk(nxt, w)

    first = int(tbl[0, 1])
    if first == 0:
        return [ErrorLoop((1,))]
    if max_branches >= 2:
        walk(first, (1,))
    return sorted(loops, key=lambda lp: (lp.length, lp.bits))


@dataclass(frozen=True)
class NoiseStats:
    """Everything the pairwise error probability needs about the channel."""

    gain: float
    distortion_var: float
    noise_var: float

    @property
    def total_var(self) -> float:
        return self.distortion_var + self.noise_var

    @classmethod
    def clean(cls, ebn0_db: float, sym_power: float = 1.0) -> "NoiseStats":
        return cls(1.0, 0.0, noise_var(1.0, sym_power, ebn0_db))

    @classmethod
    def from_bussgang(
        cls, stats: BussgangStats, ebn0_db: float, sym_power: float = 1.0
    ) -> "NoiseStats":
        return cls(
            stats.gain,
            stats.distortion_var,
            noise_var(stats.gain, sym_power, ebn0_db),
        )


def pep(d2, noise: NoiseStats):
    """Pairwise error probability at squared symbol distance d2."""
    d2 = np.asarray(d2, dtype=float)
    total = noise.total_var
    if total <= 0.0:
        return np.where(d2 > 0.0, 0.0, 0.5)
    arg = noise.gain * np.sqrt(d2) / (2.0 * math.sqrt(2.0 * total))
    return 0.5 * erfc(arg)


def pairwise_distance(s1, s2):
    """Squared distance of unit phasors with phase fractions s1, s2."""
    return 4.0 * np.sin(np.pi * (np.asarray(s1) - np.asarray(s2))) ** 2


def distance_table(params: CcmParams, table: ConjugationTable | None = None) -> np.ndarray:
    sv = state_values(params)
    if table is not None:
        sv = np.asarray(table(sv))
    return pairwise_distance(sv[:, None], sv[None, :])


def _loop_distances(params, dist2, loop: ErrorLoop, pairs=None):
    """Squared distance per (initial state, data word) pair for one loop.

    The final data bit steers only the remerged branch, whose symbols agree,
    so words enumerate the first B-1 branches and the last is pinned to 0.
    """
    tbl = transition_table(params)
    nb = loop.n_branches
    n_words = 1 << (nb - 1)
    if pairs is None:
        s = np.repeat(np.arange(params.n_states), n_words)
        w = np.tile(np.arange(n_words), params.n_states)
    else:
        s, w = pairs
        s = np.asarray(s)
        w = np.asarray(w)
    acc = np.zeros(s.size)
    delta = 0
    for i, e in enumerate(loop.bits):
        delta = int(tbl[delta, e])
        b = (w >> i) & 1 if i < nb - 1 else np.zeros_like(w)
        s = tbl[s, b]
        if delta:
            acc += dist2[s, s ^ delta]
    return acc


@dataclass
class BoundConfig:
    """Loop set and averaging strategy for the union sum.

    Subsampled mode draws, once, a fixed without-replacement subset of
    (state, word) pairs per loop; the draw depends only on (seed, loop index)
    so repeated evaluations see identical pairs.
    """

    l_max: int = 12
    mode: str = "exact"
    count: int = 4096
    seed: int = 0
    loops: tuple[ErrorLoop, ...] | None = None
    _pairs: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def exact(cls, l_max: int = 12) -> "BoundConfig":
        return cls(l_max=l_max, mode="exact")

    @classmethod
    def subsampled(cls, l_max: int = 12, count: int = 4096, seed: int = 0) -> "BoundConfig":
        return cls(l_max=l_max, mode="subsampled", count=count, seed=seed)

    def resolve_loops(self, params: CcmParams) -> tuple[ErrorLoop, ...]:
        if self.loops is None:
            self.loops = tuple(enumerate_loops(params, self.l_max))
        return self.loops

    def pairs_for(self, params: CcmParams, idx: int, loop: ErrorLoop):
        if idx not in self._pairs:
            n_words = 1 << (loop.n_branches - 1)
            total = params.n_states * n_words
            n = min(self.count, total)
            rng = np.random.default_rng(np.random.SeedSequence((self.seed, idx)))
            sel = np.sort(rng.choice(total, size=n, replace=False))
            self._pairs[idx] = (sel // n_words, sel % n_words)
        return self._pairs[idx]


def pb_bound(
    params: CcmParams,
    noise: NoiseStats,
    table: ConjugationTable | None = None,
    cfg: BoundConfig | None = None,
) -> float:
    """Weighted union sum over all loops; raw, not clipped at 1."""
    if cfg is None:
        cfg = BoundConfig.exact()
    loops = cfg.resolve_loops(params)
    dist2 = distance_table(params, table)
    total = 0.0
    for idx, loop in enumerate(loops):
        pairs = (
            cfg.pairs_for(params, idx, loop) if cfg.mode == "subsampled" else None
        )
        d2 = _loop_distances(params, dist2, loop, pairs)
        if d2.max() < 1e-24:
            warnings.warn(
                f"loop {idx} ({loop.bits}): symbol distances collapsed, "
                "bound is degenerate",
                RuntimeWarning,
                stacklevel=2,
            )
        total += loop.weight * float(np.mean(pep(d2, noise)))
    return total


@dataclass(frozen=True)
class DistanceSpectrum:
    edges: np.ndarray
    mass: np.ndarray  # weight-normalized, sums to 1
    min_d2: float
    max_d2: float


def distance_spectrum(
    params: CcmParams,
    table: ConjugationTable | None = None,
    l_max: int = 12,
    bin_width: float = 0.25,
) -> DistanceSpectrum:
    """Weight-weighted histogram of loop distances under a remapping table."""
    dist2 = distance_table(params, table)
    chunks = []
    wts = []
    for loop in enumerate_loops(params, l_max):
        d2 = _loop_distances(params, dist2, loop)
        chunks.append(d2)
        wts.append(np.full(d2.size, loop.weight / d2.size))
    d = np.concatenate(chunks)
    w = np.concatenate(wts)
    w /= w.sum()
    hi = max(math.ceil(float(d.max()) / bin_width), 1) * bin_width
    edges = np.arange(0.0, hi + bin_width / 2, bin_width)
    mass, _ = np.histogram(d, bins=edges, weights=w)
    return DistanceSpectrum(edges, mass, float(d.min()), float(d.max()))
