"""Piecewise-linear remapping of chaotic samples before phase modulation.

A table is a strictly increasing map g of [0, 1] onto itself, stored as
samples s_k = g(k / p). Transmitted subcarrier symbols are exp(2*pi*j*g(z)),
so only differences g(z1) - g(z2) matter for detection and the all-important
distance spectrum. The identity table leaves the codec's natural geometry
untouched; optimized tables reshape it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MIN_GAP = 1e-6  # smallest admissible s_{k+1} - s_k
_GAP_SLACK = 1e-12  # absorbs round-trip rounding of saved tables


class TableConstraintError(ValueError):
    """A sample vector that is not a valid remapping table."""

    def __init__(self, index: int, reason: str):
        self.index = index
        self.reason = reason
        super().__init__(f"sample {index}: {reason}")


@dataclass(frozen=True)
class ConjugationTable:
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 1 or s.size < 2:
            raise TableConstraintError(0, "need a 1-D vector of at least 2 samples")
        if not np.all(np.isfinite(s)):
            raise TableConstraintError(int(np.flatnonzero(~np.isfinite(s))[0]), "non-finite sample")
        if s[0] != 0.0:
            raise TableConstraintError(0, "first sample must be exactly 0")
        if s[-1] != 1.0:
            raise TableConstraintError(s.size - 1, "last sample must be exactly 1")
        gaps = np.diff(s)
        bad = np.flatnonzero(gaps < MIN_GAP - _GAP_SLACK)
        if bad.size:
            k = int(bad[0])
            raise TableConstraintError(
                k + 1, f"gap {gaps[k]:.3g} below minimum {MIN_GAP:g}"
            )
        s = s.copy()
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def p(self) -> int:
        """Number of grid intervals."""
        return self.samples.size - 1

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.samples.size)

    @classmethod
    def identity(cls, p: int) -> "ConjugationTable":
        return cls(np.linspace(0.0, 1.0, p + 1))

    def __call__(self, z):
        """g(z) by linear interpolation between table samples."""
        return np.interp(z, self.grid, self.samples)

    def phase(self, z) -> np.ndarray:
        """Unit phasor exp(2*pi*j*g(z))."""
        return np.exp(2j * np.pi * self(z))

    def min_gap(self) -> float:
        return float(np.diff(self.samples).min())


def make_table(samples) -> ConjugationTable:
    return ConjugationTable(np.asarray(samples, dtype=float))


def phase_map(z, table: ConjugationTable | None = None) -> np.ndarray:
    """Map grid samples to subcarrier phasors, identity table by default."""
    if table is None:
        return np.exp(2j * np.pi * np.asarray(z, dtype=float))
    return table.phase(z)


def save_lut(path, table: ConjugationTable) -> None:
    with open(path, "w") as fh:
        fh.write("index,z,s\n")
        for k, (z, s) in enumerate(zip(table.grid, table.samples)):
            fh.write(f"{k},{z:.15g},{s:.15g}\n")


def load_lut(path) -> ConjugationTable:
    rows = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "index,z,s":
            raise ValueError(f"unexpected header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            _, z, s = line.split(",")
            rows.append((float(z), float(s)))
    z = np.array([r[0] for r in rows])
    s = np.array([r[1] for r in rows])
    if not np.allclose(z, np.linspace(0.0, 1.0, z.size), atol=1e-9):
        raise ValueError("z column must be a uniform grid over [0, 1]")
    # snap endpoints: the constructor wants them exact
    s[0] = round(s[0], 12)
    s[-1] = round(s[-1], 12)
    return ConjugationTable(s)
