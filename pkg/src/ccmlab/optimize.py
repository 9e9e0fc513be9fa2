"""Search for a remapping table that minimizes the analytic error bound.

Tables live on a constrained simplex (monotone, pinned endpoints, minimum
gap), so the search runs in an unconstrained logit space: softmax of the
logits gives the gap profile, an affine squeeze onto the delta-grid keeps
every gap above the floor. Zero logits reproduce the identity table
exactly. The objective is the log of the subsampled union bound; the
subsample is frozen per run, so the surface is deterministic and finite
differences are meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .ccm import CcmParams, multi_tent
from .conjugation import MIN_GAP, ConjugationTable
from .led import LedTransfer, characterize, noise_var, reference_led
from .bound import BoundConfig, NoiseStats, pb_bound


@dataclass(frozen=True)
class OptimizeSpec:
    """Run parameters for one table search."""

    params: CcmParams = multi_tent()
    led: LedTransfer | None = None  # None picks the bundled curve
    ibo_db: float = 0.0
    ebn0_db: float = 10.0
    p: int = 64
    l_max: int | None = None  # None: twice the register length
    subsample: int = 4096
    seed: int = 0
    max_iter: int = 60
    fd_step: float = 1e-5
    tol: float = 1e-9

    def resolved_l_max(self) -> int:
        return self.l_max if self.l_max is not None else 2 * self.params.q


def table_from_logits(logits, p: int) -> ConjugationTable:
    """Map p unconstrained logits to a valid table; zeros give the identity."""
    t = np.asarray(logits, dtype=float)
    if t.shape != (p,):
        raise ValueError(f"expected {p} logits")
    w = np.exp(t - t.max())
    w /= w.sum()
    s = np.concatenate([[0.0], np.cumsum(w)])
    s *= 1.0 - p * MIN_GAP
    s += np.arange(p + 1) * MIN_GAP
    s[-1] = 1.0  # cumsum lands within an ulp; pin the endpoint
    return ConjugationTable(s)


def logits_from_table(table: ConjugationTable) -> np.ndarray:
    """Left inverse of table_from_logits, up to the softmax shift freedom."""
    gaps = np.diff(table.samples)
    w = np.maximum((gaps - MIN_GAP) / (1.0 - table.p * MIN_GAP), 1e-15)
    return np.log(w)


def _noise_for(spec: OptimizeSpec) -> NoiseStats:
    led = spec.led if spec.led is not None else reference_led()
    _, stats = characterize(led, spec.ibo_db)
    return NoiseStats(
        stats.gain,
        stats.distortion_var,
        noise_var(stats.gain, 1.0, spec.ebn0_db),
    )


def objective(logits, spec: OptimizeSpec, noise=None, cfg=None) -> float:
    """Log of the subsampled bound for a logit vector."""
    if noise is None:
        noise = _noise_for(spec)
    if cfg is None:
        cfg = BoundConfig.subsampled(spec.resolved_l_max(), spec.subsample, spec.seed)
    table = table_from_logits(logits, spec.p)
    return math.log(pb_bound(spec.params, noise, table, cfg))


@dataclass(frozen=True)
class PlateauSummary:
    """How staircase-like a table is: mass in the widest gaps."""

    top_share: float  # fraction of the unit range inside the 8 widest gaps
    n_wide: int  # gaps wider than 5/p

    @classmethod
    def of(cls, table: ConjugationTable) -> "PlateauSummary":
        gaps = np.diff(table.samples)
        top = np.sort(gaps)[-8:] if gaps.size > 8 else gaps
        return cls(float(top.sum()), int((gaps > 5.0 / table.p).sum()))


@dataclass(frozen=True)
class OptimizeResult:
    table: ConjugationTable
    logits: np.ndarray
    initial_objective: float  # subsampled bound at the start table
    final_objective: float
    initial_bound: float  # exact bound, recomputed for the report
    final_bound: float
    n_iterations: int
    n_evals: int
    converged: bool
    min_gap: float
    plateau: PlateauSummary


def optimize_conjugation(
    spec: OptimizeSpec, start: ConjugationTable | None = None
) -> OptimizeResult:
    noise = _noise_for(spec)
    sub_cfg = BoundConfig.subsampled(spec.resolved_l_max(), spec.subsample, spec.seed)
    exact_cfg = BoundConfig.exact(spec.resolved_l_max())
    t0 = np.zeros(spec.p) if start is None else logits_from_table(start)

    n_evals = 0

    def f(t):
        nonlocal n_evals
        n_evals += 1
        return objective(t, spec, noise, sub_cfg)

    def grad(t):
        # central differences with a fixed absolute step
        g = np.empty_like(t)
        h = spec.fd_step
        for i in range(t.size):
            e = np.zeros_like(t)
            e[i] = h
            g[i] = (f(t + e) - f(t - e)) / (2.0 * h)
        return g

    res = minimize(
        f,
        t0,
        jac=grad,
        method="L-BFGS-B",
        options={"maxiter": spec.max_iter, "ftol": spec.tol},
    )

    start_table = table_from_logits(t0, spec.p)
    final_table = table_from_logits(res.x, spec.p)
    return OptimizeResult(
        table=final_table,
        logits=res.x,
        initial_objective=math.exp(f(t0)),
        final_objective=math.exp(f(res.x)),
        initial_bound=pb_bound(spec.params, noise, start_table, exact_cfg),
        final_bound=pb_bound(spec.params, noise, final_table, exact_cfg),
        n_iterations=int(res.nit),
        n_evals=n_evals,
        converged=bool(res.success),
        min_gap=final_table.min_gap(),
        plateau=PlateauSummary.of(final_table),
    )


def write_report(path, spec: OptimizeSpec, result: OptimizeResult) -> None:
    lines = [
        f"ibo_db = {spec.ibo_db:g}",
        f"ebn0_db = {spec.ebn0_db:g}",
        f"p = {spec.p}",
        f"l_max = {spec.resolved_l_max()}",
        f"subsample = {spec.subsample}",
        f"seed = {spec.seed}",
        f"initial_objective = {result.initial_objective:.6g}",
        f"final_objective = {result.final_objective:.6g}",
        f"initial_bound = {result.initial_bound:.6g}",
        f"final_bound = {result.final_bound:.6g}",
        f"improvement = {result.initial_bound / result.final_bound:.4g}",
        f"iterations = {result.n_iterations}",
        f"evaluations = {result.n_evals}",
        f"converged = {result.converged}",
        f"min_gap = {result.min_gap:.6g}",
        f"top8_gap_share = {result.plateau.top_share:.4g}",
        f"wide_gaps = {result.plateau.n_wide}",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
