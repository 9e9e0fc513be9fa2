"""Error-loop census and union-bound checks.

Loop counts and histograms are frozen from an independent breadth-first
search over the difference trellis; bound values are pinned after being
cross-checked against Monte Carlo link runs at two operating points.
"""

import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import erfc

from ccmlab import (
    BoundConfig,
    NoiseStats,
    distance_spectrum,
    distance_table,
    enumerate_loops,
    multi_tent,
    pairwise_distance,
    pb_bound,
    pep,
    transition_table,
    trellis_walk,
)

LENGTH_CENSUS = {7: 1, 8: 1, 9: 2, 10: 4, 11: 8, 12: 16}
WEIGHT_CENSUS = {2: 1, 3: 2, 4: 3, 5: 8, 6: 11, 7: 6, 8: 1}

# identity remapping, no distortion; six significant digits
CLEAN_BOUND = {4: 1.15202e-3, 6: 2.42395e-5, 8: 1.39999e-7, 10: 1.04636e-10}


@pytest.fixture(scope="module")
def loops():
    return enumerate_loops(multi_tent(), 12)


def test_loop_census(loops):
    assert len(loops) == 32
    assert Counter(lp.length for lp in loops) == LENGTH_CENSUS
    assert Counter(lp.weight for lp in loops) == WEIGHT_CENSUS
    for lp in loops:
        assert lp.bits[0] == 1 and lp.bits[-1] == 0
        assert lp.length == lp.n_branches + 1


def test_loops_close_in_difference_trellis(loops):
    # the error word, walked as a state sequence, must remerge exactly once
    tbl = transition_table(multi_tent())
    for lp in loops:
        states = trellis_walk(np.array(lp.bits, dtype=np.int64), tbl)
        assert states[-1] == 0
        assert np.all(states[:-1] != 0)


def test_loops_sorted_and_unique(loops):
    keys = [(lp.length, lp.bits) for lp in loops]
    assert keys == sorted(keys)
    assert len(set(lp.bits for lp in loops)) == 32


def test_pairwise_distance_values():
    assert pairwise_distance(0.0, 0.5) == pytest.approx(4.0)
    assert pairwise_distance(0.0, 0.25) == pytest.approx(2.0)
    assert pairwise_distance(0.3, 0.3) == 0.0
    # wraps: fractions 0 and 1 are the same phasor
    assert pairwise_distance(0.0, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_distance_table_geometry():
    d2 = distance_table(multi_tent())
    assert d2.shape == (64, 64)
    np.testing.assert_allclose(d2, d2.T)
    assert np.all(np.diag(d2) == 0.0)
    assert d2[0, 32] == pytest.approx(4.0)  # fractions 0 and 1/2


def test_pep_matches_antipodal_reference():
    # gain-1 clean channel: distance-4 pairs reproduce the 2-point formula
    for ebn0 in (0.0, 4.0, 8.0):
        gamma = 10 ** (ebn0 / 10)
        got = pep(4.0, NoiseStats.clean(ebn0))
        assert got == pytest.approx(0.5 * erfc(math.sqrt(gamma)), rel=1e-12)


def test_pep_degenerate_noise():
    dead = NoiseStats(1.0, 0.0, 0.0)
    np.testing.assert_array_equal(
        pep(np.array([0.0, 1.0, 9.0]), dead), [0.5, 0.0, 0.0]
    )


@given(
    st.floats(0.0, 50.0),
    st.floats(0.0, 50.0),
    st.floats(1e-6, 10.0),
    st.floats(1e-6, 10.0),
)
def test_pep_monotone_in_distance_and_noise(d2a, d2b, va, vb):
    lo, hi = sorted((d2a, d2b))
    quiet, loud = sorted((va, vb))
    assert pep(hi, NoiseStats(1.0, 0.0, quiet)) <= pep(lo, NoiseStats(1.0, 0.0, quiet))
    assert pep(lo, NoiseStats(1.0, 0.0, quiet)) <= pep(lo, NoiseStats(1.0, 0.0, loud))
    assert 0.0 <= pep(lo, NoiseStats(1.0, 0.0, quiet)) <= 0.5


@pytest.mark.parametrize("ebn0,expect", sorted(CLEAN_BOUND.items()))
def test_exact_bound_clean_channel(ebn0, expect):
    got = pb_bound(multi_tent(), NoiseStats.clean(ebn0))
    assert got == pytest.approx(expect, rel=1e-5)


def test_subsampled_tracks_exact():
    params = multi_tent()
    noise = NoiseStats.clean(10.0)
    exact = pb_bound(params, noise)
    sub = pb_bound(params, noise, cfg=BoundConfig.subsampled(count=4096, seed=0))
    assert abs(sub - exact) / exact < 0.15


def test_subsampled_is_deterministic_per_seed():
    params = multi_tent()
    noise = NoiseStats.clean(8.0)
    a = pb_bound(params, noise, cfg=BoundConfig.subsampled(count=512, seed=7))
    b = pb_bound(params, noise, cfg=BoundConfig.subsampled(count=512, seed=7))
    c = pb_bound(params, noise, cfg=BoundConfig.subsampled(count=512, seed=8))
    assert a == b
    assert a != c


def test_collapsed_table_warns_and_saturates():
    flat = lambda z: np.zeros_like(z)  # noqa: E731 - any callable on z works
    with pytest.warns(RuntimeWarning, match="collapsed"):
        val = pb_bound(multi_tent(), NoiseStats.clean(10.0), table=flat)
    # every pairwise error comes out at 1/2, so the sum is half the weight mass
    assert val == pytest.approx(sum(w * n for w, n in WEIGHT_CENSUS.items()) / 2)


def test_distance_spectrum_identity():
    spec = distance_spectrum(multi_tent())
    assert spec.min_d2 == pytest.approx(6.928697746775298, rel=1e-12)
    assert spec.max_d2 == pytest.approx(35.19338630349259, rel=1e-12)
    assert spec.mass.sum() == pytest.approx(1.0)
    assert spec.edges[-1] >= spec.max_d2
