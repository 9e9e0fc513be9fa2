import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ccmlab import (
    CcmParams,
    encode_block,
    encode_states,
    multi_tent,
    next_state,
    recursion_step,
    state_to_z,
    state_values,
    tent_map,
    transition_table,
    viterbi_decode,
)


def test_register_update_examples():
    p = multi_tent()
    assert next_state(p, 0, 0) == 0
    assert next_state(p, 1, 0) == 2
    assert next_state(p, 32, 0) == 62
    assert next_state(p, 0, 1) == 33
    assert next_state(p, 32, 1) == 31


def test_transition_table_matches_scalar_update():
    p = multi_tent(5)
    tbl = transition_table(p)
    assert tbl.shape == (32, 2)
    for s in range(32):
        for b in range(2):
            assert tbl[s, b] == next_state(p, s, b)
    with pytest.raises(ValueError):
        tbl[0, 0] = 1  # read-only


def test_param_validation():
    with pytest.raises(ValueError):
        CcmParams(taps=(1, 1, 1, 1, 1))
    with pytest.raises(ValueError):
        CcmParams(taps=(1, 1, 2, 1, 1, 1))
    with pytest.raises(ValueError):
        CcmParams(taps=(1,) * 6, q=1)


@given(
    q=st.integers(2, 8),
    s1=st.integers(0, 2**8 - 1),
    s2=st.integers(0, 2**8 - 1),
    b1=st.integers(0, 1),
    b2=st.integers(0, 1),
)
def test_xor_linearity(q, s1, s2, b1, b2):
    # the register update is linear over GF(2); error loops rely on this
    p = multi_tent(q)
    mask = p.n_states - 1
    s1 &= mask
    s2 &= mask
    lhs = next_state(p, s1 ^ s2, b1 ^ b2)
    rhs = next_state(p, s1, b1) ^ next_state(p, s2, b2)
    assert lhs == rhs


def test_tent_map_branch_values():
    assert tent_map(0.0, 0) == 0.0
    assert tent_map(0.5, 0) == 1.0
    assert tent_map(0.25, 0) == 0.5
    assert tent_map(0.0, 1) == 0.5
    assert tent_map(0.5, 1) == pytest.approx(0.5)
    # x = 3/4 hits the wrap seam: 1.5 - 1/2 = 1 folds to 0
    assert tent_map(0.75, 1) == pytest.approx(0.0, abs=1e-15)
    assert tent_map(0.125, 1) == pytest.approx(0.75)


@pytest.mark.parametrize("q", [4, 5, 6])
def test_trellis_tracks_recursion_one_step(q):
    # trellis state vs one exact recursion step from the previous trellis
    # state: circular error at most one grid step either side of a fold
    p = multi_tent(q)
    rng = np.random.default_rng(123)
    bits = rng.integers(0, 2, 10000)
    z = encode_block(p, bits)
    prev = np.concatenate([[0.0], z[:-1]])
    pred = recursion_step(p, prev, bits)
    diff = np.abs(z - pred)
    circ = np.minimum(diff, 1.0 - diff)
    assert circ.max() <= 2.0 ** (1 - q) + 1e-12


def test_encode_states_and_values():
    p = multi_tent()
    bits = np.array([1, 0, 0, 0])
    states = encode_states(p, bits)
    assert states.tolist() == [33, 60, 6, 12]
    np.testing.assert_allclose(encode_block(p, bits), states / 64.0)
    np.testing.assert_allclose(state_values(p), np.arange(64) / 64.0)
    assert state_to_z(p, 32) == 0.5


def test_encode_rejects_non_binary():
    with pytest.raises(ValueError):
        encode_states(multi_tent(), np.array([0, 1, 2]))


def test_viterbi_recovers_noiseless_bits():
    p = multi_tent()
    rng = np.random.default_rng(5)
    bits = rng.integers(0, 2, 2000, dtype=np.int64)
    z = encode_block(p, bits).astype(np.complex128)
    est = viterbi_decode(p, z)
    np.testing.assert_array_equal(est, bits)


def test_viterbi_with_small_noise_and_gain():
    p = multi_tent()
    rng = np.random.default_rng(6)
    bits = rng.integers(0, 2, 2000, dtype=np.int64)
    z = encode_block(p, bits)
    r = 0.37 * z + rng.normal(0, 1e-3, z.size)
    est = viterbi_decode(p, r.astype(np.complex128), gain=0.37)
    np.testing.assert_array_equal(est, bits)
