import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ccmlab import (
    Interleaver,
    OfdmParams,
    hermitian_extend,
    ofdm_demodulate,
    ofdm_modulate,
)


def test_default_geometry():
    p = OfdmParams()
    assert p.bins == 127
    assert p.n_blocks == 100
    assert p.n_samples == 25600
    assert p.sample_power == pytest.approx(254 / 256)


def test_param_validation():
    with pytest.raises(ValueError):
        OfdmParams(n_fft=255, block_len=12700)
    with pytest.raises(ValueError):
        OfdmParams(n_fft=256, block_len=12701)


def test_hermitian_spectrum_structure():
    rng = np.random.default_rng(3)
    syms = rng.normal(size=7) + 1j * rng.normal(size=7)
    spec = hermitian_extend(syms, 16)
    assert spec[0] == 0 and spec[8] == 0
    np.testing.assert_allclose(spec[1:8], syms)
    np.testing.assert_allclose(spec[9:], np.conj(syms[::-1]))


def test_waveform_is_real_and_round_trips():
    p = OfdmParams()
    rng = np.random.default_rng(4)
    syms = np.exp(2j * np.pi * rng.random(p.block_len))
    x = ofdm_modulate(p, syms)
    assert x.dtype == np.float64
    back = ofdm_demodulate(p, x)
    assert np.max(np.abs(back - syms)) < 1e-9


def test_sample_power_matches_parseval():
    p = OfdmParams()
    rng = np.random.default_rng(8)
    syms = np.exp(2j * np.pi * rng.random(p.block_len))
    x = ofdm_modulate(p, syms)
    assert np.mean(x**2) == pytest.approx(p.sample_power, rel=1e-12)


def test_dc_offset_never_reaches_data_bins():
    p = OfdmParams(n_fft=16, block_len=70)
    rng = np.random.default_rng(9)
    syms = np.exp(2j * np.pi * rng.random(p.block_len))
    x = ofdm_modulate(p, syms)
    shifted = ofdm_demodulate(p, x + 0.37)
    np.testing.assert_allclose(shifted, ofdm_demodulate(p, x), atol=1e-12)


@given(st.integers(0, 2**32 - 1), st.integers(1, 300))
def test_interleaver_round_trip(seed, n):
    il = Interleaver.make(seed, n)
    x = np.arange(n, dtype=float)
    np.testing.assert_array_equal(il.invert(il.apply(x)), x)
    np.testing.assert_array_equal(il.apply(il.invert(x)), x)


def test_interleaver_is_seeded_permutation():
    il = Interleaver.make(1, 12700)
    il2 = Interleaver.make(1, 12700)
    np.testing.assert_array_equal(il.perm, il2.perm)
    assert sorted(il.perm.tolist()) == list(range(12700))
    assert not np.array_equal(il.perm, Interleaver.make(2, 12700).perm)
