import numpy as np
import pytest

from ccmlab import encode_block, multi_tent, viterbi_decode


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile the jitted trellis kernels once, before anything timed runs
    p = multi_tent()
    bits = np.random.default_rng(0).integers(0, 2, 64)
    z = encode_block(p, bits)
    viterbi_decode(p, z.astype(np.complex128))
