"""Chaotic trellis modulation over clipped optical OFDM.

A perturbed chaotic recursion on a dyadic grid doubles as a 64-state trellis
code; its samples ride intensity-modulated OFDM through a biased LED. The
package covers the codec, the clipped-LED statistics, an analytic error
bound built from the codec's error loops, a bound-driven remapping-table
optimizer, and a Monte Carlo link with uncoded and convolutional baselines.
"""

from .baselines import bpsk_demodulate, bpsk_modulate, tcm_decode, tcm_encode
from .bound import (
    BoundConfig,
    DistanceSpectrum,
    ErrorLoop,
    NoiseStats,
    distance_spectrum,
    distance_table,
    enumerate_loops,
    pairwise_distance,
    pb_bound,
    pep,
)
from .ccm import (
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
from .conjugation import (
    MIN_GAP,
    ConjugationTable,
    TableConstraintError,
    load_lut,
    make_table,
    phase_map,
    save_lut,
)
from .led import (
    DEFAULT_SAMPLE_POWER,
    BussgangStats,
    LedTransfer,
    ShiftedNonlinearity,
    bussgang_closed_form,
    bussgang_numeric,
    characterize,
    equivalent_ebn0_db,
    ibo_to_rho,
    ideal_predistortion,
    load_led,
    noise_var,
    recenter,
    reference_led,
    save_led,
)
from .link import (
    BER_CSV_HEADER,
    BerPoint,
    LinkConfig,
    bound_curve,
    front_end,
    required_ebn0,
    run_block,
    run_link,
    sweep,
    with_scheme,
    write_ber_csv,
)
from .ofdm import (
    Interleaver,
    OfdmParams,
    hermitian_extend,
    ofdm_demodulate,
    ofdm_modulate,
)
from .optimize import (
    OptimizeResult,
    OptimizeSpec,
    PlateauSummary,
    logits_from_table,
    objective,
    optimize_conjugation,
    table_from_logits,
    write_report,
)
from .viterbi import ml_sequence_decode, trellis_walk

__version__ = "0.1.0"
