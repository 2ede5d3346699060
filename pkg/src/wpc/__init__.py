"""Weighted parity-check codes: construction, encoding/decoding, parity-bias
calibration, channel simulation, and the calibration-side theory tools."""

from .bias import (
    Constant,
    Explicit,
    Linear,
    NestedExact,
    Threshold,
    ThresholdLinear,
    calibrate,
    expected_hb,
    quantile_vector,
)
from .channels import ChannelModel, CostFn, StateModel, posterior_bias
from .core import (
    CodeParams,
    InfeasibleConstraintsError,
    QueryConfig,
    QueryResult,
    SearchBudgetError,
    log_weight,
    query,
)
from .gf2 import BitMatrix, BitVec, FullRankMatrix, invert, mat_vec, sample_full_rank
from .schemes import (
    SchemeSpec,
    conventional_linear_scheme,
    decode_state,
    embed_wpc_scheme,
    encode_with_state,
    state_scheme,
    wz_decode,
    wz_encode,
    wz_scheme,
)
from .sim import AggregateStats, ExperimentConfig, run_experiment, run_point, wilson_ci
from .theory import (
    CapacityCurve,
    capacity_embedding,
    check_decoding_condition,
    hb,
    hb_inv,
    lemma_intersection_check,
    tilt_solve,
)

__version__ = "0.1.0"
