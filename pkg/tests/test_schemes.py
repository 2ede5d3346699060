import numpy as np
import pytest

from wpc.bias import NestedExact, calibrate, quantile_vector
from wpc.channels import ChannelModel, StateModel, sample_state, transmit
from wpc.core import CodeParams, InfeasibleConstraintsError
from wpc.gf2 import BitVec, mat_vec, random_bitvec, sample_full_rank
from wpc.schemes import (
    conventional_linear_scheme,
    decode_state,
    embed_wpc_scheme,
    encode_with_state,
    nested_alpha,
    wz_decode,
    wz_encode,
    wz_scheme,
)
from wpc.theory import hb

from oracle import exhaustive_query, nested_decode, nested_encode


def make_params(rng, n, k):
    return CodeParams(n, k, sample_full_rank(n, rng))


def embed_q_tail(n, k, alpha):
    target = min((1.0 - hb(alpha)) / (1.0 - k / n), 1.0)
    return quantile_vector(calibrate("threshold-linear", target), n - k)


# ------------------------------------------------------------- linear scheme


def test_linear_scheme_encodes_fixed_codeword():
    rng = np.random.default_rng(0)
    n, k = 9, 3
    params = make_params(rng, n, k)
    scheme = conventional_linear_scheme(n, k, beta=0.1)
    for mv in range(1 << k):
        m = BitVec(mv, k)
        x = encode_with_state(m, np.zeros(n, dtype=np.int64), scheme, params)
        t = BitVec(mv << (n - k), n)
        assert x == params.matrix.codeword_for_syndrome(t)


def test_linear_scheme_noiseless_round_trip_all_messages():
    rng = np.random.default_rng(1)
    n = 8
    for k in range(2, n):
        params = make_params(rng, n, k)
        scheme = conventional_linear_scheme(n, k, beta=0.0)
        s = np.zeros(n, dtype=np.int64)
        for mv in range(1 << k):
            m = BitVec(mv, k)
            x = encode_with_state(m, s, scheme, params)
            assert decode_state(x.to_array(), scheme, params) == m


# -------------------------------------------------------------- embed scheme


def test_embed_message_bits_are_pinned():
    rng = np.random.default_rng(2)
    n, k, alpha = 12, 4, 0.15
    params = make_params(rng, n, k)
    scheme = embed_wpc_scheme(n, k, alpha, 0.05, embed_q_tail(n, k, alpha))
    for _ in range(20):
        m = random_bitvec(k, rng)
        s = sample_state(StateModel.bernoulli(0.5), n, rng)
        x = encode_with_state(m, s, scheme, params)
        assert mat_vec(params.matrix.h, x).prefix(k) == m


def test_embed_alpha_zero_feasibility():
    rng = np.random.default_rng(3)
    n, k = 10, 3
    params = make_params(rng, n, k)
    q_tail = np.full(n - k, 0.5)
    scheme = embed_wpc_scheme(n, k, 0.0, 0.05, q_tail)
    hits = misses = 0
    for _ in range(200):
        m = random_bitvec(k, rng)
        s = sample_state(StateModel.bernoulli(0.5), n, rng)
        s_vec = BitVec.from_array(s)
        consistent = mat_vec(params.matrix.h, s_vec).prefix(k) == m
        try:
            x = encode_with_state(m, s, scheme, params)
            assert consistent
            assert x == s_vec  # zero cost: the state itself
            hits += 1
        except InfeasibleConstraintsError:
            assert not consistent
            misses += 1
    assert hits > 0 and misses > 0


def test_embed_encoder_matches_exhaustive_oracle_small():
    rng = np.random.default_rng(4)
    n, k, alpha = 12, 4, 0.1
    q_tail = embed_q_tail(n, k, alpha)
    scheme = embed_wpc_scheme(n, k, alpha, 0.05, q_tail)
    for _ in range(200):
        params = make_params(rng, n, k)
        m = random_bitvec(k, rng)
        s = sample_state(StateModel.bernoulli(0.5), n, rng)
        x = encode_with_state(m, s, scheme, params)
        want, _, _ = exhaustive_query(
            params,
            scheme.enc_codeword_bias(m, s),
            scheme.enc_parity_bias(m, s),
        )
        assert x == want


def test_embed_encoder_matches_exhaustive_oracle_n20():
    rng = np.random.default_rng(5)
    n, k, alpha = 20, 4, 0.1
    q_tail = embed_q_tail(n, k, alpha)
    scheme = embed_wpc_scheme(n, k, alpha, 0.05, q_tail)
    for _ in range(2):
        params = make_params(rng, n, k)
        m = random_bitvec(k, rng)
        s = sample_state(StateModel.bernoulli(0.5), n, rng)
        x = encode_with_state(m, s, scheme, params)
        want, _, _ = exhaustive_query(
            params,
            scheme.enc_codeword_bias(m, s),
            scheme.enc_parity_bias(m, s),
        )
        assert x == want
        # encoder cost agrees with the oracle's cost exactly
        assert (x.value ^ BitVec.from_array(s).value).bit_count() == (
            want.value ^ BitVec.from_array(s).value
        ).bit_count()


def test_embed_decoder_matches_exhaustive_oracle():
    rng = np.random.default_rng(6)
    n, k, alpha, beta = 12, 4, 0.12, 0.05
    q_tail = embed_q_tail(n, k, alpha)
    scheme = embed_wpc_scheme(n, k, alpha, beta, q_tail)
    ch = ChannelModel.bsc(beta)
    state_model = StateModel.bernoulli(0.5)
    for _ in range(300):
        params = make_params(rng, n, k)
        m = random_bitvec(k, rng)
        s = sample_state(state_model, n, rng)
        x = encode_with_state(m, s, scheme, params)
        y = transmit(ch, s, x, rng)
        mhat = decode_state(y, scheme, params)
        xhat, _, _ = exhaustive_query(
            params, scheme.dec_codeword_bias(y), scheme.dec_parity_bias(y)
        )
        assert mhat == mat_vec(params.matrix.h, xhat).prefix(k)


def test_embed_decoder_matches_exhaustive_oracle_n20():
    rng = np.random.default_rng(7)
    n, k, alpha, beta = 20, 4, 0.1, 0.05
    q_tail = embed_q_tail(n, k, alpha)
    scheme = embed_wpc_scheme(n, k, alpha, beta, q_tail)
    ch = ChannelModel.bsc(beta)
    state_model = StateModel.bernoulli(0.5)
    matches = 0
    for _ in range(25):
        params = make_params(rng, n, k)
        m = random_bitvec(k, rng)
        s = sample_state(state_model, n, rng)
        x = encode_with_state(m, s, scheme, params)
        y = transmit(ch, s, x, rng)
        mhat = decode_state(y, scheme, params)
        xhat, _, _ = exhaustive_query(
            params, scheme.dec_codeword_bias(y), scheme.dec_parity_bias(y)
        )
        assert mhat == mat_vec(params.matrix.h, xhat).prefix(k)
        matches += 1
    assert matches == 25


# ------------------------------------------------------------ nested scheme


def test_nested_equivalence_small():
    rng = np.random.default_rng(8)
    n, k, beta = 10, 3, 0.05
    ch = ChannelModel.bsc(beta)
    state_model = StateModel.bernoulli(0.5)
    for ktilde in (0, 2):
        q_tail = quantile_vector(NestedExact(ktilde, n - k), n - k)
        scheme = embed_wpc_scheme(n, k, nested_alpha, beta, q_tail)
        for _ in range(100):
            params = make_params(rng, n, k)
            m = random_bitvec(k, rng)
            s = sample_state(state_model, n, rng)
            x = encode_with_state(m, s, scheme, params)
            assert x == nested_encode(params, ktilde, m, s)
            y = transmit(ch, s, x, rng)
            assert decode_state(y, scheme, params) == nested_decode(params, ktilde, y)


# ---------------------------------------------------------------- Wyner-Ziv


def test_wz_hard_codeword_bias_returns_source():
    rng = np.random.default_rng(9)
    n, k = 10, 4
    params = make_params(rng, n, k)
    scheme = wz_scheme(n, k, np.array([0.0, 1.0]), np.array([0.3, 0.7]), np.full(n - k, 0.5))
    x = sample_state(StateModel.bernoulli(0.5), n, rng)
    m, z = wz_encode(x, scheme, params)
    assert z == BitVec.from_array(x)
    assert m == mat_vec(params.matrix.h, z).prefix(k)


def test_wz_all_soft_ties_give_zero_and_offset_prefix():
    rng = np.random.default_rng(10)
    n, k = 10, 4
    fr = sample_full_rank(n, rng)
    offset = BitVec(int(rng.integers(0, 1 << n)), n)
    params = CodeParams(n, k, fr, offset)
    scheme = wz_scheme(n, k, np.array([0.5, 0.5]), np.array([0.3, 0.7]), np.full(n - k, 0.5))
    x = sample_state(StateModel.bernoulli(0.5), n, rng)
    m, z = wz_encode(x, scheme, params)
    assert z == BitVec.zeros(n)
    assert m == offset.prefix(k)


def test_wz_decoder_pins_message_coset():
    rng = np.random.default_rng(11)
    n, k, alpha_z, delta = 12, 6, 0.1, 0.2
    rate = k / n
    target = 1.0 - hb(alpha_z) / (1.0 - rate)
    q_tail = quantile_vector(calibrate("threshold-linear", target), n - k)
    p_e = np.array([alpha_z, 1.0 - alpha_z])
    p_x1_y = np.array([delta, 1.0 - delta])
    p_d = p_x1_y * (1.0 - alpha_z) + (1.0 - p_x1_y) * alpha_z
    scheme = wz_scheme(n, k, p_e, p_d, q_tail)
    for _ in range(100):
        params = make_params(rng, n, k)
        x = sample_state(StateModel.bernoulli(0.5), n, rng)
        noise = sample_state(StateModel.bernoulli(delta), n, rng)
        y = x ^ noise
        m, z = wz_encode(x, scheme, params)
        zhat = wz_decode(m, y, scheme, params)
        assert mat_vec(params.matrix.h, zhat).prefix(k) == m
        # oracle agreement on the decode
        want, _, _ = exhaustive_query(
            params, scheme.dec_codeword_bias(y, m), scheme.dec_parity_bias(y, m)
        )
        assert zhat == want


def test_wz_infeasible_when_message_contradicts_hard_side_info():
    rng = np.random.default_rng(12)
    n, k = 8, 3
    params = make_params(rng, n, k)
    # decoder side info pins z = y exactly; message bits must then agree
    scheme = wz_scheme(n, k, np.array([0.1, 0.9]), np.array([0.0, 1.0]), np.full(n - k, 0.5))
    y = sample_state(StateModel.bernoulli(0.5), n, rng)
    true_m = mat_vec(params.matrix.h, BitVec.from_array(y)).prefix(k)
    bad_m = true_m ^ BitVec(1, k)
    assert wz_decode(true_m, y, scheme, params) == BitVec.from_array(y)
    with pytest.raises(InfeasibleConstraintsError):
        wz_decode(bad_m, y, scheme, params)
