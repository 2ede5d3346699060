"""Codec assemblies: bias-function bundles for the plain-channel,
channel-with-state and Wyner-Ziv settings, plus the encode/decode
operations themselves."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import CodeParams, DEFAULT_QUERY_CONFIG, QueryConfig, as_bias, query
from .gf2 import BitVec, mat_vec

__all__ = [
    "SchemeSpec",
    "encode_with_state",
    "decode_state",
    "wz_encode",
    "wz_decode",
    "conventional_linear_scheme",
    "state_scheme",
    "embed_wpc_scheme",
    "nested_alpha",
    "wz_scheme",
]

# Any value in (0, 1/2) makes the encoder codeword weight strictly
# decreasing in Hamming distance to the state, so the nested baseline's
# min-distance behaviour does not depend on the choice.
nested_alpha = 0.25


@dataclass(frozen=True)
class SchemeSpec:
    """The four bias functions of a scheme.

    For state settings the encoder callables take (message, state) and the
    decoder callables take (output,); for Wyner-Ziv the encoder callables
    take (source,) and the decoder callables take (side_info, message).
    """

    enc_codeword_bias: Callable[..., np.ndarray]
    enc_parity_bias: Callable[..., np.ndarray]
    dec_codeword_bias: Callable[..., np.ndarray]
    dec_parity_bias: Callable[..., np.ndarray]
    label: str = ""


def _message_bits(m: BitVec) -> np.ndarray:
    return m.to_array().astype(np.float64)


def encode_with_state(
    m: BitVec,
    s: np.ndarray,
    scheme: SchemeSpec,
    params: CodeParams,
    config: QueryConfig = DEFAULT_QUERY_CONFIG,
) -> BitVec:
    """Codeword for message m given the noncausal state sequence s."""
    if m.n != params.k:
        raise ValueError("message length must equal k")
    s = np.asarray(s)
    if s.shape != (params.n,):
        raise ValueError("state length must equal n")
    p = as_bias(scheme.enc_codeword_bias(m, s), params.n)
    q = as_bias(scheme.enc_parity_bias(m, s), params.n)
    return query(params, p, q, config).x


def decode_state(
    y: np.ndarray,
    scheme: SchemeSpec,
    params: CodeParams,
    config: QueryConfig = DEFAULT_QUERY_CONFIG,
) -> BitVec:
    """Recover the message: the first k syndrome bits of the best candidate."""
    y = np.asarray(y)
    if y.shape != (params.n,):
        raise ValueError("output length must equal n")
    p = as_bias(scheme.dec_codeword_bias(y), params.n)
    q = as_bias(scheme.dec_parity_bias(y), params.n)
    xhat = query(params, p, q, config).x
    synd = mat_vec(params.matrix.h, xhat) ^ params.offset
    return synd.prefix(params.k)


def wz_encode(
    x: np.ndarray,
    scheme: SchemeSpec,
    params: CodeParams,
    config: QueryConfig = DEFAULT_QUERY_CONFIG,
) -> tuple[BitVec, BitVec]:
    """Compress the source x: returns (message, chosen representation z)."""
    x = np.asarray(x)
    if x.shape != (params.n,):
        raise ValueError("source length must equal n")
    p = as_bias(scheme.enc_codeword_bias(x), params.n)
    q = as_bias(scheme.enc_parity_bias(x), params.n)
    z = query(params, p, q, config).x
    synd = mat_vec(params.matrix.h, z) ^ params.offset
    return synd.prefix(params.k), z


def wz_decode(
    m: BitVec,
    y: np.ndarray,
    scheme: SchemeSpec,
    params: CodeParams,
    config: QueryConfig = DEFAULT_QUERY_CONFIG,
) -> BitVec:
    """Reconstruct z from the message and side information."""
    if m.n != params.k:
        raise ValueError("message length must equal k")
    y = np.asarray(y)
    if y.shape != (params.n,):
        raise ValueError("side information length must equal n")
    p = as_bias(scheme.dec_codeword_bias(y, m), params.n)
    q = as_bias(scheme.dec_parity_bias(y, m), params.n)
    return query(params, p, q, config).x


# ------------------------------------------------------------------ builders


def conventional_linear_scheme(n: int, k: int, beta: float) -> SchemeSpec:
    """The conventional linear code over BSC(beta): parity checks pinned to
    zero, maximum-posterior decoding."""

    def enc_p(m, s):
        return np.full(n, 0.5)

    def enc_q(m, s):
        return np.concatenate([_message_bits(m), np.zeros(n - k)])

    def dec_p(y):
        return beta + (1.0 - 2.0 * beta) * np.asarray(y, dtype=np.float64)

    def dec_q(y):
        return np.full(n, 0.5)

    return SchemeSpec(enc_p, enc_q, dec_p, dec_q, label="linear")


def state_scheme(
    n: int,
    k: int,
    p_e_map: np.ndarray,
    p_d_map: np.ndarray,
    q_tail: np.ndarray,
    label: str = "",
) -> SchemeSpec:
    """Channel-with-state scheme: per-symbol encoder bias p_e(s), hard
    message bits plus the shared parity bias tail, and posterior decoding."""
    p_e_map = np.asarray(p_e_map, dtype=np.float64)
    p_d_map = np.asarray(p_d_map, dtype=np.float64)
    q_tail = np.asarray(q_tail, dtype=np.float64)
    if q_tail.shape != (n - k,):
        raise ValueError("parity bias tail must have length n - k")

    def enc_p(m, s):
        return p_e_map[np.asarray(s, dtype=np.int64)]

    def enc_q(m, s):
        return np.concatenate([_message_bits(m), q_tail])

    def dec_p(y):
        return p_d_map[np.asarray(y, dtype=np.int64)]

    def dec_q(y):
        return np.concatenate([np.full(k, 0.5), q_tail])

    return SchemeSpec(enc_p, enc_q, dec_p, dec_q, label=label)


def embed_wpc_scheme(
    n: int, k: int, alpha: float, beta: float, q_tail: np.ndarray, label: str = ""
) -> SchemeSpec:
    """Binary-Hamming information embedding: the encoder aims for
    X = S xor Bern(alpha), the decoder uses the BSC posterior."""
    p_e = np.array([alpha, 1.0 - alpha])
    p_d = np.array([beta, 1.0 - beta])
    return state_scheme(n, k, p_e, p_d, q_tail, label=label)


def wz_scheme(
    n: int,
    k: int,
    p_e_map: np.ndarray,
    p_d_map: np.ndarray,
    q_tail: np.ndarray,
    label: str = "",
) -> SchemeSpec:
    """Wyner-Ziv scheme: soft message bits at the encoder, message pinned
    hard at the decoder."""
    p_e_map = np.asarray(p_e_map, dtype=np.float64)
    p_d_map = np.asarray(p_d_map, dtype=np.float64)
    q_tail = np.asarray(q_tail, dtype=np.float64)
    if q_tail.shape != (n - k,):
        raise ValueError("parity bias tail must have length n - k")

    def enc_p(x):
        return p_e_map[np.asarray(x, dtype=np.int64)]

    def enc_q(x):
        return np.concatenate([np.full(k, 0.5), q_tail])

    def dec_p(y, m):
        return p_d_map[np.asarray(y, dtype=np.int64)]

    def dec_q(y, m):
        return np.concatenate([_message_bits(m), q_tail])

    return SchemeSpec(enc_p, enc_q, dec_p, dec_q, label=label)
