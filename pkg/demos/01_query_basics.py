"""The weighted parity-check query on a tiny code, step by step.

A codeword bias p scores candidate vectors x, a parity bias q scores their
syndromes x H^T, and the query returns the jointly best candidate.  Entries
of p or q equal to 0 or 1 are hard constraints; 1/2 entries are "don't care".
"""
import numpy as np

from wpc import BitVec, CodeParams, log_weight, mat_vec, query, sample_full_rank

rng = np.random.default_rng(1)
n, k = 8, 3
params = CodeParams(n, k, sample_full_rank(n, rng))

# Hard parity bias [m, 0...] pins the syndrome completely: the classic
# linear-code encoder.  Only one candidate is feasible.
m = BitVec.from_bits([1, 0, 1])
q_hard = np.concatenate([m.to_array().astype(float), np.zeros(n - k)])
res = query(params, np.full(n, 0.5), q_hard)
print("linear-code codeword:", res.x, "ties:", res.tie_count)
print("syndrome starts with the message:", mat_vec(params.matrix.h, res.x).prefix(k))

# Soften the parity checks and bias the codeword: now the query trades
# codeword weight against parity weight over the whole space.
p_soft = rng.uniform(0.1, 0.9, size=n)
q_soft = np.concatenate([m.to_array().astype(float), np.full(n - k, 0.3)])
res = query(params, p_soft, q_soft)
synd = mat_vec(params.matrix.h, res.x)
print("\nsoft query winner:", res.x)
print("log2 weight:", res.log2_weight)
print("  = codeword part", log_weight(res.x, p_soft),
      "+ parity part", log_weight(synd, q_soft))

# All-uniform biases make every candidate tie; lexicographically smallest wins.
res = query(params, np.full(n, 0.5), np.full(n, 0.5))
print("\nuniform biases:", res.x, f"with {res.tie_count} = 2^{n} ties")
