"""Wyner-Ziv compression with the weighted parity-check code.

The encoder quantises the source x to a representation z via soft message
bits, sends only the first k syndrome bits; the decoder re-runs the query
with the message pinned hard plus its side information y and recovers z.
"""
import numpy as np

from wpc import CodeParams, calibrate, quantile_vector, sample_full_rank, wz_decode, wz_encode
from wpc.schemes import wz_scheme
from wpc.theory import hb

n, k = 16, 9
alpha_z = 0.08   # test channel Z = X xor Bern(alpha_z)
delta = 0.2      # side information Y = X xor Bern(delta)
rate = k / n

target = 1.0 - hb(alpha_z) / (1.0 - rate)
q_tail = quantile_vector(calibrate("threshold-linear", target), n - k)
p_e = np.array([alpha_z, 1 - alpha_z])
p_x1_y = np.array([delta, 1 - delta])
p_d = p_x1_y * (1 - alpha_z) + (1 - p_x1_y) * alpha_z
scheme = wz_scheme(n, k, p_e, p_d, q_tail)

rng = np.random.default_rng(3)
hits = 0
distortion = 0
trials = 200
for _ in range(trials):
    params = CodeParams(n, k, sample_full_rank(n, rng))
    x = (rng.random(n) < 0.5).astype(np.int64)
    y = x ^ (rng.random(n) < delta).astype(np.int64)
    m, z = wz_encode(x, scheme, params)
    zhat = wz_decode(m, y, scheme, params)
    hits += zhat == z
    distortion += int(np.sum(zhat.to_array() != x))

print(f"rate {rate:.3f} vs I(X;Z|Y) = {hb(alpha_z*(1-delta)+(1-alpha_z)*delta) - hb(alpha_z):.3f}")
print(f"decoder recovered the encoder's z in {hits}/{trials} trials")
print(f"avg distortion per symbol {distortion/(n*trials):.4f} (target ~ {alpha_z})")
