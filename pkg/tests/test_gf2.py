import numpy as np
import pytest

from wpc.gf2 import (
    BitMatrix,
    BitVec,
    SingularMatrixError,
    invert,
    mat_mul,
    mat_vec,
    matrix_from_hex,
    matrix_to_hex,
    rank,
    sample_full_rank,
)


def test_bitvec_roundtrip_and_order():
    v = BitVec.from_bits([1, 0, 1, 1, 0])
    assert v.value == 0b10110
    assert list(v.to_array()) == [1, 0, 1, 1, 0]
    assert v[0] == 1 and v[1] == 0
    assert v.prefix(2) == BitVec.from_bits([1, 0])
    # integer order is lexicographic order with bit 0 most significant
    assert BitVec.from_bits([0, 1, 1]) < BitVec.from_bits([1, 0, 0])


def test_mat_vec_zero_vector():
    h = BitMatrix.from_rows([[1, 0, 0], [1, 1, 0], [1, 1, 1]])
    assert mat_vec(h, BitVec.zeros(3)) == BitVec.zeros(3)


def test_mat_vec_hand_example():
    h = BitMatrix.from_rows([[1, 0, 0], [1, 1, 0], [1, 1, 1]])
    x = BitVec.from_bits([1, 0, 1])
    assert mat_vec(h, x) == BitVec.from_bits([1, 1, 0])


def test_mat_vec_unit_vectors_give_matrix_columns():
    rng = np.random.default_rng(7)
    n = 9
    fr = sample_full_rank(n, rng)
    arr = fr.h.to_array()
    for i in range(n):
        e = BitVec(1 << (n - 1 - i), n)
        assert list(mat_vec(fr.h, e).to_array()) == list(arr[:, i])


def test_mat_vec_length_mismatch():
    h = BitMatrix.identity(4)
    with pytest.raises(ValueError):
        mat_vec(h, BitVec.zeros(3))


def test_mat_vec_linearity():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(1, 17))
        fr = sample_full_rank(n, rng)
        x = BitVec(int(rng.integers(0, 1 << n)), n)
        y = BitVec(int(rng.integers(0, 1 << n)), n)
        assert mat_vec(fr.h, x ^ y) == mat_vec(fr.h, x) ^ mat_vec(fr.h, y)


def test_invert_identity():
    eye = BitMatrix.identity(5)
    assert invert(eye) == eye


def test_invert_hand_example():
    h = BitMatrix.from_rows([[1, 0, 0], [1, 1, 0], [1, 1, 1]])
    expected = BitMatrix.from_rows([[1, 0, 0], [1, 1, 0], [0, 1, 1]])
    assert invert(h) == expected


def test_invert_two_sided_random():
    rng = np.random.default_rng(3)
    for _ in range(25):
        fr = sample_full_rank(8, rng)
        eye = BitMatrix.identity(8)
        assert mat_mul(fr.h, fr.h_inv) == eye
        assert mat_mul(fr.h_inv, fr.h) == eye


def test_invert_singular_raises():
    m = BitMatrix.from_rows([[1, 1], [1, 1]])
    with pytest.raises(SingularMatrixError, match="not invertible"):
        invert(m)


def test_sample_full_rank_n1():
    rng = np.random.default_rng(0)
    fr = sample_full_rank(1, rng)
    assert fr.h == BitMatrix.from_rows([[1]])
    assert fr.h_inv == fr.h


def test_sample_full_rank_passes_independent_rank_check():
    rng = np.random.default_rng(5)
    for _ in range(50):
        n = int(rng.integers(1, 21))
        fr = sample_full_rank(n, rng)
        assert rank(fr.h) == n


def test_inverse_roundtrip_on_vectors():
    rng = np.random.default_rng(13)
    for _ in range(50):
        n = int(rng.integers(2, 16))
        fr = sample_full_rank(n, rng)
        x = BitVec(int(rng.integers(0, 1 << n)), n)
        assert mat_vec(fr.h_inv, mat_vec(fr.h, x)) == x
        # syndrome preimage property
        t = BitVec(int(rng.integers(0, 1 << n)), n)
        assert mat_vec(fr.h, fr.codeword_for_syndrome(t)) == t


def test_sample_full_rank_uniform_n2():
    # the 6 invertible 2x2 matrices each appear with frequency 1/6 +- 0.02
    rng = np.random.default_rng(42)
    counts: dict[tuple, int] = {}
    total = 100_000
    for _ in range(total):
        fr = sample_full_rank(2, rng)
        counts[fr.h.rows] = counts.get(fr.h.rows, 0) + 1
    assert len(counts) == 6
    for c in counts.values():
        assert abs(c / total - 1 / 6) < 0.02


def test_uniform_matrix_acceptance_rate_n10():
    # fraction of uniform 10x10 matrices that are invertible
    expected = 1.0
    for i in range(1, 11):
        expected *= 1 - 2.0**-i
    rng = np.random.default_rng(9)
    total = 100_000
    full = 0
    for _ in range(total):
        rows = [int(v) for v in rng.integers(0, 1 << 10, size=10, dtype=np.uint64)]
        if rank(BitMatrix(rows, 10)) == 10:
            full += 1
    assert abs(full / total - expected) < 0.01


def test_hex_roundtrip():
    rng = np.random.default_rng(21)
    fr = sample_full_rank(13, rng)
    text = matrix_to_hex(fr.h)
    assert matrix_from_hex(text) == fr.h
