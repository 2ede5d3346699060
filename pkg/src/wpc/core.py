"""The q-weight and the argmax query over codeword/parity biases.

The query maximises  w_p(x) * w_q(x H^T xor b)  over x in F_2^n.  Entries of
p and q that are exactly 0 or 1 are hard constraints; they pin an affine
subspace of candidates which is solved for directly.  The remaining soft
positions contribute a separable log-weight, and all 2^d scores over the
feasible coset are obtained at once with a Walsh-Hadamard transform:
grouping soft positions by which coset coordinates flip them turns the
score array into the WHT of a vector with at most 2n nonzero entries.
Winners are re-scored from scratch so incremental float error never picks
the argmax, and ties are broken lexicographically (bit 0 most significant,
smallest wins).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitVec, FullRankMatrix, mat_vec

__all__ = [
    "BiasVec",
    "CodeParams",
    "QueryConfig",
    "QueryResult",
    "InfeasibleConstraintsError",
    "SearchBudgetError",
    "as_bias",
    "log_weight",
    "query",
]

BiasVec = np.ndarray  # length-n float64 array with entries in [0, 1]


class InfeasibleConstraintsError(ValueError):
    """All candidates have weight zero: hard constraints are inconsistent."""


class SearchBudgetError(ValueError):
    """The feasible coset is too large for the configured search budget."""


def as_bias(values, n: int | None = None) -> BiasVec:
    """Validate and return a bias vector as a float64 array."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("bias vector must be one-dimensional")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"bias vector must have length {n}, got {arr.shape[0]}")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("bias entries must lie in [0, 1]")
    return arr


@dataclass(frozen=True)
class CodeParams:
    """Everything encoder and decoder share: (n, k, H, optional offset)."""

    n: int
    k: int
    matrix: FullRankMatrix
    offset: BitVec = None  # type: ignore[assignment]

    def __post_init__(self):
        if not 1 <= self.k < self.n:
            raise ValueError("need 1 <= k < n")
        if self.matrix.n != self.n:
            raise ValueError("matrix dimension mismatch")
        if self.offset is None:
            object.__setattr__(self, "offset", BitVec.zeros(self.n))
        elif self.offset.n != self.n:
            raise ValueError("offset length mismatch")


@dataclass(frozen=True)
class QueryConfig:
    """Numerical knobs of the search.

    tie_tol: two candidates tie iff their re-computed log2 weights differ
    by at most this (absolute, in log2 units).
    screen_tol: safety margin when harvesting near-maximal candidates from
    the transform output before exact re-scoring.
    max_search_dim: refuse cosets larger than 2**max_search_dim.
    """

    tie_tol: float = 1e-12
    screen_tol: float = 1e-8
    max_search_dim: int = 24


DEFAULT_QUERY_CONFIG = QueryConfig()


@dataclass(frozen=True)
class QueryResult:
    x: BitVec
    log2_weight: float
    tie_count: int


def log_weight(u, q) -> float:
    """log2 of the q-weight prod_i q_i^{u_i} (1-q_i)^{1-u_i}.

    Returns -inf exactly when u contradicts a hard entry q_i in {0, 1};
    a satisfied hard entry contributes 0 (the 0 log 0 = 0 convention).
    """
    if isinstance(u, BitVec):
        u = u.to_array()
    u = np.asarray(u)
    q = np.asarray(q, dtype=np.float64)
    if u.shape != q.shape:
        raise ValueError("length mismatch")
    with np.errstate(divide="ignore"):
        terms = np.where(u == 1, np.log2(q), np.log2(1.0 - q))
    return float(np.sum(terms))


def _tilt_deltas(bias: np.ndarray, soft_idx: np.ndarray) -> tuple[np.ndarray, float]:
    """(log-odds per soft position, sum of log2(1-r) base terms)."""
    r = bias[soft_idx]
    w1 = np.log2(r)
    w0 = np.log2(1.0 - r)
    return w1 - w0, float(np.sum(w0))


def _solve_affine(rows: list[int], rhs: list[int], n: int):
    """Solve the hard-constraint system over F_2^n.

    Returns (particular solution int, nullspace basis ints) or None when
    inconsistent.  Deterministic lowest-index pivoting.
    """
    eqs = [(rows[i], rhs[i]) for i in range(len(rows))]
    reduced: list[tuple[int, int]] = []  # (row, rhs) in echelon, pivot col order
    pivots: list[int] = []  # bit positions (n-1-col) of pivots
    for row, b in eqs:
        for (prow, pb), pbit in zip(reduced, pivots):
            if row & (1 << pbit):
                row ^= prow
                b ^= pb
        if row == 0:
            if b:
                return None
            continue
        pbit = row.bit_length() - 1
        # eliminate the new pivot from existing rows
        new_reduced = []
        for i, (prow, pb) in enumerate(reduced):
            if prow & (1 << pbit):
                prow ^= row
                pb ^= b
            new_reduced.append((prow, pb))
        reduced = new_reduced
        # insert keeping pivot bits in decreasing order (column order)
        pos = 0
        while pos < len(pivots) and pivots[pos] > pbit:
            pos += 1
        pivots.insert(pos, pbit)
        reduced.insert(pos, (row, b))
    pivot_set = set(pivots)
    x0 = 0
    for (row, b), pbit in zip(reduced, pivots):
        if b:
            x0 |= 1 << pbit
    basis = []
    for fbit in range(n - 1, -1, -1):  # free columns, lowest index first
        if fbit in pivot_set:
            continue
        v = 1 << fbit
        for (row, _), pbit in zip(reduced, pivots):
            if row & (1 << fbit):
                v |= 1 << pbit
        basis.append(v)
    return x0, basis


try:  # hot loop: plain numpy needs ~5x longer on the 2^20-point transform
    from numba import njit

    @njit(cache=True)
    def _fwht_inplace(a):
        n = a.shape[0]
        h = 1
        while h < n:
            for i in range(0, n, 2 * h):
                for j in range(i, i + h):
                    x = a[j]
                    y = a[j + h]
                    a[j] = x + y
                    a[j + h] = x - y
            h *= 2

except ImportError:  # pragma: no cover - numba is a declared dependency

    def _fwht_inplace(a):
        n = a.shape[0]
        h = 1
        while h < n:
            b = a.reshape(-1, 2, h)
            x = b[:, 0, :].copy()
            b[:, 0, :] = x + b[:, 1, :]
            b[:, 1, :] = x - b[:, 1, :]
            h *= 2


def _combine_ints(base: int, basis: list[int], coords: np.ndarray) -> np.ndarray:
    """XOR-combine basis vectors selected by the bits of each coord index."""
    out = np.full(coords.shape[0], base, dtype=np.int64)
    for b, v in enumerate(basis):
        on = (coords >> b) & 1 == 1
        out[on] ^= v
    return out


def query(
    params: CodeParams,
    p,
    q,
    config: QueryConfig = DEFAULT_QUERY_CONFIG,
) -> QueryResult:
    """argmax_x w_p(x) * w_q(x H^T xor offset) with lexicographic ties.

    Raises InfeasibleConstraintsError when the hard entries of p and q are
    jointly unsatisfiable and SearchBudgetError when the feasible coset
    exceeds 2**config.max_search_dim candidates.
    """
    n = params.n
    if n > 62:
        raise SearchBudgetError("search budget exceeded: block length above 62")
    p = as_bias(p, n)
    q = as_bias(q, n)
    h = params.matrix.h
    offset = params.offset

    hard_p = (p == 0.0) | (p == 1.0)
    hard_q = (q == 0.0) | (q == 1.0)

    rows: list[int] = []
    rhs: list[int] = []
    for i in range(n):
        if hard_p[i]:
            rows.append(1 << (n - 1 - i))
            rhs.append(int(p[i]))
    for j in range(n):
        if hard_q[j]:
            rows.append(h.rows[j])
            rhs.append(int(q[j]) ^ offset[j])

    solved = _solve_affine(rows, rhs, n)
    if solved is None:
        raise InfeasibleConstraintsError("infeasible constraints")
    x0, basis = solved
    d = len(basis)
    if d > config.max_search_dim:
        raise SearchBudgetError(
            f"search budget exceeded: coset dimension {d} > {config.max_search_dim}"
        )

    soft_p_idx = np.flatnonzero(~hard_p)
    soft_q_idx = np.flatnonzero(~hard_q)
    dp, base_p = _tilt_deltas(p, soft_p_idx)
    dq, base_q = _tilt_deltas(q, soft_q_idx)
    deltas = np.concatenate([dp, dq])
    const = base_p + base_q

    s0 = mat_vec(h, BitVec(x0, n)).value ^ offset.value
    sv = [mat_vec(h, BitVec(v, n)).value for v in basis]

    # per soft position: current bit under x0, and the mask of coset
    # coordinates that flip it
    npos = len(soft_p_idx) + len(soft_q_idx)
    base_bits = np.empty(npos, dtype=np.float64)
    masks = np.empty(npos, dtype=np.int64)
    for t, i in enumerate(soft_p_idx):
        bit = n - 1 - int(i)
        base_bits[t] = (x0 >> bit) & 1
        m = 0
        for b, v in enumerate(basis):
            if (v >> bit) & 1:
                m |= 1 << b
        masks[t] = m
    off0 = len(soft_p_idx)
    for t, j in enumerate(soft_q_idx):
        bit = n - 1 - int(j)
        base_bits[off0 + t] = (s0 >> bit) & 1
        m = 0
        for b, v in enumerate(sv):
            if (v >> bit) & 1:
                m |= 1 << b
        masks[off0 + t] = m

    if d == 0:
        x = BitVec(x0, n)
        return QueryResult(x, _rescore(x, params, p, q), 1)

    # score(c) = K - W[c] / 2 where W is the WHT of the mask-grouped deltas
    flip_gain = deltas * (1.0 - 2.0 * base_bits)
    table = np.zeros(1 << d, dtype=np.float64)
    np.add.at(table, masks, flip_gain)
    _fwht_inplace(table)

    scale = max(1.0, float(np.abs(flip_gain).sum()))
    w_min = float(table.min())
    screened = np.flatnonzero(table <= w_min + 2.0 * config.screen_tol * scale)

    x_ints = _combine_ints(x0, basis, screened)
    s_ints = _combine_ints(s0, sv, screened)

    exact = _exact_scores(x_ints, s_ints, n, soft_p_idx, soft_q_idx, deltas, const)
    smax = float(exact.max())
    tie = exact >= smax - config.tie_tol
    tie_count = int(tie.sum())
    winner = int(x_ints[tie].min())
    x = BitVec(winner, n)
    return QueryResult(x, _rescore(x, params, p, q), tie_count)


def _exact_scores(x_ints, s_ints, n, soft_p_idx, soft_q_idx, deltas, const):
    """From-scratch log2 weights of candidates given as packed ints."""
    cols = []
    for i in soft_p_idx:
        cols.append((x_ints >> (n - 1 - int(i))) & 1)
    for j in soft_q_idx:
        cols.append((s_ints >> (n - 1 - int(j))) & 1)
    if not cols:
        return np.full(x_ints.shape[0], const, dtype=np.float64)
    bits = np.stack(cols, axis=1).astype(np.float64)
    return bits @ deltas + const


def _rescore(x: BitVec, params: CodeParams, p, q) -> float:
    synd = mat_vec(params.matrix.h, x) ^ params.offset
    return log_weight(x, p) + log_weight(synd, q)
