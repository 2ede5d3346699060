"""Finite-alphabet state sources, memoryless channels with state, cost
tables, and the posterior bias used by decoders."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitVec

__all__ = [
    "StateModel",
    "ChannelModel",
    "CostFn",
    "sample_state",
    "transmit",
    "cost",
    "posterior_bias",
    "read_channel_file",
    "read_state_file",
    "read_cost_file",
]

_PMF_TOL = 1e-12


@dataclass(frozen=True)
class StateModel:
    """i.i.d. state source over a finite alphabet."""

    pmf: np.ndarray

    def __post_init__(self):
        pmf = np.asarray(self.pmf, dtype=np.float64)
        if pmf.ndim != 1 or pmf.size == 0:
            raise ValueError("pmf must be a non-empty vector")
        if np.any(pmf < 0.0) or abs(pmf.sum() - 1.0) > _PMF_TOL:
            raise ValueError("pmf entries must be nonnegative and sum to 1")
        object.__setattr__(self, "pmf", pmf)

    @property
    def size(self) -> int:
        return self.pmf.size

    @classmethod
    def bernoulli(cls, p: float) -> "StateModel":
        return cls(np.array([1.0 - p, p]))

    @classmethod
    def singleton(cls) -> "StateModel":
        return cls(np.array([1.0]))


@dataclass(frozen=True)
class ChannelModel:
    """Memoryless channel P(y | s, x) as a dense (|S|, 2, |Y|) table."""

    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.float64)
        if table.ndim != 3 or table.shape[1] != 2:
            raise ValueError("table must have shape (|S|, 2, |Y|)")
        if np.any(table < 0.0):
            raise ValueError("channel probabilities must be nonnegative")
        if np.any(np.abs(table.sum(axis=2) - 1.0) > _PMF_TOL):
            raise ValueError("each (s, x) row must sum to 1")
        object.__setattr__(self, "table", table)

    @property
    def n_states(self) -> int:
        return self.table.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.table.shape[2]

    @classmethod
    def bsc(cls, beta: float, n_states: int = 2) -> "ChannelModel":
        """State-independent binary symmetric channel with crossover beta."""
        row = np.array([[1.0 - beta, beta], [beta, 1.0 - beta]])
        return cls(np.broadcast_to(row, (n_states, 2, 2)).copy())

    @classmethod
    def z_channel(cls, eps: float, n_states: int = 1) -> "ChannelModel":
        """x=0 passes clean; x=1 flips to 0 with probability eps."""
        row = np.array([[1.0, 0.0], [eps, 1.0 - eps]])
        return cls(np.broadcast_to(row, (n_states, 2, 2)).copy())


@dataclass(frozen=True)
class CostFn:
    """Per-symbol cost c(s, x) >= 0 as a dense (|S|, 2) table."""

    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.float64)
        if table.ndim != 2 or table.shape[1] != 2:
            raise ValueError("cost table must have shape (|S|, 2)")
        if np.any(table < 0.0) or not np.all(np.isfinite(table)):
            raise ValueError("costs must be finite and nonnegative")
        object.__setattr__(self, "table", table)

    @classmethod
    def hamming(cls) -> "CostFn":
        return cls(np.array([[0.0, 1.0], [1.0, 0.0]]))

    @classmethod
    def zero(cls, n_states: int) -> "CostFn":
        return cls(np.zeros((n_states, 2)))


def sample_state(model: StateModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. draws from the state pmf; reproducible under a fixed rng."""
    if n < 1:
        raise ValueError("n must be positive")
    cum = np.cumsum(model.pmf)
    idx = np.searchsorted(cum, rng.random(n), side="right")
    return np.minimum(idx, model.size - 1).astype(np.int64)


def transmit(
    ch: ChannelModel, s: np.ndarray, x: BitVec, rng: np.random.Generator
) -> np.ndarray:
    """Send x through the channel symbol by symbol given the state sequence."""
    s = np.asarray(s, dtype=np.int64)
    if s.ndim != 1 or s.size != x.n:
        raise ValueError("state and input lengths must match")
    if np.any(s < 0) or np.any(s >= ch.n_states):
        raise ValueError("state symbol outside the channel alphabet")
    probs = ch.table[s, x.to_array()]
    cum = np.cumsum(probs, axis=1)
    y = (rng.random(x.n)[:, None] >= cum).sum(axis=1)
    return np.minimum(y, ch.n_outputs - 1).astype(np.int64)


def cost(fn: CostFn, s: np.ndarray, x: BitVec) -> float:
    """Total cost sum_i c(s_i, x_i)."""
    s = np.asarray(s, dtype=np.int64)
    if s.size != x.n:
        raise ValueError("state and input lengths must match")
    return float(fn.table[s, x.to_array()].sum())


def posterior_bias(
    ch: ChannelModel, states: StateModel, prior_x1: float, y: int
) -> float:
    """P(X=1 | Y=y) under the state-marginalised channel
    P(y|x) = sum_s P_S(s) P(y|s,x)."""
    if not 0.0 <= prior_x1 <= 1.0:
        raise ValueError("prior must lie in [0, 1]")
    if not 0 <= y < ch.n_outputs:
        raise ValueError("output symbol outside the channel alphabet")
    if states.size != ch.n_states:
        raise ValueError("state model does not match the channel")
    p_y_given_x = states.pmf @ ch.table[:, :, y]
    num = prior_x1 * p_y_given_x[1]
    den = num + (1.0 - prior_x1) * p_y_given_x[0]
    if den <= 0.0:
        raise ValueError("unreachable output")
    return float(num / den)


# ---------------------------------------------------------------- table files
#
# Plain-text table format: a header line with the alphabet sizes, then one
# row of probabilities (or costs) per line.  Channel files list the |S| * 2
# conditional rows in state-major order (s=0 x=0, s=0 x=1, s=1 x=0, ...).


def read_state_file(path) -> StateModel:
    """Header: |S|; then one row of |S| probabilities."""
    sizes, rows = _read_table(path)
    if len(sizes) != 1 or len(rows) != 1 or len(rows[0]) != sizes[0]:
        raise ValueError("state file must have header '|S|' and one pmf row")
    return StateModel(np.array(rows[0]))


def read_channel_file(path) -> ChannelModel:
    """Header: |S| |Y|; then |S|*2 rows of |Y| probabilities."""
    sizes, rows = _read_table(path)
    if len(sizes) != 2:
        raise ValueError("channel file header must give |S| and |Y|")
    n_s, n_y = sizes
    if len(rows) != n_s * 2 or any(len(r) != n_y for r in rows):
        raise ValueError(f"channel file must have {n_s * 2} rows of {n_y} entries")
    table = np.array(rows).reshape(n_s, 2, n_y)
    return ChannelModel(table)


def read_cost_file(path) -> CostFn:
    """Header: |S|; then |S| rows of 2 costs (x=0, x=1)."""
    sizes, rows = _read_table(path)
    if len(sizes) != 1 or len(rows) != sizes[0] or any(len(r) != 2 for r in rows):
        raise ValueError("cost file must have header '|S|' and |S| rows of 2 costs")
    return CostFn(np.array(rows))


def _read_table(path):
    with open(path) as fh:
        lines = [ln.split("#")[0].strip() for ln in fh]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty table file")
    sizes = [int(tok) for tok in lines[0].split()]
    rows = [[float(tok) for tok in ln.split()] for ln in lines[1:]]
    return sizes, rows
