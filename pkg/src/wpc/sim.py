"""Seeded Monte-Carlo experiment engine: block-error rate, average cost and
Wilson intervals per sweep point, with deterministic per-trial seeding and a
fixed CSV schema.

Every trial derives its own random stream from (master seed, point index,
trial index), so results are bit-identical for any chunking or worker
count.  Float aggregation happens over fixed-size chunks combined in chunk
order, which keeps even real-valued cost sums byte-stable.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bias import Linear, NestedExact, calibrate, quantile_vector, sample_iid
from .channels import (
    ChannelModel,
    CostFn,
    StateModel,
    cost,
    posterior_bias,
    sample_state,
    transmit,
)
from .core import CodeParams, InfeasibleConstraintsError
from .gf2 import random_bitvec, sample_full_rank
from .schemes import (
    decode_state,
    embed_wpc_scheme,
    encode_with_state,
    nested_alpha,
    state_scheme,
    wz_decode,
    wz_encode,
    wz_scheme,
)
from .theory import hb

__all__ = [
    "ExperimentConfig",
    "AggregateStats",
    "CSV_HEADER",
    "wilson_ci",
    "run_point",
    "run_experiment",
    "stats_to_csv",
]

CSV_HEADER = (
    "setting,scheme,n,k,beta,param_name,param_value,trials,block_errors,"
    "infeasible,bler,bler_ci_lo,bler_ci_hi,avg_cost_per_symbol,master_seed"
)

_CHUNK = 64

_SETTINGS = ("embed", "plain-channel", "wyner-ziv")
_SCHEMES = ("wpc-tl", "wpc-threshold", "wpc-constant", "wpc-linear", "nested")

_FAMILY_OF = {
    "wpc-tl": "threshold-linear",
    "wpc-threshold": "threshold",
    "wpc-constant": "constant",
}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a scheme swept over one parameter grid.

    The sweep variable depends on the setting: the cost parameter alpha for
    embedding, the coset dimension ktilde for the nested baseline, the test
    channel crossover alpha_z for Wyner-Ziv, and the input bias px1 for
    plain channels.  `beta` is the channel noise parameter (BSC crossover
    for embed/plain, side-information crossover for Wyner-Ziv).
    """

    setting: str
    n: int
    k: int
    trials: int
    master_seed: int
    scheme: str
    sweep_name: str
    sweep_values: tuple
    beta: float = 0.0
    eps: float = 0.0
    channel: str = "bsc"
    channel_table: tuple | None = None
    matrix_policy: str = "fresh"
    workers: int = 1
    q_mode: str = "quantile"

    def __post_init__(self):
        if self.setting not in _SETTINGS:
            raise ValueError(f"unknown setting: {self.setting}")
        if self.scheme not in _SCHEMES:
            raise ValueError(f"unknown scheme: {self.scheme}")
        if self.scheme == "nested" and self.setting != "embed":
            raise ValueError("the nested baseline is an embedding scheme")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 1 <= self.k < self.n:
            raise ValueError("need 1 <= k < n")
        if len(self.sweep_values) == 0:
            raise ValueError("empty sweep grid")
        if self.matrix_policy not in ("fresh", "fixed"):
            raise ValueError("matrix policy must be 'fresh' or 'fixed'")
        if self.channel not in ("bsc", "z", "table"):
            raise ValueError("channel must be 'bsc', 'z' or 'table'")
        if self.channel == "table" and self.channel_table is None:
            raise ValueError("table channel needs channel_table")
        if self.q_mode not in ("quantile", "iid"):
            raise ValueError("q_mode must be 'quantile' or 'iid'")
        values = tuple(float(v) for v in self.sweep_values)
        if self.scheme == "nested":
            if any(v != int(v) or not 0 <= v <= self.n - self.k for v in values):
                raise ValueError("ktilde values must be integers in [0, n-k]")
        elif self.setting in ("embed", "wyner-ziv"):
            if any(not 0.0 <= v <= 0.5 for v in values):
                raise ValueError("cost/crossover parameters must lie in [0, 1/2]")
        else:
            if any(not 0.0 <= v <= 1.0 for v in values):
                raise ValueError("input bias must lie in [0, 1]")
        object.__setattr__(self, "sweep_values", values)


@dataclass(frozen=True)
class AggregateStats:
    point_index: int
    param_name: str
    param_value: float
    trials: int
    block_errors: int
    infeasible: int
    bler: float
    bler_ci_lo: float
    bler_ci_hi: float
    total_cost: float
    avg_cost_per_symbol: float
    seconds_per_trial: float
    master_seed: int


def wilson_ci(errors: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if not 0 <= errors <= trials or trials < 1:
        raise ValueError("need 0 <= errors <= trials, trials >= 1")
    phat = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2.0 * trials)) / denom
    half = (
        z * float(np.sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials)))
        / denom
    )
    return max(0.0, center - half), min(1.0, center + half)


def _parity_spec(cfg: ExperimentConfig, value: float):
    """Parity-bias distribution for one sweep point (clamped calibration)."""
    rate = cfg.k / cfg.n
    length = cfg.n - cfg.k
    if cfg.scheme == "nested":
        return NestedExact(int(round(value)), length)
    if cfg.scheme == "wpc-linear":
        return Linear()
    if cfg.setting == "wyner-ziv":
        target = 1.0 - hb(value) / (1.0 - rate)
    else:  # embed sweeps alpha, plain-channel sweeps px1
        target = (1.0 - hb(value)) / (1.0 - rate)
    target = min(max(target, 0.0), 1.0)
    return calibrate(_FAMILY_OF[cfg.scheme], target)


def _trial_rng(cfg: ExperimentConfig, point_index: int, trial: int) -> np.random.Generator:
    seq = np.random.SeedSequence((cfg.master_seed, point_index, trial))
    return np.random.Generator(np.random.Philox(seq))


def _fixed_matrix(cfg: ExperimentConfig, point_index: int):
    seq = np.random.SeedSequence((cfg.master_seed, point_index))
    return sample_full_rank(cfg.n, np.random.Generator(np.random.Philox(seq)))


def _build_embed_scheme(cfg: ExperimentConfig, value: float, q_tail: np.ndarray):
    alpha = nested_alpha if cfg.scheme == "nested" else value
    return embed_wpc_scheme(cfg.n, cfg.k, alpha, cfg.beta, q_tail)


def _run_chunk(args) -> tuple[int, int, float, int]:
    """Trials [t0, t1) of one sweep point; returns summable partials."""
    cfg, point_index, value, t0, t1 = args
    n, k = cfg.n, cfg.k
    spec = _parity_spec(cfg, value)
    q_tail = None
    if cfg.q_mode == "quantile":
        q_tail = quantile_vector(spec, n - k)
    fixed = _fixed_matrix(cfg, point_index) if cfg.matrix_policy == "fixed" else None

    errors = 0
    infeasible = 0
    cost_total = 0.0
    feasible = 0

    if cfg.setting == "embed":
        state_model = StateModel.bernoulli(0.5)
        channel = ChannelModel.bsc(cfg.beta, n_states=2)
        cost_fn = CostFn.hamming()
        plain_p_d = None
    elif cfg.setting == "plain-channel":
        if cfg.channel == "z":
            channel = ChannelModel.z_channel(cfg.eps, n_states=1)
        elif cfg.channel == "table":
            channel = ChannelModel(np.array(cfg.channel_table))
        else:
            channel = ChannelModel.bsc(cfg.beta, n_states=1)
        state_model = StateModel(np.full(channel.n_states, 1.0 / channel.n_states))
        cost_fn = CostFn.zero(channel.n_states)
        plain_p_d = np.array(
            [
                posterior_bias(channel, state_model, value, y)
                for y in range(channel.n_outputs)
            ]
        )
    else:
        state_model = channel = cost_fn = plain_p_d = None  # wyner-ziv below

    for t in range(t0, t1):
        rng = _trial_rng(cfg, point_index, t)
        matrix = fixed if fixed is not None else sample_full_rank(n, rng)
        params = CodeParams(n, k, matrix)
        tail = q_tail if q_tail is not None else sample_iid(spec, n - k, rng)

        if cfg.setting == "embed":
            scheme = _build_embed_scheme(cfg, value, tail)
            m = random_bitvec(k, rng)
            s = sample_state(state_model, n, rng)
            try:
                x = encode_with_state(m, s, scheme, params)
            except InfeasibleConstraintsError:
                infeasible += 1
                errors += 1
                continue
            feasible += 1
            cost_total += cost(cost_fn, s, x)
            y = transmit(channel, s, x, rng)
            if decode_state(y, scheme, params) != m:
                errors += 1

        elif cfg.setting == "plain-channel":
            p_e_map = np.full(channel.n_states, value)
            scheme = state_scheme(n, k, p_e_map, plain_p_d, tail)
            m = random_bitvec(k, rng)
            s = sample_state(state_model, n, rng)
            try:
                x = encode_with_state(m, s, scheme, params)
            except InfeasibleConstraintsError:
                infeasible += 1
                errors += 1
                continue
            feasible += 1
            y = transmit(channel, s, x, rng)
            if decode_state(y, scheme, params) != m:
                errors += 1

        else:  # wyner-ziv: value is the test-channel crossover alpha_z
            alpha_z, delta = value, cfg.beta
            p_e = np.array([alpha_z, 1.0 - alpha_z])
            p_x1_y = np.array([delta, 1.0 - delta])
            p_d = p_x1_y * (1.0 - alpha_z) + (1.0 - p_x1_y) * alpha_z
            scheme = wz_scheme(n, k, p_e, p_d, tail)
            x = sample_state(StateModel.bernoulli(0.5), n, rng)
            noise = sample_state(StateModel.bernoulli(delta), n, rng)
            y = x ^ noise
            try:
                m, z = wz_encode(x, scheme, params)
                zhat = wz_decode(m, y, scheme, params)
            except InfeasibleConstraintsError:
                infeasible += 1
                errors += 1
                continue
            feasible += 1
            cost_total += float(np.sum(zhat.to_array() != x))
            if zhat != z:
                errors += 1

    return errors, infeasible, cost_total, feasible


def run_point(
    cfg: ExperimentConfig, point_index: int, value: float | None = None
) -> AggregateStats:
    """Run all trials of one sweep point and aggregate."""
    if value is None:
        value = cfg.sweep_values[point_index]
    chunks = [
        (cfg, point_index, value, t0, min(t0 + _CHUNK, cfg.trials))
        for t0 in range(0, cfg.trials, _CHUNK)
    ]
    start = time.perf_counter()
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            partials = list(pool.map(_run_chunk, chunks))
    else:
        partials = [_run_chunk(c) for c in chunks]
    elapsed = time.perf_counter() - start

    errors = sum(p[0] for p in partials)
    infeasible = sum(p[1] for p in partials)
    cost_total = 0.0
    for p in partials:  # fixed chunk order keeps float sums byte-stable
        cost_total += p[2]
    feasible = sum(p[3] for p in partials)

    lo, hi = wilson_ci(errors, cfg.trials)
    avg_cost = cost_total / (cfg.n * feasible) if feasible else float("nan")
    return AggregateStats(
        point_index=point_index,
        param_name=cfg.sweep_name,
        param_value=float(value),
        trials=cfg.trials,
        block_errors=errors,
        infeasible=infeasible,
        bler=errors / cfg.trials,
        bler_ci_lo=lo,
        bler_ci_hi=hi,
        total_cost=cost_total,
        avg_cost_per_symbol=avg_cost,
        seconds_per_trial=elapsed / cfg.trials,
        master_seed=cfg.master_seed,
    )


def stats_to_csv(cfg: ExperimentConfig, stats: list[AggregateStats]) -> str:
    """Render the fixed CSV schema (timing is deliberately not a column)."""
    lines = [CSV_HEADER]
    for st in stats:
        lines.append(
            ",".join(
                [
                    cfg.setting,
                    cfg.scheme,
                    str(cfg.n),
                    str(cfg.k),
                    f"{cfg.beta:.12g}" if cfg.channel != "z" else f"{cfg.eps:.12g}",
                    st.param_name,
                    f"{st.param_value:.12g}",
                    str(st.trials),
                    str(st.block_errors),
                    str(st.infeasible),
                    f"{st.bler:.12g}",
                    f"{st.bler_ci_lo:.12g}",
                    f"{st.bler_ci_hi:.12g}",
                    f"{st.avg_cost_per_symbol:.12g}",
                    str(st.master_seed),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def run_experiment(
    cfg: ExperimentConfig, csv_path: str | Path | None = None
) -> list[AggregateStats]:
    """One AggregateStats per sweep point, optionally written as CSV."""
    stats = [run_point(cfg, i) for i in range(len(cfg.sweep_values))]
    if csv_path is not None:
        Path(csv_path).write_text(stats_to_csv(cfg, stats))
    return stats
