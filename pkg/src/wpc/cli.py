"""Command-line surface: experiment sweeps, calibration, capacity curves,
the intersection-lemma check, and one-shot query evaluation.

Exit codes: 0 success, 1 runtime error, 2 usage error.  All simulation
subcommands require --seed; there is no silent nondeterminism.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bias, sim, theory
from .core import CodeParams, QueryConfig, query
from .gf2 import (
    BitVec,
    FullRankMatrix,
    invert,
    matrix_from_hex,
    matrix_to_hex,
    sample_full_rank,
)

__all__ = ["main"]


class UsageError(ValueError):
    """Bad flag combination; maps to exit code 2."""


def _parse_grid(text: str) -> tuple[float, ...]:
    """Inclusive start:stop:step grid, or a single value."""
    parts = text.split(":")
    if len(parts) == 1:
        return (float(parts[0]),)
    if len(parts) != 3:
        raise ValueError(f"bad grid syntax: {text!r} (want start:stop:step)")
    start, stop, step = (float(p) for p in parts)
    if step <= 0:
        raise ValueError("grid step must be positive")
    count = round((stop - start) / step) + 1
    if count < 1 or abs(start + (count - 1) * step - stop) > 1e-9:
        raise ValueError(f"grid {text!r} does not divide evenly")
    return tuple(float(v) for v in np.linspace(start, stop, count))


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _add_sim_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True, help="master seed (mandatory)")
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--workers", type=int, default=None, help="parallel trial workers")
    p.add_argument("--matrix", choices=("fresh", "fixed"), default="fresh")
    p.add_argument("--q-mode", choices=("quantile", "iid"), default="quantile")


def _workers(args) -> int:
    if args.workers is not None:
        return max(1, args.workers)
    import os

    return os.cpu_count() or 1


def _run_embed(args) -> int:
    if args.scheme == "nested":
        grid_text = args.ktilde_grid
        if grid_text is None:
            raise UsageError("--ktilde-grid is required for the nested scheme")
        sweep_name = "ktilde"
    else:
        grid_text = args.alpha_grid
        if grid_text is None:
            raise UsageError("--alpha-grid is required for wpc schemes")
        sweep_name = "alpha"
    cfg = sim.ExperimentConfig(
        setting="embed",
        n=args.n,
        k=args.k,
        trials=args.trials,
        master_seed=args.seed,
        scheme=args.scheme,
        sweep_name=sweep_name,
        sweep_values=_parse_grid(grid_text),
        beta=args.beta,
        matrix_policy=args.matrix,
        workers=_workers(args),
        q_mode=args.q_mode,
    )
    stats = sim.run_experiment(cfg)
    _write_output(sim.stats_to_csv(cfg, stats), args.out)
    return 0


def _run_channel(args) -> int:
    from .channels import ChannelModel, StateModel, read_channel_file

    table = None
    if args.channel == "table":
        if args.table_file is None:
            raise UsageError("--table-file is required with --channel table")
        ch = read_channel_file(args.table_file)
        table = tuple(tuple(tuple(row) for row in x) for x in ch.table.tolist())
    elif args.channel == "z":
        ch = ChannelModel.z_channel(args.eps, 1)
    else:
        ch = ChannelModel.bsc(args.beta, 1)
    if args.px1 is not None:
        px1 = args.px1
    else:
        states = StateModel(np.full(ch.n_states, 1.0 / ch.n_states))
        px1 = theory.best_input_bias(ch, states)
        print(f"# capacity-achieving input bias px1={px1:.6g}", file=sys.stderr)
    cfg = sim.ExperimentConfig(
        setting="plain-channel",
        n=args.n,
        k=args.k,
        trials=args.trials,
        master_seed=args.seed,
        scheme=args.scheme,
        sweep_name="px1",
        sweep_values=(px1,),
        beta=args.beta,
        eps=args.eps,
        channel=args.channel,
        channel_table=table,
        matrix_policy=args.matrix,
        workers=_workers(args),
        q_mode=args.q_mode,
    )
    stats = sim.run_experiment(cfg)
    _write_output(sim.stats_to_csv(cfg, stats), args.out)
    return 0


def _run_wyner_ziv(args) -> int:
    cfg = sim.ExperimentConfig(
        setting="wyner-ziv",
        n=args.n,
        k=args.k,
        trials=args.trials,
        master_seed=args.seed,
        scheme=args.scheme,
        sweep_name="alpha_z",
        sweep_values=_parse_grid(args.alpha_z_grid),
        beta=args.delta,
        matrix_policy=args.matrix,
        workers=_workers(args),
        q_mode=args.q_mode,
    )
    stats = sim.run_experiment(cfg)
    _write_output(sim.stats_to_csv(cfg, stats), args.out)
    return 0


def _run_calibrate(args) -> int:
    if args.target is not None:
        target = args.target
    elif args.alpha is not None and args.R is not None:
        target = (1.0 - theory.hb(args.alpha)) / (1.0 - args.R)
    else:
        raise UsageError("give --target, or both --alpha and --R")
    spec = bias.calibrate(args.family, target, length=args.length)
    residual = bias.expected_hb(spec) - target
    print(f"spec={spec.label()}")
    print(f"target={target:.12g}")
    print(f"expected_hb={bias.expected_hb(spec):.12g}")
    print(f"residual={residual:.3e}")
    return 0


def _run_capacity(args) -> int:
    grid = np.linspace(0.0, 0.5, args.points)
    curve = theory.capacity_embedding(args.beta, grid)
    lines = ["D,g,envelope"]
    for d, g, e in zip(curve.d_grid, curve.g, curve.envelope):
        lines.append(f"{d:.12g},{g:.12g},{e:.12g}")
    _write_output("\n".join(lines) + "\n", args.out)
    print(
        f"# beta={args.beta} D*={curve.d_star:.6g} slope={curve.slope:.6g} "
        f"C(1/2)={curve.envelope[-1]:.6g} tangency_residual={curve.tangency_residual:.3e}",
        file=sys.stderr,
    )
    return 0


def _run_lemma_check(args) -> int:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(args.seed)))
    space = (1 << args.n) - 1
    if args.size_a > space or args.size_b > space:
        raise ValueError("set size exceeds the number of nonzero vectors")
    set_a = rng.choice(space, size=args.size_a, replace=False) + 1
    set_b = rng.choice(space, size=args.size_b, replace=False) + 1
    report = theory.lemma_intersection_check(args.n, set_a, set_b, args.samples, rng)
    print(f"n={args.n}")
    print(f"size_a={args.size_a}")
    print(f"size_b={args.size_b}")
    print(f"samples={report.samples}")
    print(f"theta={report.theta:.12g}")
    print(f"bound={report.bound:.12g}")
    print(f"applicable={report.applicable}")
    print(f"precondition_ok={report.precondition_ok}")
    print(f"empty_count={report.empty_count}")
    print(f"empirical_probability={report.empirical_probability:.12g}")
    return 0


def _run_query(args) -> int:
    p = np.array([float(v) for v in args.p.split(",")])
    q = np.array([float(v) for v in args.q.split(",")])
    n = args.n if args.n is not None else p.size
    if args.matrix_file is not None:
        with open(args.matrix_file) as fh:
            h = matrix_from_hex(fh.read())
        matrix = FullRankMatrix(h, invert(h))
    else:
        if args.seed is None:
            raise UsageError("give --seed or --matrix-file")
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(args.seed)))
        matrix = sample_full_rank(n, rng)
    if args.dump_matrix is not None:
        with open(args.dump_matrix, "w") as fh:
            fh.write(matrix_to_hex(matrix.h))
    offset = (
        BitVec.from_bits(int(b) for b in args.offset)
        if args.offset is not None
        else None
    )
    params = CodeParams(n, args.k, matrix, offset)
    res = query(params, p, q, QueryConfig(max_search_dim=args.max_search_dim))
    print(f"x={''.join(str(b) for b in res.x.bits())}")
    print(f"log2_weight={res.log2_weight:.12g}")
    print(f"weight={2.0 ** res.log2_weight:.12g}")
    print(f"tie_count={res.tie_count}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wpc",
        description="Weighted parity-check codes: simulation and calibration tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="binary-Hamming information embedding sweep")
    _add_sim_flags(p)
    p.add_argument("--beta", type=float, required=True, help="BSC crossover")
    p.add_argument(
        "--scheme",
        choices=("wpc-tl", "wpc-threshold", "wpc-constant", "wpc-linear", "nested"),
        default="wpc-tl",
    )
    p.add_argument("--alpha-grid", help="cost parameter grid start:stop:step")
    p.add_argument("--ktilde-grid", help="coset dimension grid for the nested scheme")
    p.set_defaults(func=_run_embed)

    p = sub.add_parser("channel", help="plain or asymmetric channel without state")
    _add_sim_flags(p)
    p.add_argument("--channel", choices=("bsc", "z", "table"), default="bsc")
    p.add_argument("--beta", type=float, default=0.0, help="BSC crossover")
    p.add_argument("--eps", type=float, default=0.0, help="Z-channel 1->0 probability")
    p.add_argument("--table-file", help="plain-text channel table for --channel table")
    p.add_argument(
        "--scheme",
        choices=("wpc-tl", "wpc-threshold", "wpc-constant", "wpc-linear"),
        default="wpc-tl",
    )
    p.add_argument(
        "--px1",
        type=float,
        default=None,
        help="input bias P(X=1); default: capacity-achieving",
    )
    p.set_defaults(func=_run_channel)

    p = sub.add_parser("wyner-ziv", help="lossy compression with side information")
    _add_sim_flags(p)
    p.add_argument("--delta", type=float, required=True, help="side info crossover")
    p.add_argument(
        "--alpha-z-grid", required=True, help="test channel crossover grid"
    )
    p.add_argument(
        "--scheme",
        choices=("wpc-tl", "wpc-threshold", "wpc-constant", "wpc-linear"),
        default="wpc-tl",
    )
    p.set_defaults(func=_run_wyner_ziv)

    p = sub.add_parser("calibrate", help="fit a parity-bias family to a target")
    p.add_argument(
        "--family",
        required=True,
        choices=("threshold", "constant", "linear", "threshold-linear", "nested-exact"),
    )
    p.add_argument("--target", type=float, help="target E[Hb(Q)]")
    p.add_argument("--alpha", type=float, help="embedding cost parameter")
    p.add_argument("--R", type=float, help="rate k/n")
    p.add_argument("--length", type=int, help="vector length for nested-exact")
    p.set_defaults(func=_run_calibrate)

    p = sub.add_parser("capacity", help="embedding capacity curve")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--out")
    p.set_defaults(func=_run_capacity)

    p = sub.add_parser("lemma-check", help="coset intersection bound Monte-Carlo")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--size-a", type=int, required=True)
    p.add_argument("--size-b", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=_run_lemma_check)

    p = sub.add_parser("query", help="one-shot weighted parity-check query")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--p", required=True, help="codeword bias, comma separated")
    p.add_argument("--q", required=True, help="parity bias, comma separated")
    p.add_argument("--seed", type=int, help="seed for sampling H")
    p.add_argument("--matrix-file", help="hex matrix file to load H from")
    p.add_argument("--dump-matrix", help="write the used H as hex rows")
    p.add_argument("--offset", help="offset bits, e.g. 0110")
    p.add_argument("--max-search-dim", type=int, default=24)
    p.set_defaults(func=_run_query)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
