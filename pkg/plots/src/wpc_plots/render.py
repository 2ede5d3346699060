"""Render block-error rate against average cost from experiment CSVs.

Consumes only the fixed CSV schema emitted by the simulation engine; one
curve per (scheme, k) group, log-scaled error axis, Wilson interval bars.
Zero-error points cannot sit on a log axis, so they are drawn at their
confidence upper bound with an open marker.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

EXPECTED_HEADER = [
    "setting", "scheme", "n", "k", "beta", "param_name", "param_value",
    "trials", "block_errors", "infeasible", "bler", "bler_ci_lo",
    "bler_ci_hi", "avg_cost_per_symbol", "master_seed",
]


@dataclass(frozen=True)
class PlotSpec:
    csv_paths: tuple
    out_path: str
    group_by: tuple = ("scheme", "k")
    title: str = ""
    dpi: int = 150


def load_rows(path: str | Path) -> list[dict]:
    """Parse one CSV against the exact schema; error on missing columns."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in EXPECTED_HEADER:
            if col not in header:
                raise ValueError(f"missing column: {col}")
        rows = list(reader)
    if not rows:
        raise ValueError("no data rows")
    return rows


def render(spec: PlotSpec) -> str:
    """Write the comparison figure; returns the output path."""
    groups: dict[tuple, list[dict]] = {}
    for path in spec.csv_paths:
        for row in load_rows(path):
            key = tuple(row[col] for col in spec.group_by)
            groups.setdefault(key, []).append(row)

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for key in sorted(groups):
        rows = sorted(groups[key], key=lambda r: float(r["avg_cost_per_symbol"]))
        costs = np.array([float(r["avg_cost_per_symbol"]) for r in rows])
        bler = np.array([float(r["bler"]) for r in rows])
        lo = np.array([float(r["bler_ci_lo"]) for r in rows])
        hi = np.array([float(r["bler_ci_hi"]) for r in rows])
        label = ", ".join(f"{c}={v}" for c, v in zip(spec.group_by, key))

        pos = bler > 0.0
        if pos.any():
            yerr = np.vstack([bler[pos] - lo[pos], hi[pos] - bler[pos]])
            line = ax.errorbar(
                costs[pos], bler[pos], yerr=yerr, marker="o", ms=4,
                capsize=2, lw=1.2, label=label,
            )
            color = line.lines[0].get_color()
        else:
            color = None
        if (~pos).any():
            # zero-error points: drawn at the CI upper bound, open marker
            ax.scatter(
                costs[~pos], hi[~pos], facecolors="none",
                edgecolors=color or "black", marker="o", s=30,
                label=None if pos.any() else label,
            )
    ax.set_yscale("log")
    ax.set_xlabel("average cost per symbol")
    ax.set_ylabel("block error rate")
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=spec.dpi, metadata={"Software": "wpc-plots"})
    plt.close(fig)
    return spec.out_path
