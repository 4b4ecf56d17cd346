"""Rendering of analysis results: CSV tables and matplotlib figures.

Everything here writes files; nothing is shown interactively.  The CLI's
analyze and demo paths call into this module when a report directory is
requested.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .security import EavesdropperTable, SecurityReport
from .walk import QuantumState

__all__ = [
    "GRID_CSV_COLUMNS",
    "write_grid_csv",
    "save_report_figure",
    "save_grid_figure",
    "save_position_figure",
    "save_message_count_figure",
]

GRID_CSV_COLUMNS = [
    "n",
    "N",
    "d",
    "t_min",
    "t_max",
    "von_neumann_entropy_bits",
    "shannon_entropy_bits",
    "holevo_bound_bits",
    "holevo_gap_bits",
]


def write_grid_csv(rows: list[dict], path: str | Path) -> None:
    """One CSV line per analyzed configuration."""
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=GRID_CSV_COLUMNS, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def save_report_figure(report: SecurityReport, title: str, path: str | Path) -> None:
    """Bar chart of the three entropy quantities for a single configuration."""
    labels = ["von Neumann\nS(rho_PK)", "Shannon\nH(key)", "gap\nH - S"]
    values = [
        report.von_neumann_entropy_bits,
        report.shannon_entropy_bits,
        report.holevo_gap_bits,
    ]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(labels, values, color=["#4878cf", "#ee854a", "#6acc65"])
    for x, v in enumerate(values):
        ax.text(x, v, f"{v:.3f}", ha="center", va="bottom", fontsize=9)
    ax.set_ylabel("bits")
    ax.set_title(title)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def save_grid_figure(rows: list[dict], path: str | Path) -> None:
    """Holevo gap against log2(d*|T|) across the grid; the points sit on y=x."""
    x = np.array(
        [np.log2(r["d"] * (r["t_max"] - r["t_min"] + 1)) for r in rows], dtype=float
    )
    y = np.array([r["holevo_gap_bits"] for r in rows], dtype=float)
    bits = np.array([r["n"] for r in rows])

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    lim = max(1.0, x.max() if len(x) else 1.0)
    ax1.plot([0, lim], [0, lim], "k--", lw=1, label="gap = log2(d|T|)")
    for n in sorted(set(bits.tolist())):
        mask = bits == n
        ax1.plot(x[mask], y[mask], "o", ms=6, alpha=0.8, label=f"n = {n}")
    ax1.set_xlabel("log2(d |T|)")
    ax1.set_ylabel("Holevo gap [bits]")
    ax1.legend(fontsize=8)

    idx = np.arange(len(rows))
    ax2.plot(idx, [r["shannon_entropy_bits"] for r in rows], "s-", ms=4, label="H(key)")
    ax2.plot(
        idx,
        [r["von_neumann_entropy_bits"] for r in rows],
        "o-",
        ms=4,
        label="S(rho_PK) = bound",
    )
    ax2.set_xlabel("configuration index")
    ax2.set_ylabel("bits")
    ax2.legend(fontsize=8)

    fig.tight_layout()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def save_position_figure(
    labeled_states: list[tuple[str, QuantumState]], path: str | Path
) -> None:
    """Position-probability bars for one or more states, one panel each."""
    count = len(labeled_states)
    fig, axes = plt.subplots(1, count, figsize=(3.2 * count, 3.0), squeeze=False)
    for ax, (label, state) in zip(axes[0], labeled_states):
        probs = state.position_probabilities()
        ax.bar(np.arange(state.n_positions), probs, color="#4878cf")
        ax.set_xlabel("position")
        ax.set_ylabel("probability")
        ax.set_ylim(0, 1.05)
        ax.set_title(label, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def save_message_count_figure(table: EavesdropperTable, path: str | Path) -> None:
    """Consistent-key count per message from the exhaustive enumeration."""
    messages = sorted(table.message_counts)
    counts = [table.message_counts[m] for m in messages]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(messages, counts, color="#6acc65")
    ax.set_xlabel("message")
    ax.set_ylabel("consistent keys")
    ax.set_title(
        f"{table.total_keys} keys enumerated, {table.ambiguous} ambiguous",
        fontsize=10,
    )
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
