"""Matplotlib renderings for the CLI's opt-in report figures.

Imported lazily by the CLI so plain table/CSV runs never touch matplotlib.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_ARM_STYLE = {"rx": ("tab:blue", "-"), "control": ("tab:red", "--")}


def render_profile_plot(tables, path: str | Path) -> None:
    """Spaghetti plot of per-replication arm profiles, one line per (rep, arm)."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for rep_index, rows in enumerate(tables):
        for arm, (color, style) in _ARM_STYLE.items():
            points = [(row.week, row.mean_y) for row in rows if row.arm == arm]
            ax.plot(
                [w for w, _ in points],
                [y for _, y in points],
                style,
                color=color,
                alpha=0.6,
                linewidth=1.2,
                label=arm if rep_index == 0 else None,
            )
    ax.set_xlabel("week")
    ax.set_ylabel("mean outcome")
    ax.set_title("Simulated arm profiles across replications")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_cbq_histogram(histogram, cbq: float, path: str | Path) -> None:
    """Bar chart of the predictive draws with the CBQ and zero marked."""
    centers = [center for center, _ in histogram]
    counts = [count for _, count in histogram]
    width = (centers[1] - centers[0]) * 0.95 if len(centers) > 1 else 1.0
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.bar(centers, counts, width=width, color="lightskyblue", edgecolor="none")
    ax.axvline(cbq, color="tab:red", linewidth=1.5, label=f"CBQ = {cbq:.3f}")
    ax.axvline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("predicted confirmatory estimate")
    ax.set_ylabel("draws")
    ax.set_title("Predictive distribution of the confirmatory estimate")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
