"""Rendering reconstructions and the benchmark summary to PNG files.

Everything runs through the Agg backend so no display is needed, and
savefig metadata is pinned so identical runs produce identical bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .series import Observations, TimeSeries

__all__ = ["render_reconstruction", "render_summary"]

_RC = {
    "figure.dpi": 130,
    "savefig.dpi": 130,
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.grid": True,
    "grid.alpha": 0.25,
    "grid.linewidth": 0.6,
    "axes.linewidth": 0.8,
    "legend.framealpha": 0.9,
    "legend.fontsize": 8,
}

_META = {"Software": "gpfill"}


def render_reconstruction(path, truth: TimeSeries, obs: Observations,
                          mean, var, draws, title: str):
    """One cell's picture: truth, kept points, posterior mean, band, draws."""
    t = truth.grid.times()
    sd = np.sqrt(np.maximum(np.asarray(var, dtype=float), 0.0))
    mean = np.asarray(mean, dtype=float)
    draws = np.asarray(draws, dtype=float)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(7.2, 3.2))
        ax.fill_between(t, mean - 2.0 * sd, mean + 2.0 * sd,
                        color="#9ecae1", alpha=0.45, linewidth=0, label="mean ± 2 sd")
        for row in draws:
            ax.plot(t, row, color="#6baed6", linewidth=0.6, alpha=0.8)
        ax.plot(t, truth.values, color="#444444", linewidth=0.9, label="truth")
        ax.plot(t, mean, color="#d95f02", linewidth=1.2, label="posterior mean")
        ax.plot(obs.times, obs.values, linestyle="none", marker="o",
                markersize=3.5, color="#1b1b1b", label=f"kept points ({len(obs)})")
        ax.set_xlabel("t")
        ax.set_ylabel("y")
        ax.set_title(title)
        ax.legend(loc="upper right", ncol=2)
        fig.tight_layout()
        fig.savefig(path, format="png", metadata=dict(_META))
        plt.close(fig)


def render_summary(path, processes, fractions, scores):
    """Grouped bars of mape_ar by process and sparsity fraction.

    scores[(process, fraction)] holds the cell's value.
    """
    processes = list(processes)
    fractions = list(fractions)
    width = 0.8 / max(len(fractions), 1)
    palette = ["#3182bd", "#fd8d3c", "#74c476", "#9e9ac8", "#e377c2", "#8c6d31"]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5.6, 3.2))
        x = np.arange(len(processes), dtype=float)
        for j, frac in enumerate(fractions):
            heights = [scores[(proc, frac)] for proc in processes]
            offset = (j - (len(fractions) - 1) / 2.0) * width
            ax.bar(x + offset, heights, width=width * 0.92,
                   color=palette[j % len(palette)],
                   label=f"{frac * 100:g}% kept")
        ax.set_xticks(x)
        ax.set_xticklabels(processes)
        ax.set_ylabel("mape_ar")
        ax.set_title("forecast-based reconstruction error")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="png", metadata=dict(_META))
        plt.close(fig)
