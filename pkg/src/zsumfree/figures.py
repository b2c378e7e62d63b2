"""Figure rendering for sweeps and tables (written to files, never shown)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def plot_sweep(k: int, values: dict[int, float], path,
               rows=None) -> None:
    """f_n(k) against n; infinite values are marked separately at the top,
    table row values (when given) appear as horizontal guides."""
    ns = sorted(values)
    finite = [(n, values[n]) for n in ns if math.isfinite(values[n])]
    infinite = [n for n in ns if not math.isfinite(values[n])]
    fig, ax = plt.subplots(figsize=(7, 4))
    if finite:
        ax.plot([n for n, _ in finite], [v for _, v in finite],
                "o", ms=4, color="tab:blue", label="f_n(%d)" % k)
    top = max((v for _, v in finite), default=1) + 1
    if infinite:
        ax.plot(infinite, [top] * len(infinite), "x", color="tab:red",
                label="infinite")
    if rows:
        for r in rows:
            ax.axhline(r.value, lw=0.5, ls="--", color="gray")
    ax.set_xlabel("n")
    ax.set_ylabel("f_n(%d)" % k)
    ax.set_title("minimal nonempty subset-sum count, k=%d" % k)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
